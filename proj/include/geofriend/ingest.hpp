#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "geofriend/types.hpp"

namespace geofriend::ingest {

enum class Format { Jsonl, Csv };

std::optional<Format> parse_format(std::string_view text);
std::string_view to_string(Format format);

// Field order of the CSV input and the key names of the JSONL input.
inline constexpr std::array<std::string_view, 5> kFieldNames = {
    "user_id_str", "in_reply_to_user_id_str", "lat", "lon", "created_at"};

// A record as it appears on the wire. Coordinates in decimal degrees.
struct RawRecord {
  std::string sender_id;
  std::optional<std::string> receiver_id;
  double lat = 0.0;
  double lon = 0.0;
  std::string created_at;

  friend bool operator==(const RawRecord&, const RawRecord&) = default;
};

enum class RejectReason {
  MalformedLine,
  MissingField,
  MalformedTimestamp,
  OutOfRangeCoordinate,
  SelfMention,
  OutsideBoundingBox,
};

inline constexpr std::size_t kRejectReasonCount = 6;

std::string_view to_string(RejectReason reason);

struct Rejection {
  RejectReason reason;
  std::string detail;
};

template <typename T>
using Parsed = std::variant<T, Rejection>;

// Decimal degrees. Containment is inclusive on every side.
struct BoundingBox {
  double lat_min = 0.0;
  double lat_max = 0.0;
  double lon_min = 0.0;
  double lon_max = 0.0;

  bool contains(double lat, double lon) const {
    return lat >= lat_min && lat <= lat_max && lon >= lon_min && lon <= lon_max;
  }
};

// Builds a box from two opposite corners "lat1,lon1,lat2,lon2" in any order.
// Throws Error(BadParameters) for malformed or zero-area boxes.
BoundingBox parse_bounding_box(std::string_view text);

// Accepts "Mon Sep 22 00:00:00 +0000 2014", ISO-8601 ("2014-09-22T00:00:00Z",
// optional fraction and offset) and plain epoch seconds. Returns epoch seconds.
std::optional<double> parse_timestamp(std::string_view text);

// Twitter created_at rendering of an integral epoch second, always +0000.
std::string format_twitter_timestamp(std::int64_t epoch_seconds);

Parsed<RawRecord> parse_record(std::string_view line, Format format);

// Converts to radians and epoch seconds and interns both ids. The timestamp is
// re-validated, so any RawRecord may be passed.
Parsed<MentionEvent> normalize(const RawRecord& raw, UserTable& users);

// Renders an event as one input line (no trailing newline). Re-parsing and
// normalizing the line reproduces the event bit for bit.
std::string format_record(const MentionEvent& event, const UserTable& users, Format format);

std::string csv_header();

struct IngestReport {
  std::size_t total = 0;
  std::size_t accepted = 0;
  std::array<std::size_t, kRejectReasonCount> rejected_by_reason{};
  // Accepted events identical to an earlier accepted event. They are kept.
  std::size_t duplicates = 0;

  std::size_t rejected() const;
  std::size_t rejected(RejectReason reason) const {
    return rejected_by_reason[static_cast<std::size_t>(reason)];
  }
  void write_csv(std::ostream& out) const;
};

struct LoadOptions {
  Format format = Format::Jsonl;
  std::optional<BoundingBox> bbox;
  // Parsing threads; the result does not depend on this value.
  unsigned threads = 1;
};

struct LoadResult {
  EventLog log;
  IngestReport report;
};

// Parses every non-blank line, drops rejected and out-of-box records, and
// returns the survivors sorted by time (ties keep input order). A CSV header
// line is skipped and not counted. Throws EmptyInput when nothing survives.
LoadResult load_events(std::istream& in, const LoadOptions& options);
LoadResult load_events(const std::filesystem::path& path, const LoadOptions& options);

// Versioned CSV snapshot of an EventLog.
inline constexpr std::string_view kCacheTag = "#geofriend-eventlog v1";

void write_event_cache(const EventLog& log, std::ostream& out);
void write_event_cache(const EventLog& log, const std::filesystem::path& path);
EventLog read_event_cache(std::istream& in);
EventLog read_event_cache(const std::filesystem::path& path);

}  // namespace geofriend::ingest
