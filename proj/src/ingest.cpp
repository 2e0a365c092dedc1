#include "geofriend/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "geofriend/csv.hpp"
#include "geofriend/error.hpp"
#include "geofriend/geodesy.hpp"

namespace geofriend::ingest {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 7> kWeekdays = {"Sun", "Mon", "Tue", "Wed",
                                                       "Thu", "Fri", "Sat"};
constexpr std::array<std::string_view, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                      "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

std::optional<int> parse_int(std::string_view text, int lo, int hi) {
  if (text.empty() || text.front() == '+' || text.front() == '-') {
    return std::nullopt;
  }
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < lo || value > hi) {
    return std::nullopt;
  }
  return value;
}

std::optional<double> civil_to_epoch(int year, int month, int day, int hour, int minute,
                                     int second) {
  namespace chr = std::chrono;
  const chr::year_month_day ymd{chr::year{year}, chr::month{static_cast<unsigned>(month)},
                                chr::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 59) {
    return std::nullopt;
  }
  const auto days = chr::sys_days{ymd}.time_since_epoch().count();
  return static_cast<double>(days) * 86400.0 + hour * 3600.0 + minute * 60.0 + second;
}

// "+hhmm", "+hh:mm" or "+hh"; returns the offset east of UTC in seconds.
std::optional<int> parse_offset(std::string_view text) {
  if (text.size() < 3 || (text[0] != '+' && text[0] != '-')) {
    return std::nullopt;
  }
  const int sign = text[0] == '-' ? -1 : 1;
  text.remove_prefix(1);
  std::string digits;
  for (const char c : text) {
    if (c != ':') {
      digits.push_back(c);
    }
  }
  if (digits.size() != 2 && digits.size() != 4) {
    return std::nullopt;
  }
  const auto hours = parse_int(std::string_view(digits).substr(0, 2), 0, 14);
  const auto minutes = digits.size() == 4 ? parse_int(std::string_view(digits).substr(2), 0, 59)
                                          : std::optional<int>(0);
  if (!hours || !minutes) {
    return std::nullopt;
  }
  return sign * (*hours * 3600 + *minutes * 60);
}

std::optional<std::array<int, 3>> parse_clock(std::string_view text) {
  if (text.size() != 8 || text[2] != ':' || text[5] != ':') {
    return std::nullopt;
  }
  const auto h = parse_int(text.substr(0, 2), 0, 23);
  const auto m = parse_int(text.substr(3, 2), 0, 59);
  const auto s = parse_int(text.substr(6, 2), 0, 59);
  if (!h || !m || !s) {
    return std::nullopt;
  }
  return std::array<int, 3>{*h, *m, *s};
}

std::optional<double> parse_twitter(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string weekday, month, day, clock, offset, year, extra;
  if (!(in >> weekday >> month >> day >> clock >> offset >> year) || (in >> extra)) {
    return std::nullopt;
  }
  const auto weekday_it = std::find(kWeekdays.begin(), kWeekdays.end(), weekday);
  if (weekday_it == kWeekdays.end()) {
    return std::nullopt;
  }
  const auto month_it = std::find(kMonths.begin(), kMonths.end(), month);
  const auto d = parse_int(day, 1, 31);
  const auto hms = parse_clock(clock);
  const auto off = parse_offset(offset);
  const auto y = parse_int(year, 1, 9999);
  if (month_it == kMonths.end() || !d || !hms || !off || !y) {
    return std::nullopt;
  }
  const int m = static_cast<int>(month_it - kMonths.begin()) + 1;
  const auto local = civil_to_epoch(*y, m, *d, (*hms)[0], (*hms)[1], (*hms)[2]);
  if (!local) {
    return std::nullopt;
  }
  // The weekday names the local date and has to agree with it.
  const std::chrono::sys_days local_day{std::chrono::year{*y} / m / *d};
  if (std::chrono::weekday{local_day}.c_encoding() != static_cast<unsigned>(weekday_it - kWeekdays.begin())) {
    return std::nullopt;
  }
  return *local - *off;
}

std::optional<double> parse_iso8601(std::string_view text) {
  if (text.size() < 19 || text[4] != '-' || text[7] != '-' ||
      (text[10] != 'T' && text[10] != 't' && text[10] != ' ')) {
    return std::nullopt;
  }
  const auto y = parse_int(text.substr(0, 4), 1, 9999);
  const auto m = parse_int(text.substr(5, 2), 1, 12);
  const auto d = parse_int(text.substr(8, 2), 1, 31);
  const auto hms = parse_clock(text.substr(11, 8));
  if (!y || !m || !d || !hms) {
    return std::nullopt;
  }
  auto rest = text.substr(19);
  double fraction = 0.0;
  if (!rest.empty() && rest.front() == '.') {
    std::size_t n = 1;
    while (n < rest.size() && rest[n] >= '0' && rest[n] <= '9') {
      ++n;
    }
    if (n == 1) {
      return std::nullopt;
    }
    fraction = *csv::parse_double(std::string("0") + std::string(rest.substr(0, n)));
    rest.remove_prefix(n);
  }
  int offset = 0;
  if (rest == "Z" || rest == "z") {
    offset = 0;
  } else if (!rest.empty()) {
    const auto off = parse_offset(rest);
    if (!off) {
      return std::nullopt;
    }
    offset = *off;
  }
  const auto local = civil_to_epoch(*y, *m, *d, (*hms)[0], (*hms)[1], (*hms)[2]);
  if (!local) {
    return std::nullopt;
  }
  return *local + fraction - offset;
}

std::optional<double> parse_epoch(std::string_view text) {
  auto body = text;
  if (!body.empty() && body.front() == '-') {
    body.remove_prefix(1);
  }
  if (body.empty() || body.front() == '.' || body.back() == '.') {
    return std::nullopt;
  }
  int dots = 0;
  for (const char c : body) {
    if (c == '.') {
      ++dots;
    } else if (c < '0' || c > '9') {
      return std::nullopt;
    }
  }
  if (dots > 1) {
    return std::nullopt;
  }
  const auto value = csv::parse_double(text);
  if (!value || !std::isfinite(*value)) {
    return std::nullopt;
  }
  return value;
}

Rejection reject(RejectReason reason, std::string detail) { return {reason, std::move(detail)}; }

std::optional<Rejection> check_coordinates(double lat, double lon) {
  if (!std::isfinite(lat) || !std::isfinite(lon) || std::abs(lat) > 90.0 ||
      std::abs(lon) > 180.0) {
    return reject(RejectReason::OutOfRangeCoordinate,
                  "lat " + csv::shortest(lat) + ", lon " + csv::shortest(lon));
  }
  return std::nullopt;
}

// Finishes a record once all five fields have been extracted as text or numbers.
Parsed<RawRecord> finish_record(RawRecord raw) {
  if (raw.sender_id.empty()) {
    return reject(RejectReason::MissingField, "user_id_str is empty");
  }
  if (!raw.receiver_id || raw.receiver_id->empty()) {
    return reject(RejectReason::MissingField, "in_reply_to_user_id_str is empty");
  }
  if (auto bad = check_coordinates(raw.lat, raw.lon)) {
    return *bad;
  }
  if (!parse_timestamp(raw.created_at)) {
    return reject(RejectReason::MalformedTimestamp, "created_at '" + raw.created_at + "'");
  }
  return raw;
}

Parsed<RawRecord> parse_csv_record(std::string_view line) {
  const auto fields = csv::split_line(line);
  if (!fields) {
    return reject(RejectReason::MalformedLine, "unterminated quote");
  }
  if (fields->size() != kFieldNames.size()) {
    return reject(RejectReason::MalformedLine,
                  "expected 5 fields, got " + std::to_string(fields->size()));
  }
  const auto& f = *fields;
  if (f[2].empty() || f[3].empty()) {
    return reject(RejectReason::MissingField, "lat/lon is empty");
  }
  if (f[4].empty()) {
    return reject(RejectReason::MissingField, "created_at is empty");
  }
  const auto lat = csv::parse_double(f[2]);
  const auto lon = csv::parse_double(f[3]);
  if (!lat || !lon) {
    return reject(RejectReason::MalformedLine, "non-numeric coordinate");
  }
  RawRecord raw;
  raw.sender_id = f[0];
  if (!f[1].empty()) {
    raw.receiver_id = f[1];
  }
  raw.lat = *lat;
  raw.lon = *lon;
  raw.created_at = f[4];
  return finish_record(std::move(raw));
}

// A JSON scalar that may arrive as a string or a number.
std::optional<std::string> json_text(const json& obj, std::string_view key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    return std::nullopt;
  }
  if (it->is_string()) {
    return it->get<std::string>();
  }
  if (it->is_number_integer()) {
    return std::to_string(it->get<std::int64_t>());
  }
  if (it->is_number_unsigned()) {
    return std::to_string(it->get<std::uint64_t>());
  }
  if (it->is_number_float()) {
    return csv::shortest_fixed(it->get<double>());
  }
  return std::nullopt;
}

Parsed<RawRecord> parse_json_record(std::string_view line) {
  const json obj = json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    return reject(RejectReason::MalformedLine, "not a JSON object");
  }
  RawRecord raw;
  const auto sender = json_text(obj, kFieldNames[0]);
  if (!sender) {
    return reject(RejectReason::MissingField, "no user_id_str");
  }
  raw.sender_id = *sender;
  raw.receiver_id = json_text(obj, kFieldNames[1]);
  for (const auto key : {kFieldNames[2], kFieldNames[3]}) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      return reject(RejectReason::MissingField, "no " + std::string(key));
    }
    std::optional<double> value;
    if (it->is_number()) {
      value = it->get<double>();
    } else if (it->is_string()) {
      value = csv::parse_double(it->get_ref<const std::string&>());
    }
    if (!value) {
      return reject(RejectReason::MalformedLine, "non-numeric " + std::string(key));
    }
    (key == kFieldNames[2] ? raw.lat : raw.lon) = *value;
  }
  const auto created = json_text(obj, kFieldNames[4]);
  if (!created || created->empty()) {
    return reject(RejectReason::MissingField, "no created_at");
  }
  raw.created_at = *created;
  if (!raw.receiver_id || raw.receiver_id->empty()) {
    return reject(RejectReason::MissingField, "in_reply_to_user_id_str is empty");
  }
  return finish_record(std::move(raw));
}

// Degree text whose conversion back to radians is exactly `radians`.
double exact_degrees(double radians) {
  const double guess = geodesy::to_degrees(radians);
  if (geodesy::to_radians(guess) == radians) {
    return guess;
  }
  double up = guess;
  double down = guess;
  for (int step = 0; step < 8; ++step) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    if (geodesy::to_radians(up) == radians) {
      return up;
    }
    if (geodesy::to_radians(down) == radians) {
      return down;
    }
  }
  return guess;
}

std::string format_time(double t, Format format) {
  // Years 0001..9999 only; anything else falls back to epoch seconds.
  if (format == Format::Jsonl && t == std::floor(t) && t >= -62135596800.0 && t < 253402300800.0) {
    return format_twitter_timestamp(static_cast<std::int64_t>(t));
  }
  return csv::shortest_fixed(t);
}

struct LineResult {
  Parsed<RawRecord> record = Rejection{};
  double t = 0.0;
};

}  // namespace

std::optional<Format> parse_format(std::string_view text) {
  if (text == "jsonl") {
    return Format::Jsonl;
  }
  if (text == "csv") {
    return Format::Csv;
  }
  return std::nullopt;
}

std::string_view to_string(Format format) { return format == Format::Jsonl ? "jsonl" : "csv"; }

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::MalformedLine:
      return "malformed_line";
    case RejectReason::MissingField:
      return "missing_field";
    case RejectReason::MalformedTimestamp:
      return "malformed_timestamp";
    case RejectReason::OutOfRangeCoordinate:
      return "out_of_range_coordinate";
    case RejectReason::SelfMention:
      return "self_mention";
    case RejectReason::OutsideBoundingBox:
      return "outside_bbox";
  }
  return "unknown";
}

BoundingBox parse_bounding_box(std::string_view text) {
  const auto fields = csv::split_line(text);
  if (!fields || fields->size() != 4) {
    throw Error(ErrorCode::BadParameters, "bbox needs lat1,lon1,lat2,lon2: '" + std::string(text) + "'");
  }
  std::array<double, 4> v{};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto value = csv::parse_double((*fields)[i]);
    if (!value) {
      throw Error(ErrorCode::BadParameters, "bbox value '" + (*fields)[i] + "' is not a number");
    }
    v[i] = *value;
  }
  BoundingBox box{std::min(v[0], v[2]), std::max(v[0], v[2]), std::min(v[1], v[3]),
                  std::max(v[1], v[3])};
  if (!(box.lat_min < box.lat_max) || !(box.lon_min < box.lon_max) ||
      check_coordinates(box.lat_min, box.lon_min) || check_coordinates(box.lat_max, box.lon_max)) {
    throw Error(ErrorCode::BadParameters, "bbox '" + std::string(text) + "' is empty or out of range");
  }
  return box;
}

std::optional<double> parse_timestamp(std::string_view text) {
  while (!text.empty() && text.front() == ' ') {
    text.remove_prefix(1);
  }
  while (!text.empty() && text.back() == ' ') {
    text.remove_suffix(1);
  }
  if (text.empty()) {
    return std::nullopt;
  }
  if (auto t = parse_epoch(text)) {
    return t;
  }
  if (auto t = parse_iso8601(text)) {
    return t;
  }
  return parse_twitter(text);
}

std::string format_twitter_timestamp(std::int64_t epoch_seconds) {
  namespace chr = std::chrono;
  const chr::sys_seconds tp{chr::seconds{epoch_seconds}};
  const auto day_point = chr::floor<chr::days>(tp);
  const chr::year_month_day ymd{day_point};
  const chr::hh_mm_ss hms{tp - day_point};
  const chr::weekday wd{day_point};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s %s %02u %02d:%02d:%02d +0000 %04d",
                kWeekdays[wd.c_encoding()].data(),
                kMonths[static_cast<unsigned>(ymd.month()) - 1].data(),
                static_cast<unsigned>(ymd.day()), static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()),
                static_cast<int>(ymd.year()));
  return buf;
}

Parsed<RawRecord> parse_record(std::string_view line, Format format) {
  return format == Format::Csv ? parse_csv_record(line) : parse_json_record(line);
}

Parsed<MentionEvent> normalize(const RawRecord& raw, UserTable& users) {
  if (raw.sender_id.empty() || !raw.receiver_id || raw.receiver_id->empty()) {
    return reject(RejectReason::MissingField, "sender or receiver missing");
  }
  if (auto bad = check_coordinates(raw.lat, raw.lon)) {
    return *bad;
  }
  const auto t = parse_timestamp(raw.created_at);
  if (!t) {
    return reject(RejectReason::MalformedTimestamp, "created_at '" + raw.created_at + "'");
  }
  if (raw.sender_id == *raw.receiver_id) {
    return reject(RejectReason::SelfMention, "user " + raw.sender_id + " mentions itself");
  }
  MentionEvent event;
  event.sender = users.intern(raw.sender_id);
  event.receiver = users.intern(*raw.receiver_id);
  event.lat = geodesy::to_radians(raw.lat);
  event.lon = geodesy::to_radians(raw.lon);
  if (event.lon == -std::numbers::pi) {
    event.lon = std::numbers::pi;
  }
  event.t = *t;
  return event;
}

std::string format_record(const MentionEvent& event, const UserTable& users, Format format) {
  const double lat = exact_degrees(event.lat);
  const double lon = exact_degrees(event.lon);
  const auto created = format_time(event.t, format);
  if (format == Format::Csv) {
    return csv::quote(users.name(event.sender)) + "," + csv::quote(users.name(event.receiver)) +
           "," + csv::shortest(lat) + "," + csv::shortest(lon) + "," + created;
  }
  nlohmann::ordered_json obj;
  obj[std::string(kFieldNames[0])] = users.name(event.sender);
  obj[std::string(kFieldNames[1])] = users.name(event.receiver);
  obj[std::string(kFieldNames[2])] = lat;
  obj[std::string(kFieldNames[3])] = lon;
  obj[std::string(kFieldNames[4])] = created;
  return obj.dump();
}

std::string csv_header() {
  std::string header;
  for (const auto name : kFieldNames) {
    if (!header.empty()) {
      header.push_back(',');
    }
    header += name;
  }
  return header;
}

std::size_t IngestReport::rejected() const {
  std::size_t sum = 0;
  for (const auto n : rejected_by_reason) {
    sum += n;
  }
  return sum;
}

void IngestReport::write_csv(std::ostream& out) const {
  out << "reason,count\n";
  out << "total," << total << "\n";
  out << "accepted," << accepted << "\n";
  out << "rejected," << rejected() << "\n";
  for (std::size_t i = 0; i < kRejectReasonCount; ++i) {
    out << to_string(static_cast<RejectReason>(i)) << "," << rejected_by_reason[i] << "\n";
  }
  out << "duplicates," << duplicates << "\n";
}

LoadResult load_events(std::istream& in, const LoadOptions& options) {
  std::vector<std::string> lines;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first && line.rfind("\xEF\xBB\xBF", 0) == 0) {
      line.erase(0, 3);
    }
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.find_first_not_of(" \t") == std::string::npos) {
      continue;
    }
    if (first && options.format == Format::Csv && line.rfind(kFieldNames[0], 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    lines.push_back(std::move(line));
  }

  std::vector<LineResult> results(lines.size());
  const auto parse_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto parsed = parse_record(lines[i], options.format);
      if (auto* raw = std::get_if<RawRecord>(&parsed)) {
        if (options.bbox && !options.bbox->contains(raw->lat, raw->lon)) {
          parsed = reject(RejectReason::OutsideBoundingBox, "");
        } else {
          results[i].t = *parse_timestamp(raw->created_at);
        }
      }
      results[i].record = std::move(parsed);
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(options.threads, lines.size()));
  if (workers == 1) {
    parse_range(0, lines.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (lines.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(lines.size(), w * chunk);
      const std::size_t end = std::min(lines.size(), begin + chunk);
      pool.emplace_back(parse_range, begin, end);
    }
    for (auto& th : pool) {
      th.join();
    }
  }

  LoadResult out;
  out.report.total = lines.size();
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (const auto* rej = std::get_if<Rejection>(&results[i].record)) {
      ++out.report.rejected_by_reason[static_cast<std::size_t>(rej->reason)];
    } else {
      order.push_back(i);
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return results[a].t < results[b].t; });

  for (const auto i : order) {
    auto event = normalize(std::get<RawRecord>(results[i].record), out.log.users);
    if (const auto* rej = std::get_if<Rejection>(&event)) {
      ++out.report.rejected_by_reason[static_cast<std::size_t>(rej->reason)];
    } else {
      out.log.events.push_back(std::get<MentionEvent>(event));
    }
  }
  out.report.accepted = out.log.events.size();

  using Key = std::tuple<std::uint32_t, std::uint32_t, double, double, double>;
  std::vector<Key> keys;
  keys.reserve(out.log.events.size());
  for (const auto& e : out.log.events) {
    keys.emplace_back(e.sender.value, e.receiver.value, e.lat, e.lon, e.t);
  }
  std::sort(keys.begin(), keys.end());
  for (std::size_t i = 1; i < keys.size(); ++i) {
    if (keys[i] == keys[i - 1]) {
      ++out.report.duplicates;
    }
  }

  if (out.log.empty()) {
    throw Error(ErrorCode::EmptyInput, "no accepted records out of " +
                                           std::to_string(out.report.total) + " lines");
  }
  return out;
}

LoadResult load_events(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read '" + path.string() + "'");
  }
  return load_events(in, options);
}

void write_event_cache(const EventLog& log, std::ostream& out) {
  out << kCacheTag << "\n" << csv_header() << "\n";
  for (const auto& e : log.events) {
    out << format_record(e, log.users, Format::Csv) << "\n";
  }
}

void write_event_cache(const EventLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  }
  write_event_cache(log, out);
}

EventLog read_event_cache(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCacheTag) {
    throw Error(ErrorCode::BadCache, "missing version tag '" + std::string(kCacheTag) + "'");
  }
  if (!std::getline(in, line) || line != csv_header()) {
    throw Error(ErrorCode::BadCache, "missing header");
  }
  EventLog log;
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    auto raw = parse_record(line, Format::Csv);
    const auto* rec = std::get_if<RawRecord>(&raw);
    if (rec == nullptr) {
      throw Error(ErrorCode::BadCache, "line " + std::to_string(line_no) + ": " +
                                           std::get<Rejection>(raw).detail);
    }
    auto event = normalize(*rec, log.users);
    if (const auto* rej = std::get_if<Rejection>(&event)) {
      throw Error(ErrorCode::BadCache, "line " + std::to_string(line_no) + ": " + rej->detail);
    }
    const auto& e = std::get<MentionEvent>(event);
    if (!log.events.empty() && e.t < log.events.back().t) {
      throw Error(ErrorCode::BadCache, "line " + std::to_string(line_no) + " is out of time order");
    }
    log.events.push_back(e);
  }
  return log;
}

EventLog read_event_cache(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read event cache '" + path.string() + "'");
  }
  return read_event_cache(in);
}

}  // namespace geofriend::ingest
