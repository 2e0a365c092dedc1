#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "geofriend/error.hpp"
#include "geofriend/geodesy.hpp"
#include "geofriend/ingest.hpp"

using namespace geofriend;
using namespace geofriend::ingest;

namespace {

// Days since 1970-01-01 by the era-based civil calendar formula.
long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

std::string jsonl(const std::string& s, const std::string& r, double lat, double lon, const std::string& t) {
  std::ostringstream o;
  o << "{\"user_id_str\":\"" << s << "\",\"in_reply_to_user_id_str\":\"" << r << "\",\"lat\":" << lat
    << ",\"lon\":" << lon << ",\"created_at\":\"" << t << "\"}";
  return o.str();
}

RejectReason reason_of(const Parsed<RawRecord>& p) { return std::get<Rejection>(p).reason; }

LoadResult load_text(const std::string& text, LoadOptions options = {}) {
  std::istringstream in(text);
  return load_events(in, options);
}

}  // namespace

TEST_CASE("Twitter timestamps match an independent calendar computation") {
  CHECK(*parse_timestamp("Mon Sep 22 00:00:00 +0000 2014") == 1411344000.0);
  CHECK(days_from_civil(2014, 9, 22) * 86400 == 1411344000);
  CHECK(*parse_timestamp("Sat Feb 29 12:34:56 +0000 2020") ==
        static_cast<double>(days_from_civil(2020, 2, 29) * 86400 + 12 * 3600 + 34 * 60 + 56));
  CHECK(*parse_timestamp("Wed Dec 31 23:59:59 +0000 1969") == -1.0);
  CHECK(*parse_timestamp("Mon Sep 22 02:00:00 +0200 2014") == 1411344000.0);
  CHECK(*parse_timestamp("Sun Sep 21 19:00:00 -0500 2014") == 1411344000.0);
}

TEST_CASE("ISO-8601 and epoch timestamps") {
  CHECK(*parse_timestamp("2014-09-22T00:00:00Z") == 1411344000.0);
  CHECK(*parse_timestamp("2014-09-22 02:00:00+02:00") == 1411344000.0);
  CHECK(*parse_timestamp("2014-09-22T00:00:00.25Z") == 1411344000.25);
  CHECK(*parse_timestamp("1411344000") == 1411344000.0);
  CHECK(*parse_timestamp("1411344000.5") == 1411344000.5);
  CHECK(*parse_timestamp("-5") == -5.0);
}

TEST_CASE("malformed timestamps") {
  for (const char* bad : {"", "yesterday", "Mon Sep 31 00:00:00 +0000 2014", "Tue Sep 22 00:00:00 +0000 2014",
                          "2014-13-01T00:00:00Z", "2014-09-22T24:00:00Z", "2014-09-22T00:00:60Z", "1e9",
                          "12:00", "2014-09-22T00:00:00+2"}) {
    CAPTURE(bad);
    CHECK_FALSE(parse_timestamp(bad).has_value());
  }
}

TEST_CASE("Twitter formatting round-trips") {
  for (const std::int64_t t : {0LL, 1411344000LL, -1LL, 951782400LL, 4102444800LL}) {
    CHECK(*parse_timestamp(format_twitter_timestamp(t)) == static_cast<double>(t));
  }
  CHECK(format_twitter_timestamp(1411344000) == "Mon Sep 22 00:00:00 +0000 2014");
}

TEST_CASE("a complete JSONL record parses") {
  const auto p = parse_record(jsonl("1", "2", 34.05, -118.24, "Mon Sep 22 00:00:00 +0000 2014"), Format::Jsonl);
  REQUIRE(std::holds_alternative<RawRecord>(p));
  const auto& r = std::get<RawRecord>(p);
  CHECK(r.sender_id == "1");
  CHECK(*r.receiver_id == "2");
  CHECK(r.lat == 34.05);
  CHECK(r.lon == -118.24);
}

TEST_CASE("numeric ids and string coordinates are accepted in JSONL") {
  const auto p = parse_record(
      R"({"user_id_str":17,"in_reply_to_user_id_str":"9","lat":"34.5","lon":-118,"created_at":1411344000})",
      Format::Jsonl);
  REQUIRE(std::holds_alternative<RawRecord>(p));
  CHECK(std::get<RawRecord>(p).sender_id == "17");
  CHECK(std::get<RawRecord>(p).lat == 34.5);
}

TEST_CASE("rejections carry a reason") {
  CHECK(reason_of(parse_record(jsonl("1", "", 1, 1, "0"), Format::Jsonl)) == RejectReason::MissingField);
  CHECK(reason_of(parse_record(
            R"({"user_id_str":"1","in_reply_to_user_id_str":null,"lat":1,"lon":1,"created_at":"0"})",
            Format::Jsonl)) == RejectReason::MissingField);
  CHECK(reason_of(parse_record(R"({"user_id_str":"1","lat":1,"lon":1,"created_at":"0"})", Format::Jsonl)) ==
        RejectReason::MissingField);
  CHECK(reason_of(parse_record(jsonl("1", "2", 91.0, 1, "0"), Format::Jsonl)) ==
        RejectReason::OutOfRangeCoordinate);
  CHECK(reason_of(parse_record(jsonl("1", "2", 1, -180.5, "0"), Format::Jsonl)) ==
        RejectReason::OutOfRangeCoordinate);
  CHECK(reason_of(parse_record(jsonl("1", "2", 1, 1, "soon"), Format::Jsonl)) ==
        RejectReason::MalformedTimestamp);
  CHECK(reason_of(parse_record("{not json", Format::Jsonl)) == RejectReason::MalformedLine);
  CHECK(reason_of(parse_record("[1,2]", Format::Jsonl)) == RejectReason::MalformedLine);
  CHECK(reason_of(parse_record("1,2,3", Format::Csv)) == RejectReason::MalformedLine);
  CHECK(reason_of(parse_record("1,2,abc,3,0", Format::Csv)) == RejectReason::MalformedLine);
  CHECK(reason_of(parse_record("1,,3,4,0", Format::Csv)) == RejectReason::MissingField);
  CHECK(reason_of(parse_record("\"1,2,3,4,0", Format::Csv)) == RejectReason::MalformedLine);
}

TEST_CASE("normalize converts degrees and interns ids") {
  UserTable users;
  RawRecord raw{"a", std::string("b"), 90.0, -180.0, "Mon Sep 22 00:00:00 +0000 2014"};
  const auto e = std::get<MentionEvent>(normalize(raw, users));
  CHECK(e.lat == std::numbers::pi / 2);
  CHECK(e.lon == std::numbers::pi);  // -180 and 180 are the same meridian
  CHECK(e.t == 1411344000.0);
  CHECK(users.name(e.sender) == "a");
  CHECK(users.name(e.receiver) == "b");

  raw.receiver_id = "a";
  const auto self = normalize(raw, users);
  REQUIRE(std::holds_alternative<Rejection>(self));
  CHECK(std::get<Rejection>(self).reason == RejectReason::SelfMention);
  CHECK(users.size() == 2);
}

TEST_CASE("bounding boxes") {
  const auto box = parse_bounding_box("35,-117,33,-119");
  CHECK(box.lat_min == 33);
  CHECK(box.lat_max == 35);
  CHECK(box.lon_min == -119);
  CHECK(box.contains(34, -118));
  CHECK(box.contains(33, -119));
  CHECK_FALSE(box.contains(36, -118));
  CHECK_THROWS_AS(parse_bounding_box("1,2,3"), Error);
  CHECK_THROWS_AS(parse_bounding_box("1,2,1,3"), Error);
  CHECK_THROWS_AS(parse_bounding_box("a,b,c,d"), Error);
}

TEST_CASE("3 valid lines and 1 malformed") {
  const std::string text = jsonl("1", "2", 1, 1, "30") + "\n{broken\n" + jsonl("2", "1", 1, 1, "10") + "\n\n" +
                           jsonl("3", "1", 1, 1, "20") + "\n";
  const auto r = load_text(text);
  CHECK(r.log.size() == 3);
  CHECK(r.report.total == 4);
  CHECK(r.report.accepted == 3);
  CHECK(r.report.rejected() == 1);
  CHECK(r.report.rejected(RejectReason::MalformedLine) == 1);
  // Sorted ascending by time.
  CHECK(r.log.events[0].t == 10);
  CHECK(r.log.events[1].t == 20);
  CHECK(r.log.events[2].t == 30);
}

TEST_CASE("ties keep input order") {
  const std::string text = jsonl("a", "b", 1, 1, "5") + "\n" + jsonl("c", "d", 1, 1, "5") + "\n" +
                           jsonl("e", "f", 1, 1, "1") + "\n";
  const auto r = load_text(text);
  CHECK(r.log.users.name(r.log.events[0].sender) == "e");
  CHECK(r.log.users.name(r.log.events[1].sender) == "a");
  CHECK(r.log.users.name(r.log.events[2].sender) == "c");
}

TEST_CASE("bounding box filtering is counted") {
  const std::string text = jsonl("1", "2", 34, -118, "1") + "\n" + jsonl("2", "1", 51, 0, "2") + "\n";
  LoadOptions options;
  options.bbox = parse_bounding_box("33,-119,35,-117");
  const auto r = load_text(text, options);
  CHECK(r.log.size() == 1);
  CHECK(r.report.rejected(RejectReason::OutsideBoundingBox) == 1);
  std::ostringstream csv;
  r.report.write_csv(csv);
  CHECK(csv.str().find("outside_bbox,1\n") != std::string::npos);

  options.bbox = parse_bounding_box("-10,-10,-5,-5");
  try {
    load_text(text, options);
    FAIL("expected EmptyInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyInput);
  }
}

TEST_CASE("duplicates are kept and counted") {
  const auto line = jsonl("1", "2", 1, 1, "5");
  const auto r = load_text(line + "\n" + line + "\n" + line + "\n");
  CHECK(r.log.size() == 3);
  CHECK(r.report.duplicates == 2);
}

TEST_CASE("CSV input with header, quotes and BOM") {
  const std::string text = "\xEF\xBB\xBF" + csv_header() + "\n\"a,1\",b,34.0,-118.0,2014-09-22T00:00:00Z\r\nb,\"a,1\",34,-118,1411344001\n";
  LoadOptions options;
  options.format = Format::Csv;
  const auto r = load_text(text, options);
  CHECK(r.report.total == 2);
  REQUIRE(r.log.size() == 2);
  CHECK(r.log.users.name(r.log.events[0].sender) == "a,1");
}

TEST_CASE("empty input and unreadable paths") {
  CHECK_THROWS_AS(load_text("\n\n"), Error);
  try {
    load_events(std::filesystem::path("/no/such/file.jsonl"), {});
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
    CHECK(std::string(e.what()).find("/no/such/file.jsonl") != std::string::npos);
  }
}

TEST_CASE("event cache round-trips and rejects damage") {
  const std::string text = jsonl("1", "2", 34.123456789, -118.5, "1411344000") + "\n" +
                           jsonl("2", "1", -33.9, 151.2, "1411344000.75") + "\n";
  const auto r = load_text(text);
  std::stringstream cache;
  write_event_cache(r.log, cache);
  CHECK(cache.str().rfind(std::string(kCacheTag), 0) == 0);
  const auto back = read_event_cache(cache);
  CHECK(back.events == r.log.events);
  CHECK(back.users.name(back.events[0].sender) == "1");

  for (const std::string bad : {std::string("garbage\n"), std::string(kCacheTag) + "\nwrong header\n",
                                cache.str() + "1,2,3\n"}) {
    std::istringstream in(bad);
    try {
      read_event_cache(in);
      FAIL("expected BadCache");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BadCache);
    }
  }
}

TEST_CASE("thread count does not change the result") {
  std::string text;
  for (int i = 0; i < 500; ++i) {
    text += jsonl(std::to_string(i % 7), std::to_string((i + 1) % 7), 10 + i * 0.01, 20, std::to_string(1000 - i % 50)) + "\n";
    if (i % 13 == 0) {
      text += "{bad\n";
    }
  }
  LoadOptions one, four;
  four.threads = 4;
  const auto a = load_text(text, one);
  const auto b = load_text(text, four);
  CHECK(a.log.events == b.log.events);
  CHECK(a.report.rejected() == b.report.rejected());
}
