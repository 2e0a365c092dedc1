#include <cmath>

#include "doctest.h"
#include "geofriend/error.hpp"
#include "geofriend/geodesy.hpp"
#include "geofriend/pairdist.hpp"
#include "support/fixtures.hpp"

using namespace geofriend;
using namespace geofriend::pairdist;
using testing::LogBuilder;

namespace {

// Longitude offset on the equator that is exactly `km` away under the law of
// cosines with R = 6371.
double lon_for_km(double km) { return geodesy::to_degrees(km / 6371.0); }

}  // namespace

TEST_CASE("static users: the estimate is their distance") {
  const auto log = LogBuilder().add("u", "v", 0, 34.05, -118.24).add("v", "u", 600, 34.10, -118.30).build();
  const auto table = estimate_distances(log);
  REQUIRE(table.size() == 1);
  CHECK(table.rows[0].samples == 1);
  CHECK(table.rows[0].mean_km ==
        geodesy::distance_sloc({geodesy::to_radians(34.05), geodesy::to_radians(-118.24)},
                               {geodesy::to_radians(34.10), geodesy::to_radians(-118.30)}));
}

TEST_CASE("a 61 minute reply gives no sample") {
  const auto log = LogBuilder().add("u", "v", 0, 0, 0).add("v", "u", 61 * 60, 0, 1).build();
  CHECK(estimate_distances(log).empty());
  CHECK(estimate_distances(log, 61 * 60 + 1).size() == 1);
  // The interval is strict.
  const auto edge = LogBuilder().add("u", "v", 0, 0, 0).add("v", "u", 3600, 0, 1).build();
  CHECK(estimate_distances(edge).empty());
}

TEST_CASE("two exchanges at 2 km and 4 km average to 3 km") {
  const auto log = LogBuilder()
                       .add("u", "v", 0, 0, 0)
                       .add("v", "u", 300, 0, lon_for_km(2.0))
                       .add("u", "v", 5000, 0, 0)
                       .add("v", "u", 5100, 0, lon_for_km(4.0))
                       .build();
  const auto samples = match_exchanges(log);
  REQUIRE(samples.size() == 2);
  CHECK(std::abs(samples[0].distance_km - 2.0) < 1e-9);
  CHECK(std::abs(samples[1].distance_km - 4.0) < 1e-9);
  const auto table = estimate_distances(log);
  REQUIRE(table.size() == 1);
  CHECK(table.rows[0].samples == 2);
  CHECK(std::abs(table.rows[0].mean_km - 3.0) < 1e-9);
  CHECK(table.rows[0].min_km <= table.rows[0].mean_km);
  CHECK(table.rows[0].max_km >= table.rows[0].mean_km);
}

TEST_CASE("each event takes part in one exchange at most") {
  // Two mentions, one reply: one sample.
  const auto log = LogBuilder().add("u", "v", 0).add("u", "v", 10).add("v", "u", 20).build();
  CHECK(match_exchanges(log).size() == 1);
  // A reply followed by a counter-reply is still one exchange each way.
  const auto chain = LogBuilder().add("u", "v", 0).add("v", "u", 10).add("u", "v", 20).add("v", "u", 30).build();
  CHECK(match_exchanges(chain).size() == 2);
}

TEST_CASE("a reply the initiator never saw does not pair with later mentions") {
  // v's late reply at 4000 is the first reverse event after 0, so 0 stays
  // unmatched; 3900 -> 4000 is a valid exchange.
  const auto log = LogBuilder().add("u", "v", 0).add("u", "v", 3900).add("v", "u", 4000).build();
  const auto s = match_exchanges(log);
  REQUIRE(s.size() == 1);
  CHECK(s[0].t_send == 3900);
}

TEST_CASE("pairs are unordered") {
  const auto log = LogBuilder().add("a", "b", 0).add("b", "a", 10).add("b", "a", 100).add("a", "b", 110).build();
  const auto table = estimate_distances(log);
  REQUIRE(table.size() == 1);
  CHECK(table.rows[0].samples == 2);
  CHECK(table.find(UserPair::of(UserId{1}, UserId{0})) != nullptr);
  CHECK(table.find(UserPair::of(UserId{0}, UserId{2})) == nullptr);
}

TEST_CASE("distance distribution: one value per pair") {
  LogBuilder b;
  for (int i = 0; i < 5; ++i) {
    b.add("a", "b", 100 * i, 0, 0).add("b", "a", 100 * i + 1, 0, 1);
  }
  b.add("c", "d", 1000, 0, 0).add("d", "c", 1001, 0, 2);
  b.add("e", "f", 1002, 0, 0).add("f", "e", 1003, 0, 0);
  const auto table = estimate_distances(b.build());
  CHECK(table.size() == 3);
  CHECK(table.find(UserPair::of(UserId{0}, UserId{1}))->samples == 5);
  CHECK(distance_distribution(table).size() == 3);
  CHECK(resolvable(distance_distribution(table)).size() == 2);
  CHECK_THROWS_AS(distance_distribution(PairDistanceTable{}), Error);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(estimate_distances(EventLog{}), Error);
  const auto log = LogBuilder().add("u", "v", 0).build();
  CHECK_THROWS_AS(estimate_distances(log, 0.0), Error);
}
