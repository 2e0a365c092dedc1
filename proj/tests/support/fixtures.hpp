#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "geofriend/random.hpp"
#include "geofriend/stats.hpp"
#include "geofriend/types.hpp"

namespace geofriend::testing {

// Builds an EventLog from readable names and degrees. Events must be added
// in time order.
class LogBuilder {
 public:
  LogBuilder& add(const std::string& sender, const std::string& receiver, double t, double lat_deg = 0.0,
                  double lon_deg = 0.0);
  EventLog build() const { return log_; }

 private:
  EventLog log_;
};

// The four users and three friend pairs (u0,u2), (u1,u2), (u1,u3) of the
// small worked example; each pair mentions and replies once.
EventLog fig1_log();

struct RandomLogOptions {
  std::size_t events = 100;
  std::uint32_t users = 10;
  // Timestamps advance by an integer step in [0, max_step].
  std::uint32_t max_step = 600;
  // Positions are drawn from this many fixed places so that distances repeat.
  std::uint32_t places = 20;
  double start = 1409529600.0;
};

// Random time-ordered log with integer timestamps and no self mentions.
EventLog random_log(Rng& rng, const RandomLogOptions& options);

// Uniform point on the sphere, radians.
struct LatLon {
  double lat;
  double lon;
};
LatLon random_point(Rng& rng);

// n geometric bins of bpd per decade starting at x0, each holding 1000
// samples and exactly the given density at its center.
stats::BinnedDistribution exact_bins(double x0, int bpd, int n, const std::function<double(double)>& density);

}  // namespace geofriend::testing
