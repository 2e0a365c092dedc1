#pragma once

#include <cstddef>
#include <vector>

#include "geofriend/types.hpp"

namespace geofriend::mobility {

inline constexpr double kDefaultMaxInterval = 3600.0;
inline constexpr double kDefaultBinWidth = 2.0;

struct VelocitySample {
  UserId user;
  double v_kmh = 0.0;
  double dt = 0.0;
  // Time of the later of the two events.
  double t = 0.0;
};

// Average speed between each pair of consecutive events sent by the same user
// with 0 < dt < max_interval. Ordered by user, then time.
// Throws EmptyLog, or BadParameters for a non-positive interval.
std::vector<VelocitySample> velocity_samples(const EventLog& log,
                                             double max_interval = kDefaultMaxInterval);

struct VelocityBin {
  double low = 0.0;
  double high = 0.0;
  std::size_t count = 0;
  double fraction = 0.0;
};

// Half-open linear bins [k w, (k+1) w). Only occupied bins are listed.
struct VelocityHistogram {
  double bin_width = kDefaultBinWidth;
  std::size_t total = 0;
  std::vector<VelocityBin> bins;

  std::size_t nonempty_bins() const;
};

// Throws EmptySamples, or BadParameters for a non-positive width.
VelocityHistogram velocity_histogram(const std::vector<VelocitySample>& samples,
                                     double bin_width = kDefaultBinWidth);

}  // namespace geofriend::mobility
