#include "geofriend/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

#include "geofriend/error.hpp"
#include "geofriend/geodesy.hpp"

namespace geofriend::mobility {

std::vector<VelocitySample> velocity_samples(const EventLog& log, double max_interval) {
  if (log.empty()) {
    throw Error(ErrorCode::EmptyLog, "velocity analysis needs at least one event");
  }
  if (!(max_interval > 0.0)) {
    throw Error(ErrorCode::BadParameters, "max interval must be positive");
  }
  // Stable sort by sender keeps each user's events in log (time) order.
  std::vector<std::size_t> order(log.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  const auto& ev = log.events;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ev[a].sender < ev[b].sender; });

  std::vector<VelocitySample> out;
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& prev = ev[order[k - 1]];
    const auto& cur = ev[order[k]];
    if (prev.sender != cur.sender) {
      continue;
    }
    const double dt = cur.t - prev.t;
    if (!(dt > 0.0) || !(dt < max_interval)) {
      continue;
    }
    const double d = geodesy::distance_sloc({prev.lat, prev.lon}, {cur.lat, cur.lon});
    out.push_back({cur.sender, d / (dt / 3600.0), dt, cur.t});
  }
  return out;
}

std::size_t VelocityHistogram::nonempty_bins() const {
  return static_cast<std::size_t>(
      std::count_if(bins.begin(), bins.end(), [](const VelocityBin& b) { return b.count > 0; }));
}

VelocityHistogram velocity_histogram(const std::vector<VelocitySample>& samples, double bin_width) {
  if (samples.empty()) {
    throw Error(ErrorCode::EmptySamples, "no velocity samples");
  }
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw Error(ErrorCode::BadParameters, "bin width must be positive");
  }
  VelocityHistogram h;
  h.bin_width = bin_width;
  h.total = samples.size();
  std::map<std::uint64_t, std::size_t> counts;
  for (const auto& s : samples) {
    ++counts[static_cast<std::uint64_t>(std::floor(s.v_kmh / bin_width))];
  }
  h.bins.reserve(counts.size());
  for (const auto& [k, n] : counts) {
    h.bins.push_back({static_cast<double>(k) * bin_width, static_cast<double>(k + 1) * bin_width, n,
                      static_cast<double>(n) / static_cast<double>(h.total)});
  }
  return h;
}

}  // namespace geofriend::mobility
