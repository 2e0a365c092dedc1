#include "fixtures.hpp"

#include <cmath>
#include <numbers>

#include "geofriend/geodesy.hpp"

namespace geofriend::testing {

LogBuilder& LogBuilder::add(const std::string& sender, const std::string& receiver, double t,
                            double lat_deg, double lon_deg) {
  MentionEvent e;
  e.sender = log_.users.intern(sender);
  e.receiver = log_.users.intern(receiver);
  e.lat = geodesy::to_radians(lat_deg);
  e.lon = geodesy::to_radians(lon_deg);
  e.t = t;
  log_.events.push_back(e);
  return *this;
}

EventLog fig1_log() {
  return LogBuilder()
      .add("u0", "u2", 0)
      .add("u2", "u0", 1)
      .add("u1", "u2", 2)
      .add("u2", "u1", 3)
      .add("u3", "u1", 4)
      .add("u1", "u3", 5)
      .build();
}

LatLon random_point(Rng& rng) {
  const double z = 2.0 * uniform01(rng) - 1.0;
  return {std::asin(z), std::numbers::pi * (2.0 * uniform01(rng) - 1.0)};
}

EventLog random_log(Rng& rng, const RandomLogOptions& options) {
  EventLog log;
  for (std::uint32_t u = 0; u < options.users; ++u) {
    log.users.intern("user" + std::to_string(u));
  }
  std::vector<LatLon> places;
  for (std::uint32_t k = 0; k < std::max<std::uint32_t>(options.places, 1); ++k) {
    // Clustered around one city so that distances stay small and varied.
    places.push_back({geodesy::to_radians(51.5 + uniform01(rng) - 0.5),
                      geodesy::to_radians(-0.1 + uniform01(rng) - 0.5)});
  }
  double t = options.start;
  for (std::size_t i = 0; i < options.events; ++i) {
    t += static_cast<double>(uniform_index(rng, options.max_step + 1ULL));
    const auto s = static_cast<std::uint32_t>(uniform_index(rng, options.users));
    auto r = static_cast<std::uint32_t>(uniform_index(rng, options.users - 1ULL));
    if (r >= s) {
      ++r;
    }
    const auto& p = places[uniform_index(rng, places.size())];
    log.events.push_back({UserId{s}, UserId{r}, p.lat, p.lon, t});
  }
  return log;
}

stats::BinnedDistribution exact_bins(double x0, int bpd, int n, const std::function<double(double)>& density) {
  stats::BinnedDistribution d;
  d.options.bins_per_decade = bpd;
  for (int k = 0; k <= n; ++k) {
    d.edges.push_back(x0 * std::pow(10.0, static_cast<double>(k) / bpd));
  }
  for (int k = 0; k < n; ++k) {
    d.centers.push_back(std::sqrt(d.edges[k] * d.edges[k + 1]));
    d.widths.push_back(d.edges[k + 1] - d.edges[k]);
    d.counts.push_back(1000);
    d.density.push_back(density(d.centers.back()));
  }
  d.total = 1000 * static_cast<std::size_t>(n);
  d.sample_min = d.edges.front();
  d.sample_max = d.edges.back();
  return d;
}

}  // namespace geofriend::testing
