#include "geofriend/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "geofriend/error.hpp"

namespace geofriend::stats {

namespace {

struct Point {
  std::size_t bin;
  double x;
  double y;
};

std::vector<Point> log_points(const BinnedDistribution& dist, std::size_t min_count) {
  std::vector<Point> pts;
  for (std::size_t k = 0; k < dist.bins(); ++k) {
    if (dist.counts[k] >= std::max<std::size_t>(min_count, 1) && dist.density[k] > 0.0) {
      pts.push_back({k, std::log10(dist.centers[k]), std::log10(dist.density[k])});
    }
  }
  return pts;
}

PowerLawFit fit_points(std::span<const Point> pts) {
  std::vector<double> x, y;
  x.reserve(pts.size());
  y.reserve(pts.size());
  for (const auto& p : pts) {
    x.push_back(p.x);
    y.push_back(p.y);
  }
  const auto line = least_squares(x, y);
  return {-line.slope, line.intercept, line.sse, pts.size()};
}

}  // namespace

std::size_t BinnedDistribution::nonempty_bins() const {
  return static_cast<std::size_t>(
      std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
}

BinnedDistribution log_bin(std::span<const double> samples, const BinningOptions& options) {
  if (options.bins_per_decade < 1) {
    throw Error(ErrorCode::BadParameters, "bins per decade must be at least 1");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const double s : samples) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::NonPositiveSample, "log binning needs finite positive samples");
    }
    if (options.discrete && s != std::floor(s)) {
      throw Error(ErrorCode::BadParameters, "discrete binning needs integer samples");
    }
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (samples.empty() || !(hi > lo)) {
    throw Error(ErrorCode::DegenerateSamples, "log binning needs at least two distinct values");
  }

  const double bpd = options.bins_per_decade;
  const auto edge = [&](std::size_t k) { return lo * std::pow(10.0, static_cast<double>(k) / bpd); };
  auto n_bins = static_cast<std::size_t>(std::ceil(std::log10(hi / lo) * bpd));
  n_bins = std::max<std::size_t>(n_bins, 1);
  while (edge(n_bins) < hi) {
    ++n_bins;
  }

  BinnedDistribution dist;
  dist.options = options;
  dist.total = samples.size();
  dist.sample_min = lo;
  dist.sample_max = hi;
  dist.edges.resize(n_bins + 1);
  for (std::size_t k = 0; k <= n_bins; ++k) {
    dist.edges[k] = edge(k);
  }
  dist.edges.front() = lo;

  dist.counts.assign(n_bins, 0);
  for (const double s : samples) {
    auto k = static_cast<std::size_t>(std::max(0.0, std::floor(std::log10(s / lo) * bpd)));
    k = std::min(k, n_bins - 1);
    while (k > 0 && s < dist.edges[k]) {
      --k;
    }
    while (k + 1 < n_bins && s >= dist.edges[k + 1]) {
      ++k;
    }
    ++dist.counts[k];
  }

  dist.centers.resize(n_bins);
  dist.widths.resize(n_bins);
  dist.density.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    const double a = dist.edges[k];
    const double b = dist.edges[k + 1];
    dist.centers[k] = std::sqrt(a * b);
    dist.widths[k] = b - a;
    if (options.discrete) {
      const double first = std::ceil(a);
      // Integers in [a, b), or [a, b] for the closed last bin.
      const double last = k + 1 == n_bins ? std::floor(b) : std::ceil(b) - 1.0;
      dist.widths[k] = std::max(0.0, last - first + 1.0);
      if (dist.widths[k] > 0.0) {
        dist.centers[k] = std::sqrt(first * last);
      }
    }
    const double share = static_cast<double>(dist.counts[k]) / static_cast<double>(dist.total);
    if (!options.normalize_by_width) {
      dist.density[k] = share;
    } else {
      dist.density[k] = dist.widths[k] > 0.0 ? share / dist.widths[k] : 0.0;
    }
  }
  return dist;
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::TooFewBins, "a line fit needs at least two points");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    fit.sse += r * r;
  }
  return fit;
}

double PowerLawFit::predict(double x) const { return std::pow(10.0, intercept) * std::pow(x, -alpha); }

PowerLawFit fit_power_law(const BinnedDistribution& dist, std::size_t min_count) {
  const auto pts = log_points(dist, min_count);
  if (pts.size() < 3) {
    throw Error(ErrorCode::TooFewBins, "power-law fit needs 3 bins with at least " +
                                           std::to_string(min_count) + " samples, got " +
                                           std::to_string(pts.size()));
  }
  return fit_points(pts);
}

DoublePowerLawFit fit_double_power_law(const BinnedDistribution& dist, std::size_t min_segment_bins,
                                       std::size_t min_count) {
  if (min_segment_bins < 2) {
    throw Error(ErrorCode::BadParameters, "each segment needs at least 2 bins");
  }
  const auto pts = log_points(dist, min_count);
  if (pts.size() < 2 * min_segment_bins) {
    throw Error(ErrorCode::TooFewBins, "double power-law fit needs " +
                                           std::to_string(2 * min_segment_bins) + " bins with at least " +
                                           std::to_string(min_count) + " samples, got " +
                                           std::to_string(pts.size()));
  }

  DoublePowerLawFit best;
  best.sse_total = std::numeric_limits<double>::infinity();
  const std::span<const Point> all(pts);
  for (std::size_t edge = 1; edge < dist.bins(); ++edge) {
    const auto split = static_cast<std::size_t>(
        std::partition_point(pts.begin(), pts.end(), [&](const Point& p) { return p.bin < edge; }) -
        pts.begin());
    if (split < min_segment_bins || pts.size() - split < min_segment_bins) {
      continue;
    }
    const auto lower = fit_points(all.first(split));
    const auto upper = fit_points(all.subspan(split));
    const double sse = lower.sse + upper.sse;
    if (sse < best.sse_total) {
      best.sse_total = sse;
      best.lower = lower;
      best.upper = upper;
      best.break_edge = edge;
    }
  }

  best.gamma1 = best.lower.alpha;
  best.gamma2 = best.upper.alpha;
  best.d_s = dist.edges[best.break_edge];
  best.d_min = dist.sample_min;
  best.d_max = dist.sample_max;
  best.single = fit_points(all);
  // An SSE gain at rounding level says nothing about the data.
  const double gain = best.single.sse - best.sse_total;
  best.break_significant = gain > 1e-12 && gain / best.single.sse >= kSignificantGain;
  return best;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) {
    throw Error(ErrorCode::EmptySamples, "KS statistic needs samples");
  }
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace geofriend::stats
