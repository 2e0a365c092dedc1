#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace geofriend::stats {

struct BinningOptions {
  int bins_per_decade = 10;
  // Divide counts by bin width. Off gives plain per-bin probabilities.
  bool normalize_by_width = true;
  // Integer-valued samples: a bin's width is the number of integers it holds
  // and its center is the geometric mean of the first and last of them.
  bool discrete = false;
};

// Geometric bins from the smallest sample upward: edge k = min * 10^(k / bpd).
// Every bin is half-open except the last, which is closed and reaches the max.
struct BinnedDistribution {
  std::vector<double> edges;
  std::vector<double> centers;
  std::vector<double> widths;
  std::vector<std::size_t> counts;
  std::vector<double> density;
  std::size_t total = 0;
  double sample_min = 0.0;
  double sample_max = 0.0;
  BinningOptions options;

  std::size_t bins() const noexcept { return counts.size(); }
  std::size_t nonempty_bins() const;
};

// Throws NonPositiveSample, DegenerateSamples (fewer than two distinct
// values) or BadParameters (bins_per_decade < 1, non-integer discrete data).
BinnedDistribution log_bin(std::span<const double> samples, const BinningOptions& options = {});

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double sse = 0.0;
};

// Ordinary least squares y = intercept + slope * x.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

// density ~ 10^intercept * x^-alpha, fitted in log10-log10 space.
struct PowerLawFit {
  double alpha = 0.0;
  double intercept = 0.0;
  double sse = 0.0;
  std::size_t bins_used = 0;

  double predict(double x) const;
};

// Least squares on (log10 center, log10 density) over the bins holding at
// least min_count samples (empty bins never count). Throws TooFewBins below
// three of them.
PowerLawFit fit_power_law(const BinnedDistribution& dist, std::size_t min_count = 1);

struct DoublePowerLawFit {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double d_s = 0.0;
  double d_min = 0.0;
  double d_max = 0.0;
  double sse_total = 0.0;
  PowerLawFit lower;
  PowerLawFit upper;
  // The single power law on the same bins, for comparison.
  PowerLawFit single;
  std::size_t break_edge = 0;
  // Relative SSE gain over the single fit reached kSignificantGain.
  bool break_significant = false;
};

inline constexpr double kSignificantGain = 0.05;

// Tries every interior bin edge leaving at least min_segment_bins usable bins
// (as in fit_power_law) on each side, fits both sides independently and keeps
// the edge with the least total SSE (the smallest such edge on ties).
// Throws TooFewBins below 2 * min_segment_bins usable bins.
DoublePowerLawFit fit_double_power_law(const BinnedDistribution& dist,
                                       std::size_t min_segment_bins = 3, std::size_t min_count = 1);

// Pipeline default for min_count. Sparse tail bins are only ever seen when
// they happen to be occupied, which biases their log density upward and
// flattens the fitted slope; ten samples keep the Poisson error of a point
// near 0.14 decades.
inline constexpr std::size_t kDefaultMinBinCount = 10;

// Kolmogorov-Smirnov distance between the samples and a continuous CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace geofriend::stats
