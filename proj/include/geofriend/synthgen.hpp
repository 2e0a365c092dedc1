#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "geofriend/random.hpp"
#include "geofriend/types.hpp"

namespace geofriend::synthgen {

// P(n) proportional to n^-alpha on {1..n_max}, drawn by inverse CDF.
class ZipfSampler {
 public:
  // Throws BadExponent unless alpha > 1, BadParameters unless n_max >= 1.
  ZipfSampler(double alpha, std::uint32_t n_max);

  std::uint32_t operator()(Rng& rng) const;
  double probability(std::uint32_t n) const;

 private:
  std::vector<double> cdf_;
};

std::uint32_t sample_zipf(double alpha, std::uint32_t n_max, Rng& rng);

// Density proportional to d^-gamma1 on [d_min, d_s) and d^-gamma2 on
// [d_s, d_max], continuous at d_s and normalized to one.
class DoubleParetoSampler {
 public:
  // Throws BadParameters unless 0 < d_min <= d_s <= d_max, d_min < d_max and
  // both exponents are finite.
  DoubleParetoSampler(double gamma1, double gamma2, double d_s, double d_min, double d_max);

  double operator()(Rng& rng) const;
  double cdf(double d) const;

 private:
  double gamma1_, gamma2_, d_s_, d_min_, d_max_;
  // Masses of the two regimes in units scaled by d_s.
  double lower_mass_, upper_mass_;
};

double sample_double_pareto(double gamma1, double gamma2, double d_s, double d_min, double d_max,
                            Rng& rng);

struct SynthConfig {
  std::size_t users = 1000;
  double alpha = 2.5;
  std::uint32_t n_max = 10'000;
  // Explicit degree per user; replaces the Zipf draws when set.
  std::optional<std::vector<std::uint32_t>> degrees;

  double gamma1 = 0.60;
  double gamma2 = 6.23;
  double d_s = 22.0;
  double d_min = 0.01;
  double d_max = 300.0;

  // Replies arrive uniformly in [1 s, max_interval).
  double max_interval = 3600.0;
  double static_fraction = 1.0;
  // Exchanges that are not static place each event uniformly within this
  // radius of the sender's home.
  double jitter_km = 0.01;
  // The initiator sends a second mention this many seconds after the first;
  // zero disables it. The pair gives each exchange one velocity sample.
  double followup_gap = 1.0;

  double center_lat = 34.0522;
  double center_lon = -118.2437;
  // Component roots are spread uniformly over a disk of this radius.
  double root_spread_km = 50.0;
  std::int64_t start_time = 1409529600;  // 2014-09-01T00:00:00Z
  std::uint64_t seed = 1;
};

// Throws BadParameters (BadExponent for alpha) on an invalid config.
void validate(const SynthConfig& cfg);

struct SynthReport {
  std::vector<std::uint32_t> planted_degrees;
  std::vector<std::uint32_t> realized_degrees;
  // Users whose planted degree was changed to reach a feasible sequence.
  std::size_t adjusted_users = 0;
  std::size_t dropped_stubs = 0;
  bool forest = false;
  std::size_t edges = 0;
  // Edges closing a cycle; their distance follows from the placement.
  std::size_t unplanted_edges = 0;
  std::vector<double> planted_distances_km;
  std::size_t static_exchanges = 0;

  bool degree_sequence_adjusted() const { return adjusted_users > 0 || dropped_stubs > 0; }
};

struct SynthStream {
  EventLog log;
  SynthReport report;
};

// Wires friendships with the planted degrees (a random forest when the
// sequence allows one, otherwise a configuration model with rejection),
// places each friend at a double-Pareto distance from the friend that reached
// it first, and emits one mention/reply exchange per friendship. Exchanges of
// a user are spaced so that its only events closer than max_interval are the
// mention and its follow-up.
SynthStream generate_stream(const SynthConfig& cfg);

void write_jsonl(const EventLog& log, std::ostream& out);

void write_report(const SynthConfig& cfg, const SynthReport& report, std::ostream& out);

}  // namespace geofriend::synthgen
