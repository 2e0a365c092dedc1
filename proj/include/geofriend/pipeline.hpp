#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "geofriend/friendship.hpp"
#include "geofriend/ingest.hpp"
#include "geofriend/mobility.hpp"
#include "geofriend/pairdist.hpp"
#include "geofriend/stats.hpp"

namespace geofriend::pipeline {

struct PipelineConfig {
  std::vector<std::filesystem::path> inputs;
  ingest::Format format = ingest::Format::Jsonl;
  std::optional<ingest::BoundingBox> bbox;
  friendship::FriendshipConfig friendship;
  double max_interval = 3600.0;
  int bins_per_decade = 10;
  bool normalize_by_width = true;
  double velocity_bin_width = mobility::kDefaultBinWidth;
  std::size_t min_segment_bins = 3;
  std::size_t min_bin_count = stats::kDefaultMinBinCount;
  std::filesystem::path out_dir = ".";
  std::string region = "all";
  bool svg = false;
  unsigned threads = 1;
};

std::filesystem::path cache_path(const PipelineConfig& cfg);

// Reads every input in order as one stream; writes events.cache and
// ingest_report.csv.
ingest::LoadResult run_ingest(const PipelineConfig& cfg);

// Throws IoError with a hint to run `ingest` first when the cache is missing.
EventLog load_cache(const PipelineConfig& cfg);

// edges.csv, friend_counts.csv, friend_count_hist.csv.
friendship::FriendshipGraph run_friends(const EventLog& log, const PipelineConfig& cfg);

// pair_distances.csv.
pairdist::PairDistanceTable run_distances(const EventLog& log, const PipelineConfig& cfg);

// velocity_hist.csv (+ velocity_hist.svg).
mobility::VelocityHistogram run_mobility(const EventLog& log, const PipelineConfig& cfg);

struct FitSummary {
  std::vector<double> friend_counts;
  stats::BinnedDistribution friend_bins;
  stats::PowerLawFit friend_fit;
  std::vector<double> distances;
  stats::BinnedDistribution distance_bins;
  stats::DoublePowerLawFit distance_fit;
};

// Friend counts: discrete log bins and a single power law. Pair distances
// above the 10 m resolution: log bins and a double power law. Writes
// friend_count_binned.csv, distance_binned.csv, fit_report.csv and
// fit_report.txt (+ friend_count_fit.svg, distance_fit.svg).
// Throws TooFewBins when either distribution cannot be fitted.
FitSummary run_fit(const EventLog& log, const PipelineConfig& cfg);

FitSummary fit_distributions(const friendship::FriendshipGraph& graph,
                             const pairdist::PairDistanceTable& table, const PipelineConfig& cfg);

// ingest, friends, distances, mobility and fit in one go.
FitSummary run_all(const PipelineConfig& cfg);

}  // namespace geofriend::pipeline
