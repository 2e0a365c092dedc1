#include "geofriend/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "geofriend/csv.hpp"
#include "geofriend/error.hpp"
#include "geofriend/svg_plot.hpp"

namespace geofriend::pipeline {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const PipelineConfig& cfg, const std::string& name) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  const auto path = cfg.out_dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  }
  return out;
}

void write_binned(const stats::BinnedDistribution& dist, std::ostream& out) {
  out << "center,density,count\n";
  for (std::size_t k = 0; k < dist.bins(); ++k) {
    out << csv::general(dist.centers[k]) << "," << csv::general(dist.density[k]) << ","
        << dist.counts[k] << "\n";
  }
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string pad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text + " " : text + std::string(width - text.size(), ' ');
}

svg::Series nonempty_bins(const stats::BinnedDistribution& dist, const std::string& label,
                          const std::string& color) {
  svg::Series s{label, color, svg::Style::Markers, {}, {}};
  for (std::size_t k = 0; k < dist.bins(); ++k) {
    if (dist.counts[k] > 0) {
      s.x.push_back(dist.centers[k]);
      s.y.push_back(dist.density[k]);
    }
  }
  return s;
}

svg::Series fit_line(const stats::PowerLawFit& fit, double lo, double hi, const std::string& label) {
  return {label, "#d62728", svg::Style::Line, {lo, hi}, {fit.predict(lo), fit.predict(hi)}};
}

void plot_friend_fit(const FitSummary& fit, const PipelineConfig& cfg) {
  svg::Plot plot;
  plot.title = "P(N = n), " + cfg.region;
  plot.x_label = "number of friends n";
  plot.y_label = "probability";
  svg::Series empirical{"empirical", "#9e9e9e", svg::Style::Markers, {}, {}};
  std::map<double, std::size_t> counts;
  for (const double n : fit.friend_counts) {
    ++counts[n];
  }
  for (const auto& [n, c] : counts) {
    empirical.x.push_back(n);
    empirical.y.push_back(static_cast<double>(c) / static_cast<double>(fit.friend_counts.size()));
  }
  plot.series.push_back(std::move(empirical));
  plot.series.push_back(nonempty_bins(fit.friend_bins, "log-binned", "#1f77b4"));
  plot.series.push_back(fit_line(fit.friend_fit, fit.friend_bins.sample_min, fit.friend_bins.sample_max,
                                 "alpha = " + fixed(fit.friend_fit.alpha, 2)));
  plot.write(cfg.out_dir / "friend_count_fit.svg");
}

void plot_distance_fit(const FitSummary& fit, const PipelineConfig& cfg) {
  svg::Plot plot;
  plot.title = "P(D = d), " + cfg.region;
  plot.x_label = "distance d [km]";
  plot.y_label = "probability density";
  stats::BinningOptions fine;
  fine.bins_per_decade = 50;
  fine.normalize_by_width = cfg.normalize_by_width;
  plot.series.push_back(nonempty_bins(stats::log_bin(fit.distances, fine), "empirical", "#9e9e9e"));
  plot.series.push_back(nonempty_bins(fit.distance_bins, "log-binned", "#1f77b4"));
  const auto& d = fit.distance_fit;
  plot.series.push_back(fit_line(d.lower, d.d_min, d.d_s, "gamma1 = " + fixed(d.gamma1, 2)));
  auto upper = fit_line(d.upper, d.d_s, d.d_max, "gamma2 = " + fixed(d.gamma2, 2));
  upper.color = "#2ca02c";
  plot.series.push_back(std::move(upper));
  plot.write(cfg.out_dir / "distance_fit.svg");
}

void write_fit_reports(const FitSummary& fit, const PipelineConfig& cfg) {
  const auto& a = fit.friend_fit;
  const auto& d = fit.distance_fit;
  auto report = open_output(cfg, "fit_report.csv");
  report << "region,distribution,model,alpha,gamma1,gamma2,d_s_km,d_min_km,d_max_km,sse,bins_used,"
            "break_significant\n";
  report << csv::quote(cfg.region) << ",friend_count,single," << csv::general(a.alpha) << ",,,,"
         << csv::general(fit.friend_bins.sample_min) << "," << csv::general(fit.friend_bins.sample_max)
         << "," << csv::general(a.sse) << "," << a.bins_used << ",\n";
  report << csv::quote(cfg.region) << ",distance,single," << csv::general(d.single.alpha) << ",,,,"
         << csv::general(d.d_min) << "," << csv::general(d.d_max) << "," << csv::general(d.single.sse)
         << "," << d.single.bins_used << ",\n";
  report << csv::quote(cfg.region) << ",distance,double,," << csv::general(d.gamma1) << ","
         << csv::general(d.gamma2) << "," << csv::general(d.d_s) << "," << csv::general(d.d_min) << ","
         << csv::general(d.d_max) << "," << csv::general(d.sse_total) << ","
         << d.lower.bins_used + d.upper.bins_used << "," << (d.break_significant ? "yes" : "no") << "\n";

  auto text = open_output(cfg, "fit_report.txt");
  text << "Friend counts, single power law P(N = n) ~ n^-alpha\n";
  text << pad("Region", 16) << pad("alpha", 9) << pad("bins", 6) << "users\n";
  text << pad(cfg.region, 16) << pad(fixed(a.alpha, 2), 9) << pad(std::to_string(a.bins_used), 6)
       << fit.friend_counts.size() << "\n\n";
  text << "Friend distance, double power law P(D = d) ~ d^-gamma1 below d_s, d^-gamma2 above\n";
  text << pad("Region", 16) << pad("gamma1", 9) << pad("gamma2", 9) << pad("d_s [km]", 11)
       << pad("range [km]", 20) << "pairs\n";
  text << pad(cfg.region, 16) << pad(fixed(d.gamma1, 2), 9) << pad(fixed(d.gamma2, 2), 9)
       << pad(fixed(d.d_s, 2), 11) << pad(fixed(d.d_min, 3) + "-" + fixed(d.d_max, 1), 20)
       << fit.distances.size() << "\n";
  text << "break " << (d.break_significant ? "significant" : "not significant") << ": SSE "
       << csv::general(d.sse_total, 6) << " vs single " << csv::general(d.single.sse, 6)
       << " (single alpha " << fixed(d.single.alpha, 2) << ")\n";
}

}  // namespace

fs::path cache_path(const PipelineConfig& cfg) { return cfg.out_dir / "events.cache"; }

ingest::LoadResult run_ingest(const PipelineConfig& cfg) {
  if (cfg.inputs.empty()) {
    throw Error(ErrorCode::IoError, "no input file given");
  }
  std::stringstream merged;
  for (const auto& path : cfg.inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw Error(ErrorCode::IoError, "cannot read '" + path.string() + "'");
    }
    merged << in.rdbuf() << "\n";
  }
  ingest::LoadOptions options;
  options.format = cfg.format;
  options.bbox = cfg.bbox;
  options.threads = cfg.threads;
  auto result = ingest::load_events(merged, options);

  auto report = open_output(cfg, "ingest_report.csv");
  result.report.write_csv(report);
  auto cache = open_output(cfg, "events.cache");
  ingest::write_event_cache(result.log, cache);
  return result;
}

EventLog load_cache(const PipelineConfig& cfg) {
  const auto path = cache_path(cfg);
  if (!fs::exists(path)) {
    throw Error(ErrorCode::IoError, "no event cache at '" + path.string() +
                                        "'; run `geofriend ingest --input FILE --out " +
                                        cfg.out_dir.string() + "` first");
  }
  return ingest::read_event_cache(path);
}

friendship::FriendshipGraph run_friends(const EventLog& log, const PipelineConfig& cfg) {
  auto graph = friendship::count_friends(log, cfg.friendship);

  auto edges = open_output(cfg, "edges.csv");
  edges << "u,v\n";
  for (const auto& e : graph.edges) {
    edges << csv::quote(log.users.name(e.first)) << "," << csv::quote(log.users.name(e.second)) << "\n";
  }
  auto counts = open_output(cfg, "friend_counts.csv");
  counts << "user,n_u\n";
  for (const auto u : graph.users()) {
    counts << csv::quote(log.users.name(u)) << "," << graph.friend_count(u) << "\n";
  }
  auto hist = open_output(cfg, "friend_count_hist.csv");
  hist << "n,count,probability\n";
  if (!graph.empty()) {
    for (const auto& bin : friendship::friend_count_distribution(graph)) {
      hist << bin.n << "," << bin.count << "," << csv::general(bin.probability) << "\n";
    }
  }
  return graph;
}

pairdist::PairDistanceTable run_distances(const EventLog& log, const PipelineConfig& cfg) {
  auto table = pairdist::estimate_distances(log, cfg.max_interval);
  auto out = open_output(cfg, "pair_distances.csv");
  out << "u,v,d_uv_km,samples\n";
  for (const auto& row : table.rows) {
    out << csv::quote(log.users.name(row.pair.first)) << "," << csv::quote(log.users.name(row.pair.second))
        << "," << csv::general(row.mean_km, 12) << "," << row.samples << "\n";
  }
  return table;
}

mobility::VelocityHistogram run_mobility(const EventLog& log, const PipelineConfig& cfg) {
  const auto samples = mobility::velocity_samples(log, cfg.max_interval);
  mobility::VelocityHistogram hist;
  hist.bin_width = cfg.velocity_bin_width;
  if (!samples.empty()) {
    hist = mobility::velocity_histogram(samples, cfg.velocity_bin_width);
  }
  auto out = open_output(cfg, "velocity_hist.csv");
  out << "v_bin_low,v_bin_high,count,fraction\n";
  for (const auto& bin : hist.bins) {
    out << csv::general(bin.low) << "," << csv::general(bin.high) << "," << bin.count << ","
        << csv::general(bin.fraction) << "\n";
  }
  if (cfg.svg) {
    svg::Plot plot;
    plot.title = "Tweet frequency vs velocity, " + cfg.region;
    plot.x_label = "velocity [km/h]";
    plot.y_label = "fraction of tweets";
    plot.log_x = false;
    svg::Series bars{"fraction", "#1f77b4", svg::Style::Bars, {}, {}};
    for (const auto& bin : hist.bins) {
      bars.x.push_back(0.5 * (bin.low + bin.high));
      bars.y.push_back(bin.fraction);
    }
    plot.series.push_back(std::move(bars));
    plot.write(cfg.out_dir / "velocity_hist.svg");
  }
  return hist;
}

FitSummary fit_distributions(const friendship::FriendshipGraph& graph,
                             const pairdist::PairDistanceTable& table, const PipelineConfig& cfg) {
  FitSummary fit;
  stats::BinningOptions binning;
  binning.bins_per_decade = cfg.bins_per_decade;
  binning.normalize_by_width = cfg.normalize_by_width;

  fit.friend_counts = friendship::friend_counts(graph);
  if (fit.friend_counts.size() < 2) {
    throw Error(ErrorCode::TooFewBins, "fewer than two users have friends");
  }
  auto discrete = binning;
  discrete.discrete = true;
  try {
    fit.friend_bins = stats::log_bin(fit.friend_counts, discrete);
  } catch (const Error& e) {
    throw Error(ErrorCode::TooFewBins, std::string("friend counts: ") + e.what());
  }
  fit.friend_fit = stats::fit_power_law(fit.friend_bins, cfg.min_bin_count);

  for (const auto& row : table.rows) {
    if (!row.sub_resolution()) {
      fit.distances.push_back(row.mean_km);
    }
  }
  if (fit.distances.size() < 2) {
    throw Error(ErrorCode::TooFewBins, std::to_string(fit.distances.size()) +
                                           " pair distances above the 10 m resolution");
  }
  try {
    fit.distance_bins = stats::log_bin(fit.distances, binning);
  } catch (const Error& e) {
    throw Error(ErrorCode::TooFewBins, std::string("pair distances: ") + e.what());
  }
  fit.distance_fit = stats::fit_double_power_law(fit.distance_bins, cfg.min_segment_bins, cfg.min_bin_count);
  return fit;
}

FitSummary run_fit(const EventLog& log, const PipelineConfig& cfg) {
  const auto graph = friendship::count_friends(log, cfg.friendship);
  const auto table = pairdist::estimate_distances(log, cfg.max_interval);
  auto fit = fit_distributions(graph, table, cfg);

  auto friend_bins = open_output(cfg, "friend_count_binned.csv");
  write_binned(fit.friend_bins, friend_bins);
  auto distance_bins = open_output(cfg, "distance_binned.csv");
  write_binned(fit.distance_bins, distance_bins);
  write_fit_reports(fit, cfg);
  if (cfg.svg) {
    plot_friend_fit(fit, cfg);
    plot_distance_fit(fit, cfg);
  }
  return fit;
}

FitSummary run_all(const PipelineConfig& cfg) {
  const auto log = run_ingest(cfg).log;
  run_friends(log, cfg);
  run_distances(log, cfg);
  run_mobility(log, cfg);
  return run_fit(log, cfg);
}

}  // namespace geofriend::pipeline
