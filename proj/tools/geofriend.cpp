// geofriend: friendship and distance statistics from geo-tagged mentions.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "geofriend/error.hpp"
#include "geofriend/pipeline.hpp"
#include "geofriend/synthgen.hpp"

namespace {

using namespace geofriend;

constexpr const char* kVersion = "geofriend 0.1.0";
constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct Options {
  pipeline::PipelineConfig pipe;
  std::string format = "jsonl";
  std::string bbox;
  std::string mode = "symmetric";
  std::optional<double> window;
  synthgen::SynthConfig synth;
};

void add_output(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.pipe.out_dir, "Output directory (holds events.cache)")
      ->capture_default_str();
}

void add_input(CLI::App* cmd, Options& o) {
  cmd->add_option("--input", o.pipe.inputs, "Input file; repeat to concatenate")->required();
  cmd->add_option("--format", o.format, "Record format")
      ->check(CLI::IsMember({"jsonl", "csv"}))
      ->capture_default_str();
  cmd->add_option("--bbox", o.bbox, "Keep records inside lat1,lon1,lat2,lon2 (degrees)");
  cmd->add_option("--threads", o.pipe.threads, "Parser threads")->check(CLI::Range(1u, 256u))
      ->capture_default_str();
}

void add_friendship(CLI::App* cmd, Options& o) {
  cmd->add_option("--mode", o.mode, "Friend counting mode")
      ->check(CLI::IsMember({"literal", "symmetric"}))
      ->capture_default_str();
  cmd->add_option("--window", o.window, "Seconds allowed between the two directions (default: whole log)")
      ->check(CLI::PositiveNumber);
}

void add_interval(CLI::App* cmd, Options& o) {
  cmd->add_option("--max-interval", o.pipe.max_interval, "Seconds allowed between a mention and its reply")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_mobility(CLI::App* cmd, Options& o) {
  cmd->add_option("--bin-width", o.pipe.velocity_bin_width, "Velocity bin width in km/h")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_fit(CLI::App* cmd, Options& o) {
  cmd->add_option("--bins-per-decade", o.pipe.bins_per_decade, "Logarithmic bins per decade")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  cmd->add_option("--min-segment-bins", o.pipe.min_segment_bins, "Nonempty bins required on each side of the break")
      ->check(CLI::Range(2, 1000))
      ->capture_default_str();
  cmd->add_option("--min-bin-count", o.pipe.min_bin_count, "Bins with fewer samples are left out of the fits")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  cmd->add_flag("--no-width-normalization{false}", o.pipe.normalize_by_width,
                "Report per-bin probabilities instead of densities");
}

void add_region(CLI::App* cmd, Options& o) {
  cmd->add_option("--region", o.pipe.region, "Region label for the reports")->capture_default_str();
}

void add_svg(CLI::App* cmd, Options& o) {
  cmd->add_flag("--svg", o.pipe.svg, "Also write SVG plots");
}

void add_synth(CLI::App* cmd, Options& o) {
  auto& s = o.synth;
  cmd->add_option("--users", s.users, "Number of users")->capture_default_str();
  cmd->add_option("--alpha", s.alpha, "Zipf exponent of the friend counts")->capture_default_str();
  cmd->add_option("--n-max", s.n_max, "Largest friend count drawn")->capture_default_str();
  cmd->add_option("--gamma1", s.gamma1, "Distance exponent below d_s")->capture_default_str();
  cmd->add_option("--gamma2", s.gamma2, "Distance exponent above d_s")->capture_default_str();
  cmd->add_option("--ds", s.d_s, "Separation distance d_s in km")->capture_default_str();
  cmd->add_option("--dmin", s.d_min, "Smallest friend distance in km")->capture_default_str();
  cmd->add_option("--dmax", s.d_max, "Largest friend distance in km")->capture_default_str();
  cmd->add_option("--max-interval", s.max_interval, "Replies arrive within this many seconds")
      ->capture_default_str();
  cmd->add_option("--static-fraction", s.static_fraction, "Fraction of exchanges posted from home")
      ->capture_default_str();
  cmd->add_option("--center", [&s](const CLI::results_t& r) {
        const auto box = ingest::parse_bounding_box(r[0] + "," + r[0]);
        s.center_lat = box.lat_min;
        s.center_lon = box.lon_min;
        return true;
      }, "Region center lat,lon in degrees");
  cmd->add_option("--spread", s.root_spread_km, "Radius in km over which friend groups are spread")
      ->capture_default_str();
  cmd->add_option("--start-time", s.start_time, "Epoch seconds of the first exchange")->capture_default_str();
  cmd->add_option("--seed", s.seed, "Random seed")->capture_default_str();
}

// key=value lines; keys are long flag names with or without the dashes and
// with '_' or '-'. Flags given on the command line win. Keys that belong to
// another subcommand are ignored so one file can serve the whole pipeline.
void apply_config(CLI::App* cmd, const std::string& path, const std::set<std::string>& known) {
  std::ifstream in(path);
  if (!in) {
    throw CLI::FileError::Missing(path);
  }
  for (const auto& item : CLI::ConfigINI().from_config(in)) {
    std::string key = item.name;
    std::replace(key.begin(), key.end(), '_', '-');
    if (!known.count(key)) {
      throw CLI::ConfigError("unknown key '" + item.name + "' in " + path);
    }
    auto* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr || opt->count() > 0) {
      continue;
    }
    for (const auto& value : item.inputs) {
      opt->add_result(value);
    }
    opt->run_callback();
  }
}

void finish(Options& o) {
  o.pipe.format = *ingest::parse_format(o.format);
  if (!o.bbox.empty()) {
    o.pipe.bbox = ingest::parse_bounding_box(o.bbox);
  }
  o.pipe.friendship.mode = *friendship::parse_mode(o.mode);
  o.pipe.friendship.window = o.window;
}

void print_fit(const pipeline::PipelineConfig& cfg) {
  std::ifstream report(cfg.out_dir / "fit_report.txt");
  std::cout << report.rdbuf();
}

int run(int argc, char** argv) {
  Options o;
  CLI::App app{"Bidirectional friendships, friend counts and friend distances from geo-tagged mentions",
               "geofriend"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  struct Command {
    CLI::App* app;
    std::string config;
  };
  std::vector<Command> commands;
  auto add_command = [&](const std::string& name, const std::string& help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->set_version_flag("--version", kVersion);
    commands.push_back({cmd, ""});
    return cmd;
  };

  auto* ingest_cmd = add_command("ingest", "Parse mention records into the event cache");
  add_input(ingest_cmd, o);
  add_output(ingest_cmd, o);

  auto* friends_cmd = add_command("friends", "Count bidirectional friendships");
  add_friendship(friends_cmd, o);
  add_output(friends_cmd, o);

  auto* distances_cmd = add_command("distances", "Estimate friend distances from mention/reply pairs");
  add_interval(distances_cmd, o);
  add_output(distances_cmd, o);

  auto* mobility_cmd = add_command("mobility", "Histogram of posting velocities");
  add_interval(mobility_cmd, o);
  add_mobility(mobility_cmd, o);
  add_svg(mobility_cmd, o);
  add_region(mobility_cmd, o);
  add_output(mobility_cmd, o);

  auto* fit_cmd = add_command("fit", "Fit friend counts and friend distances");
  add_friendship(fit_cmd, o);
  add_interval(fit_cmd, o);
  add_fit(fit_cmd, o);
  add_region(fit_cmd, o);
  add_svg(fit_cmd, o);
  add_output(fit_cmd, o);

  auto* run_cmd = add_command("run", "ingest, friends, distances, mobility and fit in one go");
  add_input(run_cmd, o);
  add_friendship(run_cmd, o);
  add_interval(run_cmd, o);
  add_mobility(run_cmd, o);
  add_fit(run_cmd, o);
  add_region(run_cmd, o);
  add_svg(run_cmd, o);
  add_output(run_cmd, o);

  auto* synth_cmd = add_command("synth", "Write a synthetic mention stream with planted distributions");
  add_synth(synth_cmd, o);
  add_output(synth_cmd, o);

  std::set<std::string> known;
  for (auto& c : commands) {
    c.app->add_option("--config", c.config, "key=value file; flags override it");
    for (const auto* opt : c.app->get_options()) {
      for (const auto& name : opt->get_lnames()) {
        known.insert(name);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  auto* cmd = app.get_subcommands().front();
  try {
    for (auto& c : commands) {
      if (c.app == cmd && !c.config.empty()) {
        apply_config(cmd, c.config, known);
      }
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    finish(o);
    const auto& cfg = o.pipe;
    if (cmd == ingest_cmd) {
      const auto result = pipeline::run_ingest(cfg);
      std::cout << "accepted " << result.report.accepted << " of " << result.report.total
                << " records; cache " << pipeline::cache_path(cfg).string() << "\n";
    } else if (cmd == friends_cmd) {
      const auto graph = pipeline::run_friends(pipeline::load_cache(cfg), cfg);
      std::cout << graph.edges.size() << " friendships among " << graph.users().size() << " users\n";
    } else if (cmd == distances_cmd) {
      const auto table = pipeline::run_distances(pipeline::load_cache(cfg), cfg);
      std::cout << table.rows.size() << " friend pairs with a distance estimate\n";
    } else if (cmd == mobility_cmd) {
      const auto hist = pipeline::run_mobility(pipeline::load_cache(cfg), cfg);
      std::cout << hist.total << " velocity samples\n";
    } else if (cmd == fit_cmd) {
      pipeline::run_fit(pipeline::load_cache(cfg), cfg);
      print_fit(cfg);
    } else if (cmd == run_cmd) {
      pipeline::run_all(cfg);
      print_fit(cfg);
    } else if (cmd == synth_cmd) {
      const auto stream = synthgen::generate_stream(o.synth);
      std::error_code ec;
      std::filesystem::create_directories(cfg.out_dir, ec);
      const auto jsonl = cfg.out_dir / "stream.jsonl";
      std::ofstream out(jsonl, std::ios::binary);
      std::ofstream report(cfg.out_dir / "synth_report.csv", std::ios::binary);
      if (!out || !report) {
        throw Error(ErrorCode::IoError, "cannot write to '" + cfg.out_dir.string() + "'");
      }
      synthgen::write_jsonl(stream.log, out);
      synthgen::write_report(o.synth, stream.report, report);
      std::cout << stream.log.size() << " events, " << stream.report.edges << " friendships -> "
                << jsonl.string() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::BadParameters || e.code() == ErrorCode::BadExponent ? kUsageError
                                                                                      : kDataError;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
}
