#include "geofriend/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <queue>
#include <set>
#include <string>

#include "geofriend/csv.hpp"
#include "geofriend/error.hpp"
#include "geofriend/geodesy.hpp"
#include "geofriend/ingest.hpp"

namespace geofriend::synthgen {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) {
    throw Error(ErrorCode::BadParameters, what);
  }
}

// Integral of y^-gamma over [a, b].
double power_integral(double gamma, double a, double b) {
  if (std::abs(1.0 - gamma) < 1e-12) {
    return std::log(b / a);
  }
  const double p = 1.0 - gamma;
  return (std::pow(b, p) - std::pow(a, p)) / p;
}

// Inverse of the normalized y^-gamma CDF on [a, b].
double power_quantile(double gamma, double a, double b, double u) {
  if (std::abs(1.0 - gamma) < 1e-12) {
    return a * std::pow(b / a, u);
  }
  const double p = 1.0 - gamma;
  const double lo = std::pow(a, p);
  const double hi = std::pow(b, p);
  return std::clamp(std::pow(lo + u * (hi - lo), 1.0 / p), a, b);
}

using Edge = std::pair<std::uint32_t, std::uint32_t>;

// Makes the degree sum even by moving one user's degree by one.
std::size_t fix_parity(std::vector<std::uint32_t>& degrees, std::size_t users) {
  std::uint64_t sum = 0;
  for (const auto d : degrees) {
    sum += d;
  }
  if (sum % 2 == 0) {
    return 0;
  }
  const auto top = std::max_element(degrees.begin(), degrees.end());
  if (*top >= 2) {
    --*top;
  } else {
    const auto low = std::find(degrees.begin(), degrees.end(), *top);
    if (*low + 1 < users) {
      ++*low;
    } else {
      --*low;
    }
  }
  return 1;
}

// Random tree with the given degrees (all >= 1, sum 2(k - 1)) by decoding a
// shuffled Pruefer sequence.
void pruefer_tree(const std::vector<std::uint32_t>& nodes, const std::vector<std::uint32_t>& degrees,
                  Rng& rng, std::vector<Edge>& out) {
  if (nodes.size() == 2) {
    out.emplace_back(nodes[0], nodes[1]);
    return;
  }
  std::vector<std::uint32_t> seq;
  std::vector<std::uint32_t> remaining(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    remaining[i] = degrees[nodes[i]];
    for (std::uint32_t r = 1; r < remaining[i]; ++r) {
      seq.push_back(static_cast<std::uint32_t>(i));
    }
  }
  shuffle(seq, rng);
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> leaves;
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    if (remaining[i] == 1) {
      leaves.push(i);
    }
  }
  for (const auto parent : seq) {
    const auto leaf = leaves.top();
    leaves.pop();
    out.emplace_back(nodes[leaf], nodes[parent]);
    if (--remaining[parent] == 1) {
      leaves.push(parent);
    }
  }
  const auto a = leaves.top();
  leaves.pop();
  out.emplace_back(nodes[a], nodes[leaves.top()]);
}

// Splits the users into c = n - sum/2 trees: internal users go to random
// trees, and each tree receives exactly the leaves its internal users need.
std::vector<Edge> wire_forest(const std::vector<std::uint32_t>& degrees, Rng& rng) {
  std::vector<std::uint32_t> leaves;
  std::vector<std::uint32_t> internal;
  std::uint64_t sum = 0;
  for (std::uint32_t u = 0; u < degrees.size(); ++u) {
    if (degrees[u] == 1) {
      leaves.push_back(u);
    } else if (degrees[u] >= 2) {
      internal.push_back(u);
    }
    sum += degrees[u];
  }
  const std::size_t trees = leaves.size() + internal.size() - sum / 2;
  std::vector<std::vector<std::uint32_t>> members(trees);
  std::vector<std::int64_t> leaves_needed(trees, 2);
  for (const auto u : internal) {
    const auto g = uniform_index(rng, trees);
    members[g].push_back(u);
    leaves_needed[g] += static_cast<std::int64_t>(degrees[u]) - 2;
  }
  shuffle(leaves, rng);
  std::size_t next = 0;
  std::vector<Edge> edges;
  for (std::size_t g = 0; g < trees; ++g) {
    for (std::int64_t i = 0; i < leaves_needed[g]; ++i) {
      members[g].push_back(leaves[next++]);
    }
    pruefer_tree(members[g], degrees, rng, edges);
  }
  return edges;
}

// Configuration model: pair shuffled stubs and re-pair the stubs of rejected
// self-loops and multi-edges for a bounded number of rounds.
std::vector<Edge> wire_configuration(const std::vector<std::uint32_t>& degrees, Rng& rng,
                                     std::size_t& dropped) {
  std::vector<std::uint32_t> stubs;
  for (std::uint32_t u = 0; u < degrees.size(); ++u) {
    stubs.insert(stubs.end(), degrees[u], u);
  }
  std::set<Edge> seen;
  std::vector<Edge> edges;
  for (int round = 0; round < 200 && !stubs.empty(); ++round) {
    shuffle(stubs, rng);
    std::vector<std::uint32_t> rest;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      const Edge e = std::minmax(stubs[i], stubs[i + 1]);
      if (e.first != e.second && seen.insert(e).second) {
        edges.push_back(e);
      } else {
        rest.push_back(stubs[i]);
        rest.push_back(stubs[i + 1]);
      }
    }
    stubs = std::move(rest);
  }
  dropped = stubs.size();
  return edges;
}

geodesy::GeoPoint snap(const geodesy::GeoPoint& p) {
  // Keep coordinates on values that survive a trip through decimal degrees.
  return {geodesy::to_radians(geodesy::to_degrees(p.lat)),
          geodesy::to_radians(geodesy::to_degrees(p.lon))};
}

geodesy::GeoPoint random_in_disk(const geodesy::GeoPoint& center, double radius_km, Rng& rng) {
  const double bearing = 2.0 * std::numbers::pi * uniform01(rng);
  const double r = radius_km * std::sqrt(uniform01(rng));
  return geodesy::destination(center, bearing, r);
}

struct PendingEvent {
  double t;
  std::size_t seq;
  std::uint32_t sender;
  std::uint32_t receiver;
  geodesy::GeoPoint at;
};

}  // namespace

ZipfSampler::ZipfSampler(double alpha, std::uint32_t n_max) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::BadExponent, "Zipf exponent must exceed 1, got " + csv::shortest(alpha));
  }
  require(n_max >= 1, "Zipf support needs n_max >= 1");
  cdf_.resize(n_max);
  double acc = 0.0;
  for (std::uint32_t n = 1; n <= n_max; ++n) {
    acc += std::pow(static_cast<double>(n), -alpha);
    cdf_[n - 1] = acc;
  }
  for (auto& c : cdf_) {
    c /= acc;
  }
  cdf_.back() = 1.0;
}

std::uint32_t ZipfSampler::operator()(Rng& rng) const {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), cdf_.size() - 1)) + 1;
}

double ZipfSampler::probability(std::uint32_t n) const {
  if (n < 1 || n > cdf_.size()) {
    return 0.0;
  }
  return n == 1 ? cdf_[0] : cdf_[n - 1] - cdf_[n - 2];
}

std::uint32_t sample_zipf(double alpha, std::uint32_t n_max, Rng& rng) {
  return ZipfSampler(alpha, n_max)(rng);
}

DoubleParetoSampler::DoubleParetoSampler(double gamma1, double gamma2, double d_s, double d_min,
                                         double d_max)
    : gamma1_(gamma1), gamma2_(gamma2), d_s_(d_s), d_min_(d_min), d_max_(d_max) {
  require(std::isfinite(gamma1) && std::isfinite(gamma2), "double Pareto exponents must be finite");
  require(std::isfinite(d_max) && d_min > 0.0 && d_min <= d_s && d_s <= d_max && d_min < d_max,
          "double Pareto needs 0 < d_min <= d_s <= d_max and d_min < d_max");
  lower_mass_ = power_integral(gamma1, d_min / d_s, 1.0);
  upper_mass_ = power_integral(gamma2, 1.0, d_max / d_s);
}

double DoubleParetoSampler::operator()(Rng& rng) const {
  const double total = lower_mass_ + upper_mass_;
  const double u = uniform01(rng) * total;
  if (u < lower_mass_) {
    return d_s_ * power_quantile(gamma1_, d_min_ / d_s_, 1.0, u / lower_mass_);
  }
  const double v = upper_mass_ > 0.0 ? (u - lower_mass_) / upper_mass_ : 0.0;
  return d_s_ * power_quantile(gamma2_, 1.0, d_max_ / d_s_, std::min(v, 1.0));
}

double DoubleParetoSampler::cdf(double d) const {
  const double total = lower_mass_ + upper_mass_;
  if (d <= d_min_) {
    return 0.0;
  }
  if (d >= d_max_) {
    return 1.0;
  }
  const double y = d / d_s_;
  if (d < d_s_) {
    return power_integral(gamma1_, d_min_ / d_s_, y) / total;
  }
  return (lower_mass_ + power_integral(gamma2_, 1.0, y)) / total;
}

double sample_double_pareto(double gamma1, double gamma2, double d_s, double d_min, double d_max,
                            Rng& rng) {
  return DoubleParetoSampler(gamma1, gamma2, d_s, d_min, d_max)(rng);
}

void validate(const SynthConfig& cfg) {
  if (!cfg.degrees && (!(cfg.alpha > 1.0) || !std::isfinite(cfg.alpha))) {
    throw Error(ErrorCode::BadExponent, "alpha must exceed 1, got " + csv::shortest(cfg.alpha));
  }
  require(cfg.users >= 2, "need at least 2 users");
  require(cfg.users < (std::size_t{1} << 31), "too many users");
  require(cfg.n_max >= 1, "n_max must be at least 1");
  require(!cfg.degrees || cfg.degrees->size() == cfg.users, "degree list must have one entry per user");
  require(cfg.gamma2 > cfg.gamma1, "gamma2 must exceed gamma1");
  require(cfg.d_min > 0.0 && cfg.d_min < cfg.d_s && cfg.d_s < cfg.d_max && std::isfinite(cfg.d_max),
          "need 0 < d_min < d_s < d_max");
  require(cfg.d_max < std::numbers::pi * geodesy::kEarthRadiusKm, "d_max exceeds half a great circle");
  require(cfg.max_interval > 1.0 && std::isfinite(cfg.max_interval), "max interval must exceed 1 s");
  require(cfg.static_fraction >= 0.0 && cfg.static_fraction <= 1.0, "static fraction must lie in [0, 1]");
  require(cfg.jitter_km >= 0.0 && std::isfinite(cfg.jitter_km), "jitter must be non-negative");
  require(cfg.followup_gap >= 0.0 && cfg.followup_gap < cfg.max_interval,
          "follow-up gap must lie in [0, max interval)");
  require(std::abs(cfg.center_lat) <= 90.0 && std::abs(cfg.center_lon) <= 180.0, "center out of range");
  require(cfg.root_spread_km >= 0.0 && std::isfinite(cfg.root_spread_km), "root spread must be non-negative");
}

SynthStream generate_stream(const SynthConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  SynthStream out;
  auto& report = out.report;
  const auto n_users = cfg.users;

  // Degrees.
  std::vector<std::uint32_t> degrees;
  if (cfg.degrees) {
    degrees = *cfg.degrees;
  } else {
    const ZipfSampler zipf(cfg.alpha,
                           static_cast<std::uint32_t>(std::min<std::size_t>(cfg.n_max, n_users - 1)));
    degrees.resize(n_users);
    for (auto& d : degrees) {
      d = zipf(rng);
    }
  }
  report.planted_degrees = degrees;
  for (auto& d : degrees) {
    if (d > n_users - 1) {
      d = static_cast<std::uint32_t>(n_users - 1);
      ++report.adjusted_users;
    }
  }
  report.adjusted_users += fix_parity(degrees, n_users);

  // Wiring.
  std::uint64_t sum = 0;
  std::size_t active = 0;
  for (const auto d : degrees) {
    sum += d;
    active += d > 0 ? 1 : 0;
  }
  std::vector<Edge> edges;
  if (sum == 0) {
    edges = {};
  } else if (sum / 2 < active) {
    report.forest = true;
    edges = wire_forest(degrees, rng);
  } else {
    edges = wire_configuration(degrees, rng, report.dropped_stubs);
  }
  report.edges = edges.size();
  report.realized_degrees.assign(n_users, 0);
  std::vector<std::vector<std::uint32_t>> adjacency(n_users);
  for (const auto& [a, b] : edges) {
    ++report.realized_degrees[a];
    ++report.realized_degrees[b];
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }

  // Placement: breadth-first from a random root per component.
  const DoubleParetoSampler distance(cfg.gamma1, cfg.gamma2, cfg.d_s, cfg.d_min, cfg.d_max);
  const geodesy::GeoPoint center{geodesy::to_radians(cfg.center_lat),
                                 geodesy::to_radians(cfg.center_lon)};
  std::vector<geodesy::GeoPoint> home(n_users);
  std::vector<bool> placed(n_users, false);
  std::size_t tree_edges = 0;
  for (std::uint32_t root = 0; root < n_users; ++root) {
    if (placed[root]) {
      continue;
    }
    home[root] = snap(random_in_disk(center, cfg.root_spread_km, rng));
    placed[root] = true;
    std::queue<std::uint32_t> frontier;
    frontier.push(root);
    while (!frontier.empty()) {
      const auto u = frontier.front();
      frontier.pop();
      for (const auto v : adjacency[u]) {
        if (placed[v]) {
          continue;
        }
        const double d = distance(rng);
        home[v] = snap(geodesy::destination(home[u], 2.0 * std::numbers::pi * uniform01(rng), d));
        placed[v] = true;
        ++tree_edges;
        report.planted_distances_km.push_back(d);
        frontier.push(v);
      }
    }
  }
  report.unplanted_edges = edges.size() - tree_edges;

  // Time slots: greedy edge colouring, so no user has two exchanges in a slot.
  const double slot = 3.0 * cfg.max_interval;
  const auto max_delay = static_cast<std::uint64_t>(std::ceil(cfg.max_interval)) - 1;
  std::vector<std::vector<bool>> used(n_users);
  std::vector<PendingEvent> pending;
  pending.reserve(edges.size() * 3);
  for (const auto& [a, b] : edges) {
    std::size_t colour = 0;
    while ((colour < used[a].size() && used[a][colour]) || (colour < used[b].size() && used[b][colour])) {
      ++colour;
    }
    for (const auto u : {a, b}) {
      if (used[u].size() <= colour) {
        used[u].resize(colour + 1, false);
      }
      used[u][colour] = true;
    }

    const double t0 = static_cast<double>(cfg.start_time) + static_cast<double>(colour) * std::floor(slot) +
                      static_cast<double>(uniform_index(rng, static_cast<std::uint64_t>(cfg.max_interval)));
    const double delay = 1.0 + static_cast<double>(uniform_index(rng, max_delay));
    const bool a_first = uniform01(rng) < 0.5;
    const auto sender = a_first ? a : b;
    const auto receiver = a_first ? b : a;
    const bool is_static = uniform01(rng) < cfg.static_fraction;
    report.static_exchanges += is_static ? 1 : 0;
    const auto where = [&](std::uint32_t u) {
      return is_static ? home[u] : snap(random_in_disk(home[u], cfg.jitter_km, rng));
    };
    pending.push_back({t0, pending.size(), sender, receiver, where(sender)});
    if (cfg.followup_gap > 0.0) {
      pending.push_back({t0 + cfg.followup_gap, pending.size(), sender, receiver, where(sender)});
    }
    pending.push_back({t0 + delay, pending.size(), receiver, sender, where(receiver)});
  }

  std::sort(pending.begin(), pending.end(), [](const PendingEvent& x, const PendingEvent& y) {
    return x.t != y.t ? x.t < y.t : x.seq < y.seq;
  });
  out.log.events.reserve(pending.size());
  const auto name = [](std::uint32_t u) { return std::to_string(100000000ULL + u); };
  for (const auto& p : pending) {
    MentionEvent e;
    e.sender = out.log.users.intern(name(p.sender));
    e.receiver = out.log.users.intern(name(p.receiver));
    e.lat = p.at.lat;
    e.lon = p.at.lon == -std::numbers::pi ? std::numbers::pi : p.at.lon;
    e.t = p.t;
    out.log.events.push_back(e);
  }
  return out;
}

void write_jsonl(const EventLog& log, std::ostream& out) {
  for (const auto& e : log.events) {
    out << ingest::format_record(e, log.users, ingest::Format::Jsonl) << "\n";
  }
}

void write_report(const SynthConfig& cfg, const SynthReport& report, std::ostream& out) {
  out << "key,value\n";
  out << "seed," << cfg.seed << "\n";
  out << "users," << cfg.users << "\n";
  out << "alpha," << csv::shortest(cfg.alpha) << "\n";
  out << "gamma1," << csv::shortest(cfg.gamma1) << "\n";
  out << "gamma2," << csv::shortest(cfg.gamma2) << "\n";
  out << "d_s_km," << csv::shortest(cfg.d_s) << "\n";
  out << "d_min_km," << csv::shortest(cfg.d_min) << "\n";
  out << "d_max_km," << csv::shortest(cfg.d_max) << "\n";
  out << "static_fraction," << csv::shortest(cfg.static_fraction) << "\n";
  out << "wiring," << (report.forest ? "forest" : "configuration") << "\n";
  out << "edges," << report.edges << "\n";
  out << "unplanted_edges," << report.unplanted_edges << "\n";
  out << "static_exchanges," << report.static_exchanges << "\n";
  out << "adjusted_users," << report.adjusted_users << "\n";
  out << "dropped_stubs," << report.dropped_stubs << "\n";
  out << "infeasible_degree_sequence," << (report.degree_sequence_adjusted() ? "yes" : "no") << "\n";
}

}  // namespace geofriend::synthgen
