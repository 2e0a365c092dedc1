#include "geofriend/friendship.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "geofriend/error.hpp"

namespace geofriend::friendship {

namespace {

struct OrderedPair {
  std::uint32_t from;
  std::uint32_t to;
  friend bool operator==(const OrderedPair&, const OrderedPair&) = default;
};

struct OrderedPairHash {
  std::size_t operator()(const OrderedPair& p) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t{p.from} << 32) | p.to);
  }
};

double effective_window(const EventLog& log, const FriendshipConfig& cfg) {
  if (log.empty()) {
    throw Error(ErrorCode::EmptyLog, "friend counting needs at least one event");
  }
  for (std::size_t i = 1; i < log.events.size(); ++i) {
    if (log.events[i].t < log.events[i - 1].t) {
      throw Error(ErrorCode::BadParameters, "event log is not sorted by time");
    }
  }
  if (!cfg.window) {
    return std::numeric_limits<double>::infinity();
  }
  if (!(*cfg.window > 0.0)) {
    throw Error(ErrorCode::BadParameters, "friendship window must be positive");
  }
  return *cfg.window;
}

// Builds the graph from the set of ordered (initiator, replier) pairs.
FriendshipGraph assemble(const EventLog& log, Mode mode,
                         const std::unordered_set<OrderedPair, OrderedPairHash>& initiated) {
  FriendshipGraph g;
  g.mode = mode;
  // Hand-built logs may carry ids without a populated user table.
  std::size_t n_users = log.users.size();
  for (const auto& e : log.events) {
    n_users = std::max<std::size_t>({n_users, e.sender.value + 1u, e.receiver.value + 1u});
  }
  g.degree.assign(n_users, 0);
  if (mode == Mode::Literal) {
    g.initiated.assign(n_users, 0);
  }
  g.edges.reserve(initiated.size());
  for (const auto& p : initiated) {
    g.edges.push_back(UserPair::of(UserId{p.from}, UserId{p.to}));
    if (mode == Mode::Literal) {
      ++g.initiated[p.from];
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  for (const auto& e : g.edges) {
    ++g.degree[e.first.value];
    ++g.degree[e.second.value];
  }
  return g;
}

}  // namespace

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "literal") {
    return Mode::Literal;
  }
  if (text == "symmetric") {
    return Mode::Symmetric;
  }
  return std::nullopt;
}

std::string_view to_string(Mode mode) { return mode == Mode::Literal ? "literal" : "symmetric"; }

std::vector<UserId> FriendshipGraph::users() const {
  std::vector<UserId> out;
  for (std::uint32_t i = 0; i < degree.size(); ++i) {
    if (degree[i] > 0) {
      out.push_back(UserId{i});
    }
  }
  return out;
}

FriendshipGraph count_friends(const EventLog& log, const FriendshipConfig& cfg) {
  const double window = effective_window(log, cfg);
  std::unordered_map<OrderedPair, double, OrderedPairHash> latest;
  std::unordered_set<OrderedPair, OrderedPairHash> initiated;
  latest.reserve(log.size());
  for (const auto& e : log.events) {
    const OrderedPair reverse{e.receiver.value, e.sender.value};
    if (const auto it = latest.find(reverse); it != latest.end() && e.t - it->second <= window) {
      initiated.insert(reverse);
    }
    latest[OrderedPair{e.sender.value, e.receiver.value}] = e.t;
  }
  return assemble(log, cfg.mode, initiated);
}

FriendshipGraph count_friends_reference(const EventLog& log, const FriendshipConfig& cfg) {
  if (log.size() > cfg.reference_cap) {
    throw Error(ErrorCode::LogTooLarge, std::to_string(log.size()) + " events exceed the cap of " +
                                            std::to_string(cfg.reference_cap));
  }
  const double window = effective_window(log, cfg);
  const auto& ev = log.events;
  std::unordered_set<OrderedPair, OrderedPairHash> initiated;
  for (std::size_t t = 0; t < ev.size(); ++t) {
    for (std::size_t s = t + 1; s < ev.size(); ++s) {
      if (ev[s].sender == ev[t].receiver && ev[s].receiver == ev[t].sender) {
        if (ev[s].t - ev[t].t <= window) {
          initiated.insert(OrderedPair{ev[t].sender.value, ev[t].receiver.value});
        }
        break;
      }
    }
  }
  return assemble(log, cfg.mode, initiated);
}

std::vector<FriendCountBin> friend_count_distribution(const FriendshipGraph& graph) {
  if (graph.empty()) {
    throw Error(ErrorCode::EmptyGraph, "no friendships to summarize");
  }
  std::map<std::uint32_t, std::size_t> counts;
  std::size_t total = 0;
  for (const auto n : graph.degree) {
    if (n > 0) {
      ++counts[n];
      ++total;
    }
  }
  std::vector<FriendCountBin> out;
  out.reserve(counts.size());
  for (const auto& [n, c] : counts) {
    out.push_back({n, c, static_cast<double>(c) / static_cast<double>(total)});
  }
  return out;
}

std::vector<double> friend_counts(const FriendshipGraph& graph) {
  std::vector<double> out;
  for (const auto n : graph.degree) {
    if (n > 0) {
      out.push_back(n);
    }
  }
  return out;
}

}  // namespace geofriend::friendship
