#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "geofriend/types.hpp"

namespace geofriend::friendship {

// literal: the ordered scan of the friend counting algorithm, which also
// records who initiated each friendship. symmetric: an edge exists whenever
// both directions occur within the window of each other. Both modes produce
// the same edge set; only literal fills FriendshipGraph::initiated.
enum class Mode { Literal, Symmetric };

std::optional<Mode> parse_mode(std::string_view text);
std::string_view to_string(Mode mode);

struct FriendshipConfig {
  Mode mode = Mode::Symmetric;
  // Maximum seconds between a mention and the opposite mention. nullopt
  // means the whole span of the log.
  std::optional<double> window;
  // Largest log accepted by count_friends_reference.
  std::size_t reference_cap = 10'000;
};

struct FriendshipGraph {
  Mode mode = Mode::Symmetric;
  // Sorted, first < second, no duplicates.
  std::vector<UserPair> edges;
  // Indexed by UserId::value; friend count n_u = degree in `edges`.
  std::vector<std::uint32_t> degree;
  // Literal mode only: n_u as summed over c_uv, i.e. the number of friends u
  // mentioned first and heard back from. Empty in symmetric mode.
  std::vector<std::uint32_t> initiated;

  std::uint32_t friend_count(UserId u) const {
    return u.value < degree.size() ? degree[u.value] : 0;
  }
  // Users with at least one friend, ascending.
  std::vector<UserId> users() const;
  bool empty() const noexcept { return edges.empty(); }

  friend bool operator==(const FriendshipGraph&, const FriendshipGraph&) = default;
};

// Single pass keeping the latest time of every ordered pair.
// Throws EmptyLog, or BadParameters for a non-positive window or unsorted log.
FriendshipGraph count_friends(const EventLog& log, const FriendshipConfig& cfg = {});

// Literal O(T^2) nested scan. Throws LogTooLarge above cfg.reference_cap.
FriendshipGraph count_friends_reference(const EventLog& log, const FriendshipConfig& cfg = {});

struct FriendCountBin {
  std::uint32_t n = 0;
  std::size_t count = 0;
  double probability = 0.0;
};

// P(N = n) over users with n >= 1, ascending in n. Throws EmptyGraph.
std::vector<FriendCountBin> friend_count_distribution(const FriendshipGraph& graph);

// Friend counts of all users with n >= 1, in UserId order.
std::vector<double> friend_counts(const FriendshipGraph& graph);

}  // namespace geofriend::friendship
