#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "geofriend/geodesy.hpp"
#include "geofriend/types.hpp"

namespace geofriend::pairdist {

inline constexpr double kDefaultMaxInterval = 3600.0;

// One mention matched with its reply: the initiator's position at t_send and
// the replier's position at t_reply, t_reply - t_send < max_interval.
struct ExchangeSample {
  UserPair pair;
  UserId initiator;
  double distance_km = 0.0;
  double t_send = 0.0;
  double t_reply = 0.0;
};

struct PairDistance {
  UserPair pair;
  double mean_km = 0.0;
  std::size_t samples = 0;
  double min_km = 0.0;
  double max_km = 0.0;

  bool sub_resolution() const { return geodesy::is_sub_resolution(mean_km); }
};

struct PairDistanceTable {
  // Sorted by pair.
  std::vector<PairDistance> rows;

  bool empty() const noexcept { return rows.empty(); }
  std::size_t size() const noexcept { return rows.size(); }
  const PairDistance* find(UserPair pair) const;
};

// Matches every unconsumed mention u->v with the earliest later unconsumed
// v->u. The match counts only if it arrives within max_interval; either way
// scanning moves on to the next mention. Each event takes part in at most one
// exchange. Result ordered by (t_send, pair).
std::vector<ExchangeSample> match_exchanges(const EventLog& log,
                                            double max_interval = kDefaultMaxInterval);

// Per unordered pair mean of the matched exchange distances.
// Throws EmptyLog, or BadParameters for a non-positive interval.
PairDistanceTable estimate_distances(const EventLog& log,
                                     double max_interval = kDefaultMaxInterval);

PairDistanceTable aggregate(const std::vector<ExchangeSample>& exchanges);

// One mean distance per pair. Throws EmptyTable.
std::vector<double> distance_distribution(const PairDistanceTable& table);

// Drops values below the 10 m position resolution.
std::vector<double> resolvable(const std::vector<double>& distances_km);

}  // namespace geofriend::pairdist
