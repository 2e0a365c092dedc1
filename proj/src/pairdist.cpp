#include "geofriend/pairdist.hpp"

#include <algorithm>
#include <unordered_map>

#include "geofriend/error.hpp"

namespace geofriend::pairdist {

const PairDistance* PairDistanceTable::find(UserPair pair) const {
  const auto it = std::lower_bound(rows.begin(), rows.end(), pair,
                                   [](const PairDistance& row, const UserPair& p) { return row.pair < p; });
  return it != rows.end() && it->pair == pair ? &*it : nullptr;
}

std::vector<ExchangeSample> match_exchanges(const EventLog& log, double max_interval) {
  if (log.empty()) {
    throw Error(ErrorCode::EmptyLog, "distance estimation needs at least one event");
  }
  if (!(max_interval > 0.0)) {
    throw Error(ErrorCode::BadParameters, "max interval must be positive");
  }
  const auto& ev = log.events;

  // Mentions of different pairs never interact, so the scan runs per pair.
  std::unordered_map<UserPair, std::vector<std::size_t>> by_pair;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    by_pair[UserPair::of(ev[i].sender, ev[i].receiver)].push_back(i);
  }

  std::vector<ExchangeSample> out;
  std::vector<bool> consumed;
  for (const auto& [pair, idx] : by_pair) {
    consumed.assign(idx.size(), false);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (consumed[k]) {
        continue;
      }
      const auto& send = ev[idx[k]];
      for (std::size_t m = k + 1; m < idx.size(); ++m) {
        const auto& reply = ev[idx[m]];
        if (consumed[m] || reply.sender != send.receiver) {
          continue;
        }
        if (reply.t - send.t < max_interval) {
          consumed[k] = consumed[m] = true;
          out.push_back({pair, send.sender,
                         geodesy::distance_sloc({send.lat, send.lon}, {reply.lat, reply.lon}), send.t,
                         reply.t});
        }
        break;
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const ExchangeSample& a, const ExchangeSample& b) {
    if (a.t_send != b.t_send) {
      return a.t_send < b.t_send;
    }
    return a.pair != b.pair ? a.pair < b.pair : a.t_reply < b.t_reply;
  });
  return out;
}

PairDistanceTable aggregate(const std::vector<ExchangeSample>& exchanges) {
  std::unordered_map<UserPair, PairDistance> acc;
  for (const auto& x : exchanges) {
    auto [it, fresh] = acc.try_emplace(x.pair);
    auto& row = it->second;
    if (fresh) {
      row.pair = x.pair;
      row.min_km = row.max_km = x.distance_km;
    }
    row.mean_km += x.distance_km;
    row.min_km = std::min(row.min_km, x.distance_km);
    row.max_km = std::max(row.max_km, x.distance_km);
    ++row.samples;
  }
  PairDistanceTable table;
  table.rows.reserve(acc.size());
  for (auto& [pair, row] : acc) {
    // The clamp keeps the rounded mean inside the sample range.
    row.mean_km = std::clamp(row.mean_km / static_cast<double>(row.samples), row.min_km, row.max_km);
    table.rows.push_back(row);
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const PairDistance& a, const PairDistance& b) { return a.pair < b.pair; });
  return table;
}

PairDistanceTable estimate_distances(const EventLog& log, double max_interval) {
  return aggregate(match_exchanges(log, max_interval));
}

std::vector<double> distance_distribution(const PairDistanceTable& table) {
  if (table.empty()) {
    throw Error(ErrorCode::EmptyTable, "no befriended pair has a qualifying exchange");
  }
  std::vector<double> out;
  out.reserve(table.size());
  for (const auto& row : table.rows) {
    out.push_back(row.mean_km);
  }
  return out;
}

std::vector<double> resolvable(const std::vector<double>& distances_km) {
  std::vector<double> out;
  std::copy_if(distances_km.begin(), distances_km.end(), std::back_inserter(out),
               [](double d) { return !geodesy::is_sub_resolution(d); });
  return out;
}

}  // namespace geofriend::pairdist
