#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace geofriend {

// Dense index into a UserTable.
struct UserId {
  std::uint32_t value = 0;

  friend auto operator<=>(const UserId&, const UserId&) = default;
};

}  // namespace geofriend

template <>
struct std::hash<geofriend::UserId> {
  std::size_t operator()(const geofriend::UserId& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

namespace geofriend {

// Interns user id strings to dense UserIds in first-seen order.
class UserTable {
 public:
  UserId intern(std::string_view name);
  std::optional<UserId> find(std::string_view name) const;
  const std::string& name(UserId id) const { return names_.at(id.value); }
  std::size_t size() const noexcept { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, UserId> index_;
};

// One geo-tagged mention. Coordinates are the sender's position in radians;
// t is seconds since the Unix epoch, UTC.
struct MentionEvent {
  UserId sender;
  UserId receiver;
  double lat = 0.0;
  double lon = 0.0;
  double t = 0.0;

  friend bool operator==(const MentionEvent&, const MentionEvent&) = default;
};

// Time-ordered mentions together with the table their ids refer to.
struct EventLog {
  std::vector<MentionEvent> events;
  UserTable users;

  bool empty() const noexcept { return events.empty(); }
  std::size_t size() const noexcept { return events.size(); }
  std::span<const MentionEvent> view() const noexcept { return events; }

  // Seconds between the first and last event; zero for logs with < 2 events.
  double span_seconds() const noexcept {
    return events.size() < 2 ? 0.0 : events.back().t - events.front().t;
  }
};

// Unordered user pair, stored with first < second.
struct UserPair {
  UserId first;
  UserId second;

  static UserPair of(UserId a, UserId b) { return a < b ? UserPair{a, b} : UserPair{b, a}; }

  friend auto operator<=>(const UserPair&, const UserPair&) = default;
};

}  // namespace geofriend

template <>
struct std::hash<geofriend::UserPair> {
  std::size_t operator()(const geofriend::UserPair& p) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t{p.first.value} << 32) | p.second.value);
  }
};
