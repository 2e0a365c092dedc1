#include "geofriend/types.hpp"

#include "geofriend/error.hpp"

namespace geofriend {

UserId UserTable::intern(std::string_view name) {
  std::string key(name);
  if (const auto it = index_.find(key); it != index_.end()) {
    return it->second;
  }
  const UserId id{static_cast<std::uint32_t>(names_.size())};
  names_.push_back(key);
  index_.emplace(std::move(key), id);
  return id;
}

std::optional<UserId> UserTable::find(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
      return "IoError";
    case ErrorCode::EmptyInput:
      return "EmptyInput";
    case ErrorCode::BadCache:
      return "BadCache";
    case ErrorCode::EmptyLog:
      return "EmptyLog";
    case ErrorCode::LogTooLarge:
      return "LogTooLarge";
    case ErrorCode::EmptyGraph:
      return "EmptyGraph";
    case ErrorCode::EmptyTable:
      return "EmptyTable";
    case ErrorCode::EmptySamples:
      return "EmptySamples";
    case ErrorCode::NonPositiveSample:
      return "NonPositiveSample";
    case ErrorCode::DegenerateSamples:
      return "DegenerateSamples";
    case ErrorCode::TooFewBins:
      return "TooFewBins";
    case ErrorCode::BadExponent:
      return "BadExponent";
    case ErrorCode::BadParameters:
      return "BadParameters";
  }
  return "Error";
}

}  // namespace geofriend
