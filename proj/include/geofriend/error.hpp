#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geofriend {

enum class ErrorCode {
  IoError,
  EmptyInput,
  BadCache,
  EmptyLog,
  LogTooLarge,
  EmptyGraph,
  EmptyTable,
  EmptySamples,
  NonPositiveSample,
  DegenerateSamples,
  TooFewBins,
  BadExponent,
  BadParameters,
};

std::string_view to_string(ErrorCode code);

// Errors raised by the pipeline stages. The CLI exits with 1 for
// BadParameters and BadExponent and with 2 for the rest.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace geofriend
