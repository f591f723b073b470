#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sepcheck {

enum class ErrorKind {
  NotHermitian,
  NoConvergence,
  DimensionMismatch,
  DimensionCapExceeded,
  NonFiniteEntry,
  TraceNotOne,
  NotPositiveSemidefinite,
  NotNormalized,
  ParameterOutOfRange,
  UnknownFamily,
  UnknownCriterion,
  NoSignChange,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this one exception type; kind()
// identifies the failed contract and value() carries the offending number
// where there is one (e.g. the minimum eigenvalue of a non-PSD matrix).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<double> value = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  std::optional<double> value_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DimensionCapExceeded: return "DimensionCapExceeded";
    case ErrorKind::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorKind::TraceNotOne: return "TraceNotOne";
    case ErrorKind::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::UnknownFamily: return "UnknownFamily";
    case ErrorKind::UnknownCriterion: return "UnknownCriterion";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace sepcheck
