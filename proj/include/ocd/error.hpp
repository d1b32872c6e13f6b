#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ocd {

enum class ErrorKind {
  InvalidArgument,
  NonFiniteDistance,
  UnknownLocation,
  ZeroMass,
  NegativeMass,
  MassExceedsOne,
  ZeroTotalMass,
  ParseError,
  DuplicateTime,
  EmptySubsetMass,
  MissingDelay,
  CapacityExceeded,
  UnassignedPoints,
  InfeasibleSpec,
  NonTermination,
  SingletonCluster,
  TooLarge,
  ZeroBallMass,
  NoOracleData,
  NotMetric,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonFiniteDistance: return "NonFiniteDistance";
    case ErrorKind::UnknownLocation: return "UnknownLocation";
    case ErrorKind::ZeroMass: return "ZeroMass";
    case ErrorKind::NegativeMass: return "NegativeMass";
    case ErrorKind::MassExceedsOne: return "MassExceedsOne";
    case ErrorKind::ZeroTotalMass: return "ZeroTotalMass";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DuplicateTime: return "DuplicateTime";
    case ErrorKind::EmptySubsetMass: return "EmptySubsetMass";
    case ErrorKind::MissingDelay: return "MissingDelay";
    case ErrorKind::CapacityExceeded: return "CapacityExceeded";
    case ErrorKind::UnassignedPoints: return "UnassignedPoints";
    case ErrorKind::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorKind::NonTermination: return "NonTermination";
    case ErrorKind::SingletonCluster: return "SingletonCluster";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ZeroBallMass: return "ZeroBallMass";
    case ErrorKind::NoOracleData: return "NoOracleData";
    case ErrorKind::NotMetric: return "NotMetric";
  }
  return "Unknown";
}

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ocd
