#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sasaki {

enum class ErrorKind {
  NonPositiveDefiniteMetric,
  EvaluationDomain,
  RankMismatch,
  DimensionTooSmall,
  NonPositiveParameter,
  ConsistencyFailure,
  DegenerateDirection,
  UnsupportedDegree,
  InconsistentDimensions,
  NoncompactSpace,
  RankDeficientDesign,
  SpanViolation,
  TailTooLarge,
  IllConditionedFit,
  ZeroVolume,
  SingularSystem,
  HypothesisViolation,
  InvalidManifest,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveDefiniteMetric: return "NonPositiveDefiniteMetric";
    case ErrorKind::EvaluationDomain: return "EvaluationDomain";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorKind::ConsistencyFailure: return "ConsistencyFailure";
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::InconsistentDimensions: return "InconsistentDimensions";
    case ErrorKind::NoncompactSpace: return "NoncompactSpace";
    case ErrorKind::RankDeficientDesign: return "RankDeficientDesign";
    case ErrorKind::SpanViolation: return "SpanViolation";
    case ErrorKind::TailTooLarge: return "TailTooLarge";
    case ErrorKind::IllConditionedFit: return "IllConditionedFit";
    case ErrorKind::ZeroVolume: return "ZeroVolume";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::InvalidManifest: return "InvalidManifest";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sasaki
