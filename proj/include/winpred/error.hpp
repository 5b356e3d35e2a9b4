#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace winpred {

enum class ErrorKind {
  Io,
  MalformedRow,
  InvariantViolation,
  DuplicateMatchId,
  UnknownMatchId,
  NonMonotoneCumulative,
  MissingMinute,
  DuplicateMinute,
  MinuteOutOfRange,
  EmptySelection,
  InvalidConfig,
  HeroOutOfRange,
  MissingSample,
  MatchTooShort,
  WindowBelowMinimum,
  SingleClassData,
  DimensionMismatch,
  NonFiniteFeature,
  EmptyData,
  TooFewRows,
  EmptySide,
  UnknownTournament,
  EmptyDataset,
  UnknownFeature,
  MalformedModel,
};

std::string_view to_string(ErrorKind kind);

// All library failures surface as this type; `kind()` lets callers (and the
// CLI exit-code mapping) distinguish them without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace winpred
