#include "winpred/error.hpp"

namespace winpred {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return "Io";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::DuplicateMatchId: return "DuplicateMatchId";
    case ErrorKind::UnknownMatchId: return "UnknownMatchId";
    case ErrorKind::NonMonotoneCumulative: return "NonMonotoneCumulative";
    case ErrorKind::MissingMinute: return "MissingMinute";
    case ErrorKind::DuplicateMinute: return "DuplicateMinute";
    case ErrorKind::MinuteOutOfRange: return "MinuteOutOfRange";
    case ErrorKind::EmptySelection: return "EmptySelection";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::HeroOutOfRange: return "HeroOutOfRange";
    case ErrorKind::MissingSample: return "MissingSample";
    case ErrorKind::MatchTooShort: return "MatchTooShort";
    case ErrorKind::WindowBelowMinimum: return "WindowBelowMinimum";
    case ErrorKind::SingleClassData: return "SingleClassData";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFiniteFeature: return "NonFiniteFeature";
    case ErrorKind::EmptyData: return "EmptyData";
    case ErrorKind::TooFewRows: return "TooFewRows";
    case ErrorKind::EmptySide: return "EmptySide";
    case ErrorKind::UnknownTournament: return "UnknownTournament";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::UnknownFeature: return "UnknownFeature";
    case ErrorKind::MalformedModel: return "MalformedModel";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace winpred
