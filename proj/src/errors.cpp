#include "lcat/errors.hpp"

namespace lcat {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonUniformStep: return "NonUniformStep";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::IncompatibleResolution: return "IncompatibleResolution";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::WindowMismatch: return "WindowMismatch";
    case ErrorCode::TooFewSnapshots: return "TooFewSnapshots";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::BadModeIndex: return "BadModeIndex";
    case ErrorCode::ZeroImpedanceBranch: return "ZeroImpedanceBranch";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::IslandedBus: return "IslandedBus";
    case ErrorCode::SingularEliminationBlock: return "SingularEliminationBlock";
    case ErrorCode::MissingZone: return "MissingZone";
    case ErrorCode::AllZonesZero: return "AllZonesZero";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::UnstableInitialization: return "UnstableInitialization";
    case ErrorCode::EventOutsideWindow: return "EventOutsideWindow";
    case ErrorCode::UnknownBus: return "UnknownBus";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroTotalLoad: return "ZeroTotalLoad";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::NothingToReport: return "NothingToReport";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "UnknownError";
}

ErrorKind kind_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Diverged:
    case ErrorCode::RankDeficient:
    case ErrorCode::DegenerateData:
    case ErrorCode::SingularEliminationBlock:
    case ErrorCode::UnstableInitialization:
      return ErrorKind::Numeric;
    case ErrorCode::MalformedRow:
    case ErrorCode::EmptyInput:
    case ErrorCode::MalformedInput:
    case ErrorCode::IoFailure:
      return ErrorKind::Io;
    default:
      return ErrorKind::Validation;
  }
}

}  // namespace lcat
