#ifndef LCAT_ERRORS_HPP
#define LCAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lcat {

// Every failure the library can raise, grouped by how the CLI maps them
// to exit codes (validation = 2, numeric = 3, io = 4).
enum class ErrorCode {
  // load-data
  MalformedRow,
  NonUniformStep,
  EmptyInput,
  IncompatibleResolution,
  DegenerateRange,
  WindowMismatch,
  // dmd-core
  TooFewSnapshots,
  RankDeficient,
  DegenerateData,
  BadModeIndex,
  // grid-model
  ZeroImpedanceBranch,
  Diverged,
  IslandedBus,
  SingularEliminationBlock,
  MissingZone,
  AllZonesZero,
  InvalidModel,
  // swing-sim
  UnstableInitialization,
  EventOutsideWindow,
  UnknownBus,
  // attack-lab
  DimensionMismatch,
  LengthMismatch,
  ZeroTotalLoad,
  // cli-runner / io
  MalformedInput,
  NothingToReport,
  IoFailure,
};

enum class ErrorKind { Validation, Numeric, Io };

const char* to_string(ErrorCode code);
ErrorKind kind_of(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }
  ErrorKind kind() const { return kind_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace lcat

#endif  // LCAT_ERRORS_HPP
