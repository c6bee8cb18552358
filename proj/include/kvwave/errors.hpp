#pragma once

#include <stdexcept>
#include <string>

namespace kvwave {

/// Typed failure codes. The CLI maps these onto process exit codes:
/// config errors -> 2, solver failures -> 3, assumption violations -> 4.
enum class Err {
  NonPositiveExtent,
  TooFewNodes,
  RegionTouchesBoundary,
  EpsTooLarge,
  NegativeCoefficient,
  EtaFloorViolated,
  SupercriticalExponent,
  SignConditionViolated,
  GrowthBoundViolated,
  NotMonotone,
  DegenerateFeedback,
  NonPositiveConstant,
  SolverDiverged,
  NonFiniteState,
  TrajectoryTooShort,
  EmptyTrajectory,
  DampingAbsent,
  ConfigInvalid,
};

const char* to_string(Err e);

class Error : public std::runtime_error {
public:
  Error(Err code, const std::string& msg)
      : std::runtime_error(std::string(to_string(code)) + ": " + msg), code_(code) {}

  Err code() const { return code_; }

private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

} // namespace kvwave
