#include "kvwave/errors.hpp"

namespace kvwave {

const char* to_string(Err e) {
  switch (e) {
    case Err::NonPositiveExtent: return "NonPositiveExtent";
    case Err::TooFewNodes: return "TooFewNodes";
    case Err::RegionTouchesBoundary: return "RegionTouchesBoundary";
    case Err::EpsTooLarge: return "EpsTooLarge";
    case Err::NegativeCoefficient: return "NegativeCoefficient";
    case Err::EtaFloorViolated: return "EtaFloorViolated";
    case Err::SupercriticalExponent: return "SupercriticalExponent";
    case Err::SignConditionViolated: return "SignConditionViolated";
    case Err::GrowthBoundViolated: return "GrowthBoundViolated";
    case Err::NotMonotone: return "NotMonotone";
    case Err::DegenerateFeedback: return "DegenerateFeedback";
    case Err::NonPositiveConstant: return "NonPositiveConstant";
    case Err::SolverDiverged: return "SolverDiverged";
    case Err::NonFiniteState: return "NonFiniteState";
    case Err::TrajectoryTooShort: return "TrajectoryTooShort";
    case Err::EmptyTrajectory: return "EmptyTrajectory";
    case Err::DampingAbsent: return "DampingAbsent";
    case Err::ConfigInvalid: return "ConfigInvalid";
  }
  return "UnknownError";
}

} // namespace kvwave
