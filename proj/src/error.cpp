#include "ribaucour/error.hpp"

#include <sstream>
#include <utility>

namespace ribaucour {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::PointAtInfinity: return "PointAtInfinity";
    case ErrorKind::NotIsotropic: return "NotIsotropic";
    case ErrorKind::DependentInput: return "DependentInput";
    case ErrorKind::DegenerateSignature: return "DegenerateSignature";
    case ErrorKind::CoincidentPoints: return "CoincidentPoints";
    case ErrorKind::NotConcircular: return "NotConcircular";
    case ErrorKind::NotCospherical: return "NotCospherical";
    case ErrorKind::NoIntersection: return "NoIntersection";
    case ErrorKind::InputNotIncident: return "InputNotIncident";
    case ErrorKind::CircleOnSphere: return "CircleOnSphere";
    case ErrorKind::AmbiguousIdenticalCircles: return "AmbiguousIdenticalCircles";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::CurveMeetsSphere: return "CurveMeetsSphere";
    case ErrorKind::InitialNotOnSphere: return "InitialNotOnSphere";
    case ErrorKind::NetMeetsSphere: return "NetMeetsSphere";
    case ErrorKind::NotCircularNet: return "NotCircularNet";
    case ErrorKind::MiguelMismatch: return "MiguelMismatch";
    case ErrorKind::InconsistentCube: return "InconsistentCube";
    case ErrorKind::OrderMismatch: return "OrderMismatch";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NonParallelFrame: return "NonParallelFrame";
    case ErrorKind::DegenerateDerivative: return "DegenerateDerivative";
    case ErrorKind::NonRibaucourInput: return "NonRibaucourInput";
    case ErrorKind::BoundaryMismatch: return "BoundaryMismatch";
  }
  return "Unknown";
}

GeometryError::GeometryError(ErrorKind kind, std::string detail,
                             std::optional<std::size_t> index)
    : kind_(kind), detail_(std::move(detail)), index_(index) {
  compose();
}

GeometryError GeometryError::with_index(std::size_t index) const {
  GeometryError copy = *this;
  copy.index_ = index;
  copy.compose();
  return copy;
}

GeometryError GeometryError::with_stage(std::string stage) const {
  GeometryError copy = *this;
  copy.stage_ = std::move(stage);
  copy.compose();
  return copy;
}

void GeometryError::compose() {
  std::ostringstream out;
  out << to_string(kind_);
  if (!stage_.empty()) out << " in " << stage_;
  if (index_) out << " at index " << *index_;
  if (!detail_.empty()) out << ": " << detail_;
  message_ = out.str();
}

}  // namespace ribaucour
