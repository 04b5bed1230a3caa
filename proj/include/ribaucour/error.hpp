#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <string_view>

namespace ribaucour {

/// Failure modes of the geometric constructions. Every kind maps to a
/// stable identifier used in machine-readable reports.
enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  NonFinite,
  PointAtInfinity,
  NotIsotropic,
  DependentInput,
  DegenerateSignature,
  CoincidentPoints,
  NotConcircular,
  NotCospherical,
  NoIntersection,
  InputNotIncident,
  CircleOnSphere,
  AmbiguousIdenticalCircles,
  LengthMismatch,
  CurveMeetsSphere,
  InitialNotOnSphere,
  NetMeetsSphere,
  NotCircularNet,
  MiguelMismatch,
  InconsistentCube,
  OrderMismatch,
  ZeroDenominator,
  RankDeficient,
  NonParallelFrame,
  DegenerateDerivative,
  NonRibaucourInput,
  BoundaryMismatch,
};

std::string_view to_string(ErrorKind kind);

/// Raised by every construction in the library. Carries the failing element
/// index (edge, sample, vertex) and, for multi-stage pipelines, a stage tag.
class GeometryError : public std::exception {
 public:
  GeometryError(ErrorKind kind, std::string detail,
                std::optional<std::size_t> index = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::size_t> index() const noexcept { return index_; }
  const std::string& stage() const noexcept { return stage_; }

  GeometryError with_index(std::size_t index) const;
  GeometryError with_stage(std::string stage) const;

  const char* what() const noexcept override { return message_.c_str(); }

 private:
  void compose();

  ErrorKind kind_;
  std::string detail_;
  std::optional<std::size_t> index_;
  std::string stage_;
  std::string message_;
};

}  // namespace ribaucour
