#pragma once

// Discrete curves and circular nets: Ribaucour transforms onto hyperspheres,
// common transforms of cospherical curves, interpolation chains, Miguel's
// cube completion and discrete Ribaucour coordinates.

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ribaucour/incidence.hpp"

namespace ribaucour {

class DiscreteCurve {
 public:
  /// Validates dimensions, finiteness and distinct consecutive points.
  explicit DiscreteCurve(std::vector<Point> points, double tol = kDefaultTol);

  /// Output of a construction whose tangent steps may repeat a point; only
  /// dimensions and finiteness are checked.
  static DiscreteCurve constructed(std::vector<Point> points);

  int ambient_dim() const { return static_cast<int>(points_.front().size()); }
  std::size_t size() const { return points_.size(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }

 private:
  struct Unchecked {};
  DiscreteCurve(std::vector<Point> points, Unchecked);

  std::vector<Point> points_;
};

/// Grid of points with concircular elementary quads, stored row-major.
class CircularNet {
 public:
  CircularNet(std::size_t rows, std::size_t cols, std::vector<Point> points,
              double tol = kDefaultTol);

  int ambient_dim() const { return static_cast<int>(points_.front().size()); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Point& at(std::size_t i, std::size_t j) const { return points_[i * cols_ + j]; }
  const std::vector<Point>& points() const { return points_; }

  /// Concircularity residual of the quad with lower-left corner (i, j).
  double quad_residual(std::size_t i, std::size_t j) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Point> points_;
};

/// Per-edge circularity of a pair of curves; edge k is the quad
/// (x_k, x_{k+1}, y_{k+1}, y_k).
struct PairReport {
  std::vector<double> residuals;
  std::vector<double> cross_ratios;  // NaN where the quad has a repeated point
  double max_residual = 0.0;
  bool passed = false;
};

PairReport pair_validate(const DiscreteCurve& x, const DiscreteCurve& y,
                         double tol = kDefaultTol);

struct CurveTransform {
  DiscreteCurve curve;
  std::vector<std::size_t> tangent_steps;  // indices k whose step k -> k+1 was tangent
};

/// Ribaucour transform of a curve onto a hypersphere it does not meet, by
/// successive second intersections of edge circumcircles with the sphere.
CurveTransform curve_transform_to_sphere(const DiscreteCurve& x, const SphereVec& sphere,
                                         const Point& initial, double tol = kDefaultTol);

/// Common Ribaucour transform of two curves on one 2-sphere.
CurveTransform common_transform(const DiscreteCurve& a, const DiscreteCurve& b,
                                const SphereVec& sphere, const Point& initial,
                                double tol = kDefaultTol);

/// Chain x0 ~ x0_hat ~ common ~ x1_hat ~ x1 of Ribaucour pairs.
struct InterpolationChain {
  DiscreteCurve x0;
  DiscreteCurve x0_hat;
  DiscreteCurve common;
  DiscreteCurve x1_hat;
  DiscreteCurve x1;
  std::array<PairReport, 4> links;

  std::array<const DiscreteCurve*, 5> curves() const {
    return {&x0, &x0_hat, &common, &x1_hat, &x1};
  }
};

/// `initials` seed, in chain order, x0_hat, the common transform and x1_hat.
/// Stage errors are tagged "stage 1" (reduce x0), "stage 2" (reduce x1) and
/// "stage 3" (common transform).
InterpolationChain interpolate_chain(const DiscreteCurve& x0, const DiscreteCurve& x1,
                                     const SphereVec& sphere,
                                     const std::array<Point, 3>& initials,
                                     double tol = kDefaultTol);

/// Seven vertices of a combinatorial cube; corner labels are binary (xyz).
struct CubeCorners {
  Point v000, v100, v010, v001, v110, v101, v011;
};

/// Eighth vertex v111 making all cube faces concircular (Miguel's theorem).
Point miguel_eighth(const CubeCorners& cube, double tol = kDefaultTol);

struct NetTransform {
  CircularNet net;
  Eigen::MatrixXd route_mismatch;  // distance between the two routes; zero on row/column 0
  double max_mismatch = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> tangent_vertices;
};

/// Relative route mismatch tolerated at an interior vertex of a net transform.
/// Each vertex inherits the rounding of all earlier ones, so this is looser
/// than the incidence tolerance.
inline constexpr double kMiguelTol = 1e-8;

/// Ribaucour transform of a circular net onto a hypersphere it does not meet.
/// Interior vertices are reached along both edges; MiguelMismatch is thrown
/// when the routes differ by more than mismatch_tol * scale.
NetTransform net_transform_to_sphere(const CircularNet& x, const SphereVec& sphere,
                                     const Point& initial, double tol = kDefaultTol,
                                     double mismatch_tol = kMiguelTol);

/// Cosphericity residuals of corresponding elementary cells of two nets.
Eigen::MatrixXd cell_cosphericity(const CircularNet& x, const CircularNet& y);

/// Initial circular square of a double reduction: y10 on e1, y01 on e2, y11 on both.
struct InitialSquare {
  Point y00, y10, y01, y11;
};

InitialSquare initial_square(const Point& x0, const SphereVec& e1, const SphereVec& e2,
                             const Point& y11, const Point& aux, double tol = kDefaultTol);

/// Same, with the auxiliary circle point defaulted: the midpoint of x0 and y11
/// displaced by half their distance along the axis of smallest separation.
InitialSquare initial_square(const Point& x0, const SphereVec& e1, const SphereVec& e2,
                             const Point& y11, double tol = kDefaultTol);

Point default_square_aux(const Point& x0, const Point& y11);

struct DoubleReduction {
  DiscreteCurve route_ij;  // e1 first, then e2
  DiscreteCurve route_ji;  // e2 first, then e1
  double order_check = 0.0;
};

/// Relative order tolerance used by `double_reduction_curve`.
inline constexpr double kOrderTol = 1e-7;

/// Discrete Ribaucour coordinates of a curve: reduction onto the circle
/// <e1, e2>^perp along both orders. Throws OrderMismatch when the routes
/// differ by more than order_tol * scale.
DoubleReduction double_reduction_curve(const DiscreteCurve& x, const SphereVec& e1,
                                       const SphereVec& e2, const InitialSquare& square,
                                       double tol = kDefaultTol, double order_tol = kOrderTol);

}  // namespace ribaucour
