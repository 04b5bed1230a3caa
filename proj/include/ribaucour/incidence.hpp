#pragma once

// Hyperspheres, planes and circles of the conformal n-sphere, and the
// incidence predicates and intersection constructions between them.

#include <span>
#include <variant>
#include <vector>

#include "ribaucour/lorentz.hpp"

namespace ribaucour {

/// Unit spacelike vector of R^{n+1,1}: an oriented hypersphere, or a plane
/// when (v,q) = 0.
class SphereVec {
 public:
  explicit SphereVec(LorentzVec v, double tol = kDefaultTol);

  /// Scales an arbitrary spacelike vector to unit length.
  static SphereVec normalized(const LorentzVec& v, double tol = kDefaultTol);

  const LorentzVec& vec() const { return v_; }
  int dim() const { return v_.dim(); }
  SphereVec operator-() const { return SphereVec(-v_); }

  /// Signed inverse radius, the o-coefficient; zero for planes.
  double curvature() const { return v_.o_coeff(); }

 private:
  LorentzVec v_;
};

SphereVec sphere_from_center_radius(const Point& center, double radius);
SphereVec plane_from_normal_offset(const Point& unit_normal, double offset,
                                   double tol = kDefaultTol);

struct DecodedSphere {
  Point center;
  double radius = 0.0;
  int orientation = 1;  // +1 or -1
};

struct DecodedPlane {
  Point normal;
  double offset = 0.0;  // (normal, x) for points x on the plane
};

using DecodedHypersphere = std::variant<DecodedSphere, DecodedPlane>;

DecodedHypersphere decode_sphere(const SphereVec& s, double tol = kDefaultTol);

/// Largest norm among the points, floored at 1; the length scale of tolerances.
double point_scale(std::span<const Point> points);

bool coincident(const Point& a, const Point& b, double tol = kDefaultTol);

/// |(s, lift(p))| relative to the coordinate norms of both vectors.
double incidence_residual(const LorentzVec& s, const Point& p);

bool point_on_sphere(const Point& p, const SphereVec& s, double tol = kDefaultTol);

/// Gram matrix of the lifts computed from distances, (xi_a, xi_b) = -|a-b|^2/2.
Eigen::MatrixXd point_gram(std::span<const Point> points);

/// Circle (or line, a circle through infinity) through three distinct points.
SphereSubspace circle_through(const Point& p1, const Point& p2, const Point& p3,
                              double tol = kDefaultTol);

/// Smallest relative Gram eigenvalue of four lifts; zero iff concircular.
double concircularity_residual(const Point& p1, const Point& p2, const Point& p3,
                               const Point& p4);

bool concircular(const Point& p1, const Point& p2, const Point& p3, const Point& p4,
                 double tol = kDefaultTol);

/// Relative size of the Gram eigenvalues beyond rank d+2; zero iff the
/// points lie on a common d-sphere.
double cosphericity_residual(std::span<const Point> points, int d);

bool cospherical(std::span<const Point> points, int d, double tol = kDefaultTol);

struct Intersection {
  Point point;
  bool tangent = false;  // degenerate intersection: `point` is the known point
};

/// Second intersection point of a circle with a hypersphere, given one
/// common point.
Intersection second_intersection(const SphereSubspace& circle, const SphereVec& s,
                                 const Point& known, double tol = kDefaultTol);

/// Same for the circle through p1, p2 and known. Computed after inversion at
/// the known point, where the circle is a line and the sphere a hyperplane;
/// this keeps full relative accuracy far from the origin.
Intersection second_intersection(const Point& p1, const Point& p2, const Point& known,
                                 const SphereVec& s, double tol = kDefaultTol);

/// Second intersection point of two cospherical circles through a common point.
Intersection circle_circle_second(const SphereSubspace& a, const SphereSubspace& b,
                                  const Point& common, double tol = kDefaultTol);

/// Real cross ratio (p1-p2)(p2-p3)^-1(p3-p4)(p4-p1)^-1 of four concircular points.
double edge_cross_ratio(const Point& p1, const Point& p2, const Point& p3, const Point& p4,
                        double tol = kDefaultTol);

/// k points along an arc of the circle from `from` to `to`, endpoints copied.
/// The arc is the one with parameter span at most half a turn (ties go in the
/// increasing direction); `flip` selects the complementary arc.
std::vector<Point> sample_circle_arc(const SphereSubspace& circle, const Point& from,
                                     const Point& to, int k, bool flip = false,
                                     double tol = kDefaultTol);

}  // namespace ribaucour
