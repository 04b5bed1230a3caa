#pragma once

// Sampled smooth curves: parallel normal fields, enveloped sphere
// congruences, reduction onto a hypersphere and the permutability algebra of
// Ribaucour coordinates.

#include <cstddef>
#include <limits>
#include <vector>

#include "ribaucour/incidence.hpp"

namespace ribaucour {

/// Tolerance for frame conditions that only hold up to discretization error
/// (normal orthogonal to the discrete tangent, parallelism of a field).
inline constexpr double kFrameTol = 1e-6;

/// Unit tangents of the circle through each sample and its two neighbours
/// (one-sided triples at the ends, the chord for two samples).
std::vector<Point> discrete_tangents(const std::vector<Point>& samples);

class FramedCurve {
 public:
  /// Checks unit normals (tol) and |normal . tangent| <= frame_tol.
  FramedCurve(std::vector<Point> samples, std::vector<Point> normals,
              double frame_tol = kFrameTol, double tol = kDefaultTol);

  int ambient_dim() const { return static_cast<int>(samples_.front().size()); }
  std::size_t size() const { return samples_.size(); }
  const std::vector<Point>& samples() const { return samples_; }
  const std::vector<Point>& normals() const { return normals_; }
  const std::vector<Point>& tangents() const { return tangents_; }
  double tangent_residual() const { return tangent_residual_; }

 private:
  std::vector<Point> samples_;
  std::vector<Point> normals_;
  std::vector<Point> tangents_;
  double tangent_residual_ = 0.0;
};

/// Discrete parallel transport of n0 along the samples. Each step is the pair
/// of reflections carrying the edge direction and tangent onto the next ones.
FramedCurve transport_normal(const std::vector<Point>& samples, const Point& n0,
                             double frame_tol = kFrameTol);

/// Transports an orthonormal set of normals together; the fields stay orthonormal.
std::vector<std::vector<Point>> transport_frame(const std::vector<Point>& samples,
                                                const std::vector<Point>& n0,
                                                double frame_tol = kFrameTol);

/// Largest step deviation of a normal field from discrete parallel transport.
double parallel_residual(const std::vector<Point>& samples, const std::vector<Point>& normals);

/// Lift n + (n,x) q of the tangent hyperplane at x with unit normal n.
LorentzVec plane_lift(const Point& x, const Point& unit_normal);

/// Sphere touching the curve at x with normal n and passing through xhat.
SphereVec enveloped_sphere(const Point& x, const Point& normal, const Point& xhat,
                           double tol = kDefaultTol);

/// Plane lift of the normal of the partner curve at xhat induced by s.
LorentzVec induced_normal(const SphereVec& s, const Point& xhat, double tol = kDefaultTol);

struct PointReduction {
  SphereVec sphere;   // enveloped sphere through the touching point
  LorentzVec xi_hat;  // isotropic, orthogonal to e
};

/// Touching point on e of the sphere pencil through xi tangent to the plane t.
PointReduction reduce_point(const LorentzVec& xi, const LorentzVec& t, const SphereVec& e,
                            double tol = kDefaultTol);

/// Single-sample reduction: the touching point on e for the normal at x.
/// Seeding a discrete transform here makes it follow the smooth one.
Point reduce_sample(const Point& x, const Point& normal, const SphereVec& e,
                    double tol = kDefaultTol);

struct SphereCongruence {
  std::vector<SphereVec> spheres;
};

struct SmoothReduction {
  std::vector<Point> curve;
  SphereCongruence congruence;
  double pair_residual = 0.0;  // largest edge-quad concircularity residual of the samples
};

SmoothReduction reduce_smooth(const FramedCurve& fc, const SphereVec& e,
                              double frame_tol = kFrameTol, double tol = kDefaultTol);

/// Coefficients (a_0, a_i, a_j) of xi_ij = a_0 xi + a_i (t_i - e_i) + a_j (t_j - e_j)
/// in the closed form, with a_j = 1.
Eigen::Vector3d permij_coefficients(const LorentzVec& xi, const LorentzVec& ti,
                                    const LorentzVec& tj, const SphereVec& ei,
                                    const SphereVec& ej, double tol = kDefaultTol);

LorentzVec permij_closed_form(const LorentzVec& xi, const LorentzVec& ti, const LorentzVec& tj,
                              const SphereVec& ei, const SphereVec& ej,
                              double tol = kDefaultTol);

/// Null vector (a_0, a_1..a_k) of the k x (k+1) system making
/// a_0 xi + sum a_i (t_i - e_i) orthogonal to every e_i. Gauge a_0 = 1 when
/// possible, else unit norm with the first nonzero entry positive.
Eigen::VectorXd bquad_nullspace(const LorentzVec& xi, const std::vector<LorentzVec>& ts,
                                const std::vector<SphereVec>& es, double tol = kDefaultTol);

LorentzVec bquad_assemble(const LorentzVec& xi, const std::vector<LorentzVec>& ts,
                          const std::vector<SphereVec>& es, const Eigen::VectorXd& coeffs);

/// Ribaucour coordinates of sampled curve onto the circle <e1, e2>^perp.
std::vector<Point> coords_smooth(const std::vector<Point>& samples, const Point& n1_0,
                                 const Point& n2_0, const SphereVec& e1, const SphereVec& e2,
                                 double frame_tol = kFrameTol, double tol = kDefaultTol);

/// Angle between two vectors as lines, in [0, pi/2]; scale free.
double line_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace ribaucour
