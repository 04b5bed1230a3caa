#pragma once

// Minkowski linear algebra of R^{n+1,1} in the isotropic basis (o; e_1..e_n; q)
// with (o,q) = -1, (e_i,e_j) = delta_ij and o, q null.

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

#include "ribaucour/error.hpp"

namespace ribaucour {

/// Shared relative tolerance of all rank, isotropy and incidence predicates.
inline constexpr double kDefaultTol = 1e-9;

inline constexpr int kMinAmbientDim = 2;
inline constexpr int kMaxAmbientDim = 6;

/// A point of the ambient Euclidean space R^n.
using Point = Eigen::VectorXd;

/// Vector of R^{n+1,1}. Coordinates are stored as [o, e_1..e_n, q].
class LorentzVec {
 public:
  LorentzVec(double o_coeff, const Point& euclid, double q_coeff);

  /// Wraps a raw coordinate vector of length n+2.
  static LorentzVec from_coords(Eigen::VectorXd coords);

  static LorentzVec origin(int n);    // o
  static LorentzVec infinity(int n);  // q
  static LorentzVec basis(int n, int i);  // e_i, 1-based like the math

  int dim() const { return static_cast<int>(coords_.size()) - 2; }
  double o_coeff() const { return coords_(0); }
  double q_coeff() const { return coords_(coords_.size() - 1); }
  Point euclid() const { return coords_.segment(1, dim()); }
  const Eigen::VectorXd& coords() const { return coords_; }

  /// Euclidean norm of the coordinate vector; used only as a numeric scale.
  double coord_norm() const { return coords_.norm(); }

  LorentzVec operator-() const { return from_coords(-coords_); }
  friend LorentzVec operator+(const LorentzVec& a, const LorentzVec& b);
  friend LorentzVec operator-(const LorentzVec& a, const LorentzVec& b);
  friend LorentzVec operator*(double s, const LorentzVec& v);
  friend LorentzVec operator*(const LorentzVec& v, double s) { return s * v; }
  friend LorentzVec operator/(const LorentzVec& v, double s) { return (1.0 / s) * v; }

 private:
  explicit LorentzVec(Eigen::VectorXd coords);

  Eigen::VectorXd coords_;
};

/// Throws DimensionMismatch unless n is a supported ambient dimension.
void require_supported_dim(int n);

double inner(const LorentzVec& v, const LorentzVec& w);

/// Euclidean lift x -> o + x + |x|^2/2 q onto the light cone section (xi,q) = -1.
LorentzVec lift(const Point& x);

/// Inverse of `lift` on isotropic vectors. Throws PointAtInfinity for the
/// direction of q.
Point unlift(const LorentzVec& v, double tol = kDefaultTol);

/// Rescales to (v,q) = -1 when possible, otherwise to a unit leading coefficient.
LorentzVec gauge_normalized(const LorentzVec& v, double tol = kDefaultTol);

/// Metric matrix J of R^{n+1,1} in the isotropic basis.
Eigen::MatrixXd metric(int n);

/// Stacks coordinate vectors as columns of an (n+2) x k matrix.
Eigen::MatrixXd as_columns(std::span<const LorentzVec> vs);

Eigen::MatrixXd gram_matrix(std::span<const LorentzVec> vs);

struct Signature {
  int rank = 0;
  int pos = 0;
  int neg = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Inertia of a symmetric matrix; |lambda| <= tol * max|lambda| counts as zero.
Signature signature_of(const Eigen::MatrixXd& gram, double tol = kDefaultTol);

Signature gram_signature(std::span<const LorentzVec> vs, double tol = kDefaultTol);

/// Eigenvalues of a symmetric matrix sorted by increasing magnitude.
Eigen::VectorXd eigenvalues_by_magnitude(const Eigen::MatrixXd& sym);

/// Non-degenerate linear subspace of R^{n+1,1}; a (k-1,1) subspace encodes a
/// (k-2)-sphere, so circles are (2,1) subspaces.
class SphereSubspace {
 public:
  /// Throws DependentInput when the Gram matrix has rank below basis length.
  explicit SphereSubspace(std::vector<LorentzVec> basis, double tol = kDefaultTol);

  const std::vector<LorentzVec>& basis() const { return basis_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  Signature signature() const { return signature_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  int ambient_dim() const { return basis_.front().dim(); }
  Eigen::MatrixXd basis_matrix() const { return as_columns(basis_); }

  /// Metric-orthogonal projection onto the subspace.
  LorentzVec project(const LorentzVec& v) const;

  /// Relative distance of v from the span (coordinate least squares).
  double containment_residual(const LorentzVec& v) const;
  bool contains(const LorentzVec& v, double tol = kDefaultTol) const {
    return containment_residual(v) <= tol;
  }

 private:
  std::vector<LorentzVec> basis_;
  Eigen::MatrixXd gram_;
  Signature signature_;
};

/// Metric complement of span(vs) in R^{n+1,1}. The empty set yields the full space.
SphereSubspace orthogonal_complement(std::span<const LorentzVec> vs, int n,
                                     double tol = kDefaultTol);

/// The two null lines of a (1,1) plane, gauge-normalized.
std::pair<LorentzVec, LorentzVec> null_directions_2d(const SphereSubspace& plane,
                                                     double tol = kDefaultTol);

}  // namespace ribaucour
