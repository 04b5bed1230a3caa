#include "ribaucour/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ribaucour {

namespace {

void require_finite(const Eigen::VectorXd& c) {
  if (!c.allFinite()) {
    throw GeometryError(ErrorKind::NonFinite, "non-finite coordinate");
  }
}

void require_same_dim(const LorentzVec& v, const LorentzVec& w) {
  if (v.dim() != w.dim()) {
    throw GeometryError(ErrorKind::DimensionMismatch,
                        "R^{" + std::to_string(v.dim() + 1) + ",1} vs R^{" +
                            std::to_string(w.dim() + 1) + ",1}");
  }
}

}  // namespace

LorentzVec::LorentzVec(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  require_supported_dim(dim());
  require_finite(coords_);
}

LorentzVec::LorentzVec(double o_coeff, const Point& euclid, double q_coeff)
    : coords_(euclid.size() + 2) {
  coords_(0) = o_coeff;
  coords_.segment(1, euclid.size()) = euclid;
  coords_(euclid.size() + 1) = q_coeff;
  require_supported_dim(dim());
  require_finite(coords_);
}

LorentzVec LorentzVec::from_coords(Eigen::VectorXd coords) {
  return LorentzVec(std::move(coords));
}

LorentzVec LorentzVec::origin(int n) { return LorentzVec(1.0, Point::Zero(n), 0.0); }

LorentzVec LorentzVec::infinity(int n) { return LorentzVec(0.0, Point::Zero(n), 1.0); }

LorentzVec LorentzVec::basis(int n, int i) {
  if (i < 1 || i > n) {
    throw GeometryError(ErrorKind::InvalidArgument, "basis index out of range");
  }
  Point e = Point::Zero(n);
  e(i - 1) = 1.0;
  return LorentzVec(0.0, e, 0.0);
}

LorentzVec operator+(const LorentzVec& a, const LorentzVec& b) {
  require_same_dim(a, b);
  return LorentzVec(a.coords_ + b.coords_);
}

LorentzVec operator-(const LorentzVec& a, const LorentzVec& b) {
  require_same_dim(a, b);
  return LorentzVec(a.coords_ - b.coords_);
}

LorentzVec operator*(double s, const LorentzVec& v) { return LorentzVec(s * v.coords_); }

void require_supported_dim(int n) {
  if (n < kMinAmbientDim || n > kMaxAmbientDim) {
    throw GeometryError(ErrorKind::DimensionMismatch,
                        "ambient dimension " + std::to_string(n) + " outside [" +
                            std::to_string(kMinAmbientDim) + ", " +
                            std::to_string(kMaxAmbientDim) + "]");
  }
}

double inner(const LorentzVec& v, const LorentzVec& w) {
  require_same_dim(v, w);
  return v.euclid().dot(w.euclid()) - v.o_coeff() * w.q_coeff() -
         v.q_coeff() * w.o_coeff();
}

LorentzVec lift(const Point& x) { return LorentzVec(1.0, x, 0.5 * x.squaredNorm()); }

Point unlift(const LorentzVec& v, double tol) {
  const double scale = v.coord_norm();
  if (std::abs(v.o_coeff()) <= tol * scale) {
    throw GeometryError(ErrorKind::PointAtInfinity, "null direction of q has no Euclidean point");
  }
  if (std::abs(inner(v, v)) > tol * scale * scale) {
    throw GeometryError(ErrorKind::NotIsotropic, "vector off the light cone");
  }
  // (v,q) = -o_coeff, so rescaling by 1/o_coeff fixes the gauge (v,q) = -1.
  return v.euclid() / v.o_coeff();
}

LorentzVec gauge_normalized(const LorentzVec& v, double tol) {
  const double scale = v.coord_norm();
  if (std::abs(v.o_coeff()) > tol * scale) return v / v.o_coeff();
  const Eigen::VectorXd& c = v.coords();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (std::abs(c(i)) > tol * scale) return v / c(i);
  }
  throw GeometryError(ErrorKind::InvalidArgument, "cannot normalize the zero vector");
}

Eigen::MatrixXd metric(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Identity(n + 2, n + 2);
  j(0, 0) = 0.0;
  j(n + 1, n + 1) = 0.0;
  j(0, n + 1) = -1.0;
  j(n + 1, 0) = -1.0;
  return j;
}

Eigen::MatrixXd as_columns(std::span<const LorentzVec> vs) {
  if (vs.empty()) return {};
  const int n = vs.front().dim();
  Eigen::MatrixXd a(n + 2, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i].dim() != n) {
      throw GeometryError(ErrorKind::DimensionMismatch, "mixed dimensions in vector list");
    }
    a.col(static_cast<Eigen::Index>(i)) = vs[i].coords();
  }
  return a;
}

Eigen::MatrixXd gram_matrix(std::span<const LorentzVec> vs) {
  if (vs.empty()) return {};
  const Eigen::MatrixXd a = as_columns(vs);
  return a.transpose() * metric(vs.front().dim()) * a;
}

Eigen::VectorXd eigenvalues_by_magnitude(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = solver.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(),
            [](double a, double b) { return std::abs(a) < std::abs(b); });
  return ev;
}

Signature signature_of(const Eigen::MatrixXd& gram, double tol) {
  Signature sig;
  if (gram.size() == 0) return sig;
  const Eigen::VectorXd ev = eigenvalues_by_magnitude(gram);
  const double largest = std::abs(ev(ev.size() - 1));
  if (largest == 0.0) return sig;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= tol * largest) continue;
    ++sig.rank;
    (ev(i) > 0 ? sig.pos : sig.neg) += 1;
  }
  return sig;
}

Signature gram_signature(std::span<const LorentzVec> vs, double tol) {
  if (vs.empty()) {
    throw GeometryError(ErrorKind::InvalidArgument, "signature of an empty list");
  }
  return signature_of(gram_matrix(vs), tol);
}

SphereSubspace::SphereSubspace(std::vector<LorentzVec> basis, double tol)
    : basis_(std::move(basis)) {
  if (basis_.empty()) {
    throw GeometryError(ErrorKind::InvalidArgument, "empty subspace basis");
  }
  gram_ = gram_matrix(basis_);
  signature_ = signature_of(gram_, tol);
  if (signature_.rank != dim()) {
    throw GeometryError(ErrorKind::DependentInput,
                        "Gram rank " + std::to_string(signature_.rank) + " below basis length " +
                            std::to_string(dim()));
  }
}

LorentzVec SphereSubspace::project(const LorentzVec& v) const {
  const Eigen::MatrixXd b = basis_matrix();
  const Eigen::VectorXd rhs = b.transpose() * metric(ambient_dim()) * v.coords();
  const Eigen::VectorXd c = gram_.fullPivLu().solve(rhs);  // indefinite: no LDLT
  return LorentzVec::from_coords(b * c);
}

double SphereSubspace::containment_residual(const LorentzVec& v) const {
  const Eigen::MatrixXd b = basis_matrix();
  const double scale = v.coord_norm();
  if (scale == 0.0) return 0.0;
  const Eigen::VectorXd c = b.colPivHouseholderQr().solve(v.coords());
  return (b * c - v.coords()).norm() / scale;
}

SphereSubspace orthogonal_complement(std::span<const LorentzVec> vs, int n, double tol) {
  require_supported_dim(n);
  const int full = n + 2;
  if (vs.empty()) {
    std::vector<LorentzVec> all;
    all.reserve(full);
    for (int i = 0; i < full; ++i) {
      all.push_back(LorentzVec::from_coords(Eigen::VectorXd::Unit(full, i)));
    }
    return SphereSubspace(std::move(all), tol);
  }
  Eigen::MatrixXd a = as_columns(vs);
  if (a.rows() != full) {
    throw GeometryError(ErrorKind::DimensionMismatch, "vectors do not live in R^{n+1,1}");
  }
  const int k = static_cast<int>(a.cols());
  Eigen::MatrixXd normalized = a;
  for (int i = 0; i < k; ++i) normalized.col(i).normalize();
  if (k > full) {
    throw GeometryError(ErrorKind::DependentInput, "more vectors than dimensions");
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> independence(normalized);
  const Eigen::VectorXd sv = independence.singularValues();
  if (sv(k - 1) <= tol * sv(0)) {
    throw GeometryError(ErrorKind::DependentInput, "spanning set is linearly dependent");
  }
  if (k == full) {
    throw GeometryError(ErrorKind::InvalidArgument, "complement of the full space is trivial");
  }
  const Eigen::MatrixXd constraints = normalized.transpose() * metric(n);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraints, Eigen::ComputeFullV);
  const Eigen::MatrixXd kernel = svd.matrixV().rightCols(full - k);
  std::vector<LorentzVec> basis;
  basis.reserve(full - k);
  for (int i = 0; i < full - k; ++i) basis.push_back(LorentzVec::from_coords(kernel.col(i)));
  try {
    return SphereSubspace(std::move(basis), tol);
  } catch (const GeometryError&) {
    throw GeometryError(ErrorKind::DegenerateSignature,
                        "complement of a degenerate subspace is degenerate");
  }
}

std::pair<LorentzVec, LorentzVec> null_directions_2d(const SphereSubspace& plane, double tol) {
  if (plane.dim() != 2 || plane.signature() != Signature{2, 1, 1}) {
    throw GeometryError(ErrorKind::DegenerateSignature, "plane is not of signature (1,1)");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(plane.gram());
  const Eigen::Vector2d ev = solver.eigenvalues();  // ascending: ev(0) < 0 < ev(1)
  const Eigen::Vector2d u_neg = solver.eigenvectors().col(0);
  const Eigen::Vector2d u_pos = solver.eigenvectors().col(1);
  const Eigen::Vector2d c_plus = std::sqrt(-ev(0)) * u_pos + std::sqrt(ev(1)) * u_neg;
  const Eigen::Vector2d c_minus = std::sqrt(-ev(0)) * u_pos - std::sqrt(ev(1)) * u_neg;
  const Eigen::MatrixXd b = plane.basis_matrix();
  return {gauge_normalized(LorentzVec::from_coords(b * c_plus), tol),
          gauge_normalized(LorentzVec::from_coords(b * c_minus), tol)};
}

}  // namespace ribaucour
