#include "ribaucour/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace ribaucour {

namespace {

void require_same_dim(const Point& a, const Point& b) {
  if (a.size() != b.size()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "points of different dimension");
  }
}

void require_distinct(std::span<const Point> points, double tol) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      require_same_dim(points[i], points[j]);
      if (coincident(points[i], points[j], tol)) {
        throw GeometryError(ErrorKind::CoincidentPoints,
                            "points " + std::to_string(i) + " and " + std::to_string(j) +
                                " coincide");
      }
    }
  }
}

// Given a 2-plane W (columns of `w`) that contains the null vector k = lift(known),
// returns the second null line of W.
Intersection other_null_point(const Eigen::MatrixXd& w, const Point& known, double tol) {
  const LorentzVec k = lift(known);
  const LorentzVec w0 = LorentzVec::from_coords(w.col(0));
  const LorentzVec w1 = LorentzVec::from_coords(w.col(1));
  const std::vector<LorentzVec> plane{w0, w1};
  const Signature sig = signature_of(gram_matrix(plane), tol);
  if (sig.pos == 2 || sig.neg == 2) {
    throw GeometryError(ErrorKind::NoIntersection, "intersection carries no real points");
  }
  const double r0 = std::abs(inner(w0, k)) / w0.coord_norm();
  const double r1 = std::abs(inner(w1, k)) / w1.coord_norm();
  const LorentzVec& w_far = r0 >= r1 ? w0 : w1;
  const double wk = inner(w_far, k);
  if (wk == 0.0) return {known, true};
  const LorentzVec v = w_far - (inner(w_far, w_far) / (2.0 * wk)) * k;
  Point p = unlift(v, tol);
  const Point pts[] = {known, p};
  if ((p - known).norm() <= tol * point_scale(pts)) return {known, true};
  return {std::move(p), false};
}

// Orthonormal (Euclidean) basis of the coordinate span of a subspace.
Eigen::MatrixXd coordinate_frame(const SphereSubspace& s) {
  const Eigen::MatrixXd b = s.basis_matrix();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
  return qr.householderQ() * Eigen::MatrixXd::Identity(b.rows(), b.cols());
}

void require_circle(const SphereSubspace& c) {
  if (c.dim() != 3 || c.signature() != Signature{3, 2, 1}) {
    throw GeometryError(ErrorKind::DegenerateSignature, "subspace is not a (2,1) circle");
  }
}

}  // namespace

SphereVec::SphereVec(LorentzVec v, double tol) : v_(std::move(v)) {
  const double scale = std::max(1.0, v_.coord_norm() * v_.coord_norm());
  if (std::abs(inner(v_, v_) - 1.0) > tol * scale) {
    throw GeometryError(ErrorKind::InvalidArgument, "sphere vector is not unit spacelike");
  }
}

SphereVec SphereVec::normalized(const LorentzVec& v, double tol) {
  const double norm2 = inner(v, v);
  if (norm2 <= tol * v.coord_norm() * v.coord_norm()) {
    throw GeometryError(ErrorKind::InvalidArgument, "vector is not spacelike");
  }
  return SphereVec(v / std::sqrt(norm2), tol);
}

SphereVec sphere_from_center_radius(const Point& center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw GeometryError(ErrorKind::InvalidArgument, "radius must be positive and finite");
  }
  const double q = 0.5 * (center.squaredNorm() - radius * radius);
  return SphereVec(LorentzVec(1.0 / radius, center / radius, q / radius));
}

SphereVec plane_from_normal_offset(const Point& unit_normal, double offset, double tol) {
  if (std::abs(unit_normal.norm() - 1.0) > tol) {
    throw GeometryError(ErrorKind::InvalidArgument, "plane normal is not a unit vector");
  }
  return SphereVec(LorentzVec(0.0, unit_normal, offset), tol);
}

DecodedHypersphere decode_sphere(const SphereVec& s, double tol) {
  const LorentzVec& v = s.vec();
  const double o = v.o_coeff();
  if (std::abs(o) <= tol * v.coord_norm()) {
    return DecodedPlane{v.euclid(), v.q_coeff()};
  }
  return DecodedSphere{v.euclid() / o, 1.0 / std::abs(o), o > 0 ? 1 : -1};
}

double point_scale(std::span<const Point> points) {
  double scale = 1.0;
  for (const Point& p : points) scale = std::max(scale, p.norm());
  return scale;
}

bool coincident(const Point& a, const Point& b, double tol) {
  require_same_dim(a, b);
  const Point pts[] = {a, b};
  return (a - b).norm() <= tol * point_scale(pts);
}

double incidence_residual(const LorentzVec& s, const Point& p) {
  const LorentzVec xi = lift(p);
  return std::abs(inner(s, xi)) / (s.coord_norm() * xi.coord_norm());
}

bool point_on_sphere(const Point& p, const SphereVec& s, double tol) {
  return incidence_residual(s.vec(), p) <= tol;
}

Eigen::MatrixXd point_gram(std::span<const Point> points) {
  const auto k = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      require_same_dim(points[i], points[j]);
      g(i, j) = g(j, i) = -0.5 * (points[i] - points[j]).squaredNorm();
    }
  }
  return g;
}

SphereSubspace circle_through(const Point& p1, const Point& p2, const Point& p3, double tol) {
  const Point pts[] = {p1, p2, p3};
  require_distinct(pts, tol);
  return SphereSubspace({lift(p1), lift(p2), lift(p3)}, tol);
}

double concircularity_residual(const Point& p1, const Point& p2, const Point& p3,
                               const Point& p4) {
  const Point pts[] = {p1, p2, p3, p4};
  const Eigen::VectorXd ev = eigenvalues_by_magnitude(point_gram(pts));
  const double largest = std::abs(ev(3));
  return largest == 0.0 ? 0.0 : std::abs(ev(0)) / largest;
}

bool concircular(const Point& p1, const Point& p2, const Point& p3, const Point& p4,
                 double tol) {
  const Point pts[] = {p1, p2, p3, p4};
  const Signature sig = signature_of(point_gram(pts), tol);
  if (sig.rank < 3) return true;
  return sig.rank == 3 && sig.pos == 2 && sig.neg == 1;
}

double cosphericity_residual(std::span<const Point> points, int d) {
  const auto keep = static_cast<Eigen::Index>(d + 2);
  const auto k = static_cast<Eigen::Index>(points.size());
  if (k <= keep) return 0.0;
  const Eigen::VectorXd ev = eigenvalues_by_magnitude(point_gram(points));
  const double largest = std::abs(ev(k - 1));
  return largest == 0.0 ? 0.0 : std::abs(ev(k - keep - 1)) / largest;
}

bool cospherical(std::span<const Point> points, int d, double tol) {
  if (d < 0) throw GeometryError(ErrorKind::InvalidArgument, "negative sphere dimension");
  if (points.empty()) return true;
  const Signature sig = signature_of(point_gram(points), tol);
  if (sig.rank < d + 2) return true;
  return sig.rank == d + 2 && sig.pos == d + 1 && sig.neg == 1;
}

Intersection second_intersection(const SphereSubspace& circle, const SphereVec& s,
                                 const Point& known, double tol) {
  require_circle(circle);
  if (known.size() != circle.ambient_dim() || s.dim() != circle.ambient_dim()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "circle, sphere and point dimensions differ");
  }
  if (!circle.contains(lift(known), tol) || !point_on_sphere(known, s, tol)) {
    throw GeometryError(ErrorKind::InputNotIncident, "known point is not on circle and sphere");
  }
  const Eigen::MatrixXd frame = coordinate_frame(circle);
  const Eigen::RowVectorXd row =
      s.vec().coords().transpose() * metric(circle.ambient_dim()) * frame;
  if (row.norm() <= tol * s.vec().coord_norm()) {
    throw GeometryError(ErrorKind::CircleOnSphere, "circle lies on the sphere");
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(row, Eigen::ComputeFullV);
  const Eigen::MatrixXd w = frame * svd.matrixV().rightCols(2);
  return other_null_point(w, known, tol);
}

Intersection second_intersection(const Point& p1, const Point& p2, const Point& known,
                                 const SphereVec& s, double tol) {
  const Point pts[] = {p1, p2, known};
  require_distinct(pts, tol);
  if (s.dim() != known.size()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "circle, sphere and point dimensions differ");
  }
  if (!point_on_sphere(known, s, tol)) {
    throw GeometryError(ErrorKind::InputNotIncident, "known point is not on circle and sphere");
  }
  // x = known + y/|y|^2 takes (s, lift(x)) = 0 to (w, y) = o_s/2.
  const auto invert = [&](const Point& x) -> Point { return (x - known) / (x - known).squaredNorm(); };
  const LorentzVec& v = s.vec();
  const Point w = v.euclid() - v.o_coeff() * known;
  const Point a = invert(p1);
  const Point d = invert(p2) - a;
  const double num = 0.5 * v.o_coeff() - w.dot(a);
  const double den = w.dot(d);
  const double scale = point_scale(pts);
  if (std::abs(den) <= tol * w.norm() * d.norm()) {
    if (std::abs(num) <= tol * (w.norm() * a.norm() + std::abs(v.o_coeff()))) {
      throw GeometryError(ErrorKind::CircleOnSphere, "circle lies on the sphere");
    }
    return {known, true};
  }
  const Point y = a + (num / den) * d;
  const double y_norm = y.norm();
  if (y_norm * scale <= tol) {
    throw GeometryError(ErrorKind::PointAtInfinity, "second intersection is at infinity");
  }
  if (1.0 <= tol * scale * y_norm) return {known, true};
  return {known + y / (y_norm * y_norm), false};
}

Intersection circle_circle_second(const SphereSubspace& a, const SphereSubspace& b,
                                  const Point& common, double tol) {
  require_circle(a);
  require_circle(b);
  if (a.ambient_dim() != b.ambient_dim() || common.size() != a.ambient_dim()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "circle dimensions differ");
  }
  const LorentzVec k = lift(common);
  if (!a.contains(k, tol) || !b.contains(k, tol)) {
    throw GeometryError(ErrorKind::InputNotIncident, "common point is not on both circles");
  }
  const Eigen::MatrixXd qa = coordinate_frame(a);
  const Eigen::MatrixXd qb = coordinate_frame(b);
  Eigen::MatrixXd stacked(qa.rows(), 6);
  stacked << qa, qb;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  // A (n+2) x 6 matrix has min(n+2, 6) singular values; missing ones are zero.
  int null_dim = 6 - static_cast<int>(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= tol * sv(0)) ++null_dim;
  }
  if (null_dim >= 3) {
    throw GeometryError(ErrorKind::AmbiguousIdenticalCircles, "circles coincide");
  }
  if (null_dim < 2) {
    throw GeometryError(ErrorKind::NotCospherical, "circles do not lie on a common 2-sphere");
  }
  const Eigen::MatrixXd null_vectors = svd.matrixV().rightCols(2);
  const Eigen::MatrixXd w = qa * null_vectors.topRows(3);
  return other_null_point(w, common, tol);
}

double edge_cross_ratio(const Point& p1, const Point& p2, const Point& p3, const Point& p4,
                        double tol) {
  const Point pts[] = {p1, p2, p3, p4};
  require_distinct(pts, tol);
  if (!concircular(p1, p2, p3, p4, tol)) {
    throw GeometryError(ErrorKind::NotConcircular, "cross ratio of non-concircular points");
  }
  // |cr| from |(xi_i, xi_j)| = |x_i - x_j|^2 / 2.
  const Eigen::MatrixXd g = point_gram(pts);
  const double magnitude = std::sqrt(std::abs(g(0, 1) * g(2, 3)) / std::abs(g(1, 2) * g(3, 0)));

  // Sign from the planar cross ratio in the plane of the circle.
  const Point u = (p2 - p1).normalized();
  Point v = Point::Zero(p1.size());
  double best = 0.0;
  for (const Point* p : {&p3, &p4}) {
    const Point d = *p - p1;
    const Point perp = d - d.dot(u) * u;
    if (perp.norm() > best) {
      best = perp.norm();
      v = perp / perp.norm();
    }
  }
  if (best <= tol * point_scale(pts)) v.setZero();  // collinear: a line through infinity
  auto planar = [&](const Point& p) {
    const Point d = p - p1;
    return std::complex<double>(d.dot(u), d.dot(v));
  };
  const std::complex<double> z1 = planar(p1), z2 = planar(p2), z3 = planar(p3), z4 = planar(p4);
  const std::complex<double> cr = (z1 - z2) / (z2 - z3) * (z3 - z4) / (z4 - z1);
  return cr.real() < 0 ? -magnitude : magnitude;
}

std::vector<Point> sample_circle_arc(const SphereSubspace& circle, const Point& from,
                                     const Point& to, int k, bool flip, double tol) {
  require_circle(circle);
  if (k < 2) throw GeometryError(ErrorKind::InvalidArgument, "need at least two arc samples");
  if (coincident(from, to, tol)) {
    throw GeometryError(ErrorKind::CoincidentPoints, "arc endpoints coincide");
  }
  if (!circle.contains(lift(from), tol) || !circle.contains(lift(to), tol)) {
    throw GeometryError(ErrorKind::InputNotIncident, "arc endpoints are not on the circle");
  }
  const int n = circle.ambient_dim();

  // Timelike unit f0 in the circle. For a genuine circle the projection of q
  // is timelike and yields the Euclidean angle parameter; for a line (q in the
  // circle) a vector centred at the chord midpoint keeps the arc finite.
  LorentzVec f0 = circle.project(LorentzVec::infinity(n));
  const double f0_norm2 = inner(f0, f0);
  if (f0_norm2 < -tol * f0.coord_norm() * f0.coord_norm()) {
    f0 = f0 / std::sqrt(-f0_norm2);
  } else {
    const double chord = (from - to).norm();
    const LorentzVec centred =
        circle.project(lift(0.5 * (from + to)) + 0.5 * chord * chord * LorentzVec::infinity(n));
    f0 = centred / std::sqrt(-inner(centred, centred));
  }
  // Lifts must have a positive f0 component for the angle chart below.
  if (inner(lift(from), f0) > 0) f0 = -f0;

  // Orthonormal spacelike pair spanning the complement of f0 inside the circle.
  std::vector<LorentzVec> rest;
  for (const LorentzVec& b : circle.basis()) rest.push_back(b + inner(b, f0) * f0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram_matrix(rest));
  const Eigen::MatrixXd r = as_columns(rest);
  const LorentzVec f1 = LorentzVec::from_coords(r * solver.eigenvectors().col(2) /
                                                std::sqrt(solver.eigenvalues()(2)));
  const LorentzVec f2 = LorentzVec::from_coords(r * solver.eigenvectors().col(1) /
                                                std::sqrt(solver.eigenvalues()(1)));

  auto angle = [&](const Point& p) {
    const LorentzVec xi = lift(p);
    return std::atan2(inner(xi, f2), inner(xi, f1));
  };
  constexpr double kTurn = 2.0 * std::numbers::pi;
  double span = std::fmod(angle(to) - angle(from), kTurn);
  if (span < 0) span += kTurn;
  if (span > std::numbers::pi * (1.0 + 1e-12)) span -= kTurn;
  if (flip) span += span > 0 ? -kTurn : kTurn;

  const double start = angle(from);
  std::vector<Point> arc;
  arc.reserve(static_cast<std::size_t>(k));
  arc.push_back(from);
  for (int j = 1; j + 1 < k; ++j) {
    const double theta = start + span * static_cast<double>(j) / static_cast<double>(k - 1);
    arc.push_back(unlift(f0 + std::cos(theta) * f1 + std::sin(theta) * f2, tol));
  }
  arc.push_back(to);
  return arc;
}

}  // namespace ribaucour
