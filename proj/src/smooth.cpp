#include "ribaucour/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ribaucour {

namespace {

void require_samples(const std::vector<Point>& samples) {
  if (samples.size() < 2) {
    throw GeometryError(ErrorKind::InvalidArgument, "need at least 2 samples");
  }
  const auto n = samples.front().size();
  require_supported_dim(static_cast<int>(n));
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (samples[k].size() != n) {
      throw GeometryError(ErrorKind::DimensionMismatch, "sample of wrong dimension", k);
    }
    if (!samples[k].allFinite()) {
      throw GeometryError(ErrorKind::NonFinite, "non-finite sample", k);
    }
  }
}

Point inverted(const Point& v, std::size_t k) {
  const double len2 = v.squaredNorm();
  if (len2 == 0.0) {
    throw GeometryError(ErrorKind::CoincidentPoints, "vanishing tangent: samples coincide", k);
  }
  return v / len2;
}

// Tangent at a of the circle through a, b, c, oriented towards b. Inversion
// at a maps the circle to the line through the images of b and c.
Point end_tangent(const Point& a, const Point& b, const Point& c, std::size_t k) {
  return inverted(b - a, k) - inverted(c - a, k);
}

Point unit(const Point& v, std::size_t k) {
  const double len = v.norm();
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw GeometryError(ErrorKind::CoincidentPoints, "vanishing tangent", k);
  }
  return v / len;
}

// Reflection pair mapping the edge direction and tangent at k onto those at k+1.
class StepMap {
 public:
  StepMap(const Point& edge, const Point& t_from, const Point& t_to) : v1_(edge) {
    c1_ = v1_.squaredNorm();
    v2_ = t_to - reflect1(t_from);
    c2_ = v2_.squaredNorm();
  }

  Point operator()(const Point& n) const {
    const Point r = reflect1(n);
    if (c2_ == 0.0) return r;
    return r - (2.0 / c2_) * v2_.dot(r) * v2_;
  }

 private:
  Point reflect1(const Point& n) const { return n - (2.0 / c1_) * v1_.dot(n) * v1_; }

  Point v1_;
  Point v2_;
  double c1_ = 0.0;
  double c2_ = 0.0;
};

void check_unit(const Point& n, std::size_t k, double tol) {
  if (!n.allFinite()) throw GeometryError(ErrorKind::NonFinite, "non-finite normal", k);
  if (std::abs(n.norm() - 1.0) > tol) {
    throw GeometryError(ErrorKind::InvalidArgument, "normal is not a unit vector", k);
  }
}

double o_scale(const LorentzVec& v) { return std::max(1.0, v.coord_norm()); }

}  // namespace

std::vector<Point> discrete_tangents(const std::vector<Point>& samples) {
  require_samples(samples);
  const std::size_t n = samples.size();
  std::vector<Point> t(n);
  if (n == 2) {
    t[0] = t[1] = unit(samples[1] - samples[0], 0);
    return t;
  }
  t[0] = unit(end_tangent(samples[0], samples[1], samples[2], 0), 0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const Point u = inverted(samples[k - 1] - samples[k], k);
    const Point w = inverted(samples[k + 1] - samples[k], k);
    t[k] = unit(w - u, k);
  }
  t[n - 1] = -unit(end_tangent(samples[n - 1], samples[n - 2], samples[n - 3], n - 1), n - 1);
  return t;
}

FramedCurve::FramedCurve(std::vector<Point> samples, std::vector<Point> normals,
                         double frame_tol, double tol)
    : samples_(std::move(samples)), normals_(std::move(normals)) {
  tangents_ = discrete_tangents(samples_);
  if (normals_.size() != samples_.size()) {
    throw GeometryError(ErrorKind::LengthMismatch, "one normal per sample required");
  }
  for (std::size_t k = 0; k < normals_.size(); ++k) {
    if (normals_[k].size() != samples_[k].size()) {
      throw GeometryError(ErrorKind::DimensionMismatch, "normal of wrong dimension", k);
    }
    check_unit(normals_[k], k, tol);
    const double off = std::abs(normals_[k].dot(tangents_[k]));
    tangent_residual_ = std::max(tangent_residual_, off);
    if (off > frame_tol) {
      throw GeometryError(ErrorKind::InvalidArgument, "normal is not orthogonal to the tangent",
                          k);
    }
  }
}

std::vector<std::vector<Point>> transport_frame(const std::vector<Point>& samples,
                                                const std::vector<Point>& n0,
                                                double frame_tol) {
  const std::vector<Point> t = discrete_tangents(samples);
  if (n0.empty()) throw GeometryError(ErrorKind::InvalidArgument, "no normals to transport");
  std::vector<std::vector<Point>> fields(n0.size());
  for (std::size_t a = 0; a < n0.size(); ++a) {
    if (n0[a].size() != samples.front().size()) {
      throw GeometryError(ErrorKind::DimensionMismatch, "initial normal of wrong dimension");
    }
    check_unit(n0[a], 0, kDefaultTol);
    if (std::abs(n0[a].dot(t[0])) > frame_tol) {
      throw GeometryError(ErrorKind::InvalidArgument,
                          "initial normal is not orthogonal to the tangent", 0);
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (std::abs(n0[a].dot(n0[b])) > frame_tol) {
        throw GeometryError(ErrorKind::InvalidArgument, "initial normals are not orthogonal");
      }
    }
    // Remove the admitted tangential component so the frame is exact from the start.
    fields[a].reserve(samples.size());
    fields[a].push_back(unit(n0[a] - n0[a].dot(t[0]) * t[0], 0));
  }
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const StepMap step(samples[k + 1] - samples[k], t[k], t[k + 1]);
    for (auto& field : fields) field.push_back(step(field.back()).normalized());
  }
  return fields;
}

FramedCurve transport_normal(const std::vector<Point>& samples, const Point& n0,
                             double frame_tol) {
  auto fields = transport_frame(samples, {n0}, frame_tol);
  return FramedCurve(samples, std::move(fields.front()), frame_tol);
}

double parallel_residual(const std::vector<Point>& samples, const std::vector<Point>& normals) {
  const std::vector<Point> t = discrete_tangents(samples);
  if (normals.size() != samples.size()) {
    throw GeometryError(ErrorKind::LengthMismatch, "one normal per sample required");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const StepMap step(samples[k + 1] - samples[k], t[k], t[k + 1]);
    worst = std::max(worst, (normals[k + 1] - step(normals[k])).norm());
  }
  return worst;
}

LorentzVec plane_lift(const Point& x, const Point& unit_normal) {
  return LorentzVec(0.0, unit_normal, unit_normal.dot(x));
}

SphereVec enveloped_sphere(const Point& x, const Point& normal, const Point& xhat, double tol) {
  check_unit(normal, 0, tol);
  if (coincident(x, xhat, tol)) {
    throw GeometryError(ErrorKind::CoincidentPoints, "touching point and partner coincide");
  }
  const LorentzVec xi = lift(x);
  const LorentzVec t = plane_lift(x, normal);
  const double curvature = (xhat - x).dot(normal) / (0.5 * (xhat - x).squaredNorm());
  // (xhat_lift, t) = n.(xhat - x) and (xhat_lift, xi) = -|xhat - x|^2 / 2.
  return SphereVec(t + curvature * xi, tol);
}

LorentzVec induced_normal(const SphereVec& s, const Point& xhat, double tol) {
  if (!point_on_sphere(xhat, s, tol)) {
    throw GeometryError(ErrorKind::InputNotIncident, "partner point is not on the sphere");
  }
  return s.vec() - s.curvature() * lift(xhat);
}

PointReduction reduce_point(const LorentzVec& xi, const LorentzVec& t, const SphereVec& e,
                            double tol) {
  const double ex = inner(e.vec(), xi);
  if (std::abs(ex) <= tol * o_scale(xi)) {
    throw GeometryError(ErrorKind::CurveMeetsSphere, "point lies on the target sphere");
  }
  const LorentzVec s = t + ((1.0 - inner(e.vec(), t)) / ex) * xi;
  return {SphereVec(s, tol), s - e.vec()};
}

Point reduce_sample(const Point& x, const Point& normal, const SphereVec& e, double tol) {
  check_unit(normal, 0, tol);
  return unlift(reduce_point(lift(x), plane_lift(x, normal), e, tol).xi_hat, tol);
}

SmoothReduction reduce_smooth(const FramedCurve& fc, const SphereVec& e, double frame_tol,
                              double tol) {
  if (e.dim() != fc.ambient_dim()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "sphere and curve dimensions differ");
  }
  const double drift = parallel_residual(fc.samples(), fc.normals());
  if (drift > frame_tol) {
    throw GeometryError(ErrorKind::NonParallelFrame,
                        "transport residual " + std::to_string(drift));
  }
  SmoothReduction out;
  out.curve.reserve(fc.size());
  out.congruence.spheres.reserve(fc.size());
  for (std::size_t k = 0; k < fc.size(); ++k) {
    const Point& x = fc.samples()[k];
    try {
      if (point_on_sphere(x, e, tol)) {
        throw GeometryError(ErrorKind::CurveMeetsSphere, "sample lies on the target sphere");
      }
      const PointReduction r = reduce_point(lift(x), plane_lift(x, fc.normals()[k]), e, tol);
      out.curve.push_back(unlift(r.xi_hat, tol));
      out.congruence.spheres.push_back(r.sphere);
    } catch (const GeometryError& err) {
      throw err.with_index(k);
    }
  }
  for (std::size_t k = 0; k + 1 < fc.size(); ++k) {
    out.pair_residual =
        std::max(out.pair_residual, concircularity_residual(fc.samples()[k], fc.samples()[k + 1],
                                                            out.curve[k + 1], out.curve[k]));
  }
  return out;
}

Eigen::Vector3d permij_coefficients(const LorentzVec& xi, const LorentzVec& ti,
                                    const LorentzVec& tj, const SphereVec& ei,
                                    const SphereVec& ej, double tol) {
  const double ai = inner(ei.vec(), ti);
  const double aj = inner(ej.vec(), tj);
  const double cij = inner(ei.vec(), tj);
  const double cji = inner(ej.vec(), ti);
  const double pi = inner(ei.vec(), xi);
  const double pj = inner(ej.vec(), xi);
  const double dij = (1.0 - ai) * pj + cji * pi;
  const double dji = (1.0 - aj) * pi + cij * pj;
  // Scale by the inputs, not by the terms: 1 - a_i itself may be what vanishes.
  const double size_ij = (1.0 + std::abs(ai)) * std::abs(pj) + std::abs(cji * pi);
  const double size_ji = (1.0 + std::abs(aj)) * std::abs(pi) + std::abs(cij * pj);
  if (std::abs(dij) <= tol * size_ij || size_ij == 0.0) {
    throw GeometryError(ErrorKind::ZeroDenominator, "denominator of the i-j form vanishes");
  }
  if (std::abs(dji) <= tol * size_ji || size_ji == 0.0) {
    throw GeometryError(ErrorKind::ZeroDenominator, "denominator of the j-i form vanishes");
  }
  return {((1.0 - ai) * (1.0 - aj) - cij * cji) / dij, dji / dij, 1.0};
}

LorentzVec permij_closed_form(const LorentzVec& xi, const LorentzVec& ti, const LorentzVec& tj,
                              const SphereVec& ei, const SphereVec& ej, double tol) {
  const Eigen::Vector3d a = permij_coefficients(xi, ti, tj, ei, ej, tol);
  return a(0) * xi + a(1) * (ti - ei.vec()) + a(2) * (tj - ej.vec());
}

Eigen::VectorXd bquad_nullspace(const LorentzVec& xi, const std::vector<LorentzVec>& ts,
                                const std::vector<SphereVec>& es, double tol) {
  const std::size_t k = es.size();
  if (k == 0 || ts.size() != k) {
    throw GeometryError(ErrorKind::LengthMismatch, "need one plane lift per sphere");
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(inner(es[i].vec(), es[j].vec())) > tol) {
        throw GeometryError(ErrorKind::InvalidArgument, "target spheres are not orthogonal");
      }
    }
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k + 1));
  for (std::size_t i = 0; i < k; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    m(r, 0) = inner(es[i].vec(), xi);
    for (std::size_t j = 0; j < k; ++j) {
      m(r, static_cast<Eigen::Index>(j + 1)) = inner(es[i].vec(), ts[j]) - (i == j ? 1.0 : 0.0);
    }
    const double len = m.row(r).norm();
    if (len == 0.0) throw GeometryError(ErrorKind::RankDeficient, "vanishing equation", i);
    m.row(r) /= len;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv(static_cast<Eigen::Index>(k) - 1) <= tol * sv(0)) {
    throw GeometryError(ErrorKind::RankDeficient, "equations are dependent");
  }
  Eigen::VectorXd a = svd.matrixV().col(static_cast<Eigen::Index>(k));
  if (std::abs(a(0)) > tol * a.norm()) return a / a(0);
  a.normalize();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i)) > tol) {
      if (a(i) < 0) a = -a;
      break;
    }
  }
  return a;
}

LorentzVec bquad_assemble(const LorentzVec& xi, const std::vector<LorentzVec>& ts,
                          const std::vector<SphereVec>& es, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != static_cast<Eigen::Index>(ts.size() + 1) || ts.size() != es.size()) {
    throw GeometryError(ErrorKind::LengthMismatch, "coefficient count does not match");
  }
  LorentzVec out = coeffs(0) * xi;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out = out + coeffs(static_cast<Eigen::Index>(i + 1)) * (ts[i] - es[i].vec());
  }
  return out;
}

std::vector<Point> coords_smooth(const std::vector<Point>& samples, const Point& n1_0,
                                 const Point& n2_0, const SphereVec& e1, const SphereVec& e2,
                                 double frame_tol, double tol) {
  require_samples(samples);
  if (e1.dim() != samples.front().size() || e2.dim() != samples.front().size()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "spheres and curve dimensions differ");
  }
  if (std::abs(inner(e1.vec(), e2.vec())) > tol) {
    throw GeometryError(ErrorKind::InvalidArgument, "spheres e1 and e2 are not orthogonal");
  }
  const auto fields = transport_frame(samples, {n1_0, n2_0}, frame_tol);
  const std::vector<SphereVec> es{e1, e2};
  std::vector<Point> out;
  out.reserve(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Point& x = samples[k];
    try {
      for (const SphereVec& e : es) {
        if (point_on_sphere(x, e, tol)) {
          throw GeometryError(ErrorKind::CurveMeetsSphere, "sample lies on a target sphere");
        }
      }
      const LorentzVec xi = lift(x);
      const std::vector<LorentzVec> ts{plane_lift(x, fields[0][k]), plane_lift(x, fields[1][k])};
      const Eigen::VectorXd a = bquad_nullspace(xi, ts, es, tol);
      out.push_back(unlift(bquad_assemble(xi, ts, es, a), tol));
    } catch (const GeometryError& err) {
      throw err.with_index(k);
    }
  }
  return out;
}

double line_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    throw GeometryError(ErrorKind::InvalidArgument, "angle with the zero vector");
  }
  Eigen::VectorXd u = a / na;
  Eigen::VectorXd v = b / nb;
  if (u.dot(v) < 0) v = -v;
  return 2.0 * std::atan2((u - v).norm(), (u + v).norm());
}

}  // namespace ribaucour
