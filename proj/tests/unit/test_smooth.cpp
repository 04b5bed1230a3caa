#include <doctest.h>

#include "ribaucour/discrete.hpp"
#include "ribaucour/smooth.hpp"
#include "support/checks.hpp"
#include "support/generators.hpp"

using namespace ribaucour;
using namespace ribaucour::testing;

namespace {

Point p3(double x, double y, double z) { return Eigen::Vector3d(x, y, z); }

GeometryError error_of(auto&& fn) {
  try {
    fn();
  } catch (const GeometryError& e) {
    return e;
  }
  FAIL("expected a GeometryError");
  return GeometryError(ErrorKind::InvalidArgument, "");
}

ErrorKind kind_of(auto&& fn) { return error_of(fn).kind(); }

const SphereVec& unit_sphere() {
  static const SphereVec s = sphere_from_center_radius(p3(0, 0, 0), 1.0);
  return s;
}

std::vector<Point> circle_samples(double r, std::size_t count, double z = 0.0) {
  std::vector<Point> pts;
  for (std::size_t k = 0; k < count; ++k) {
    const double u = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    pts.push_back(p3(r * std::cos(u), r * std::sin(u), z));
  }
  return pts;
}

// One reduction written out from the sphere formula s = t + (1-(e,t))/(e,xi) xi,
// returning the touching point direction s - e.
LorentzVec drem(const LorentzVec& xi, const LorentzVec& t, const LorentzVec& e) {
  return t + ((1.0 - inner(e, t)) / inner(e, xi)) * xi - e;
}

// Reduction onto e_i, the j-th normal carried over to the transform, then
// reduction onto e_j.
LorentzVec iterated_reduction(const LorentzVec& xi, const LorentzVec& ti, const LorentzVec& tj,
                              const LorentzVec& ei, const LorentzVec& ej) {
  const LorentzVec xi_i = drem(xi, ti, ei);
  const LorentzVec tj_i = tj - (inner(xi_i, tj) / inner(xi, xi_i)) * xi;
  return drem(xi_i, tj_i, ej);
}

}  // namespace

TEST_CASE("tangents of circle samples are exact") {
  const std::vector<Point> pts = circle_samples(2.0, 12);
  const std::vector<Point> ts = discrete_tangents(pts);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Point exact = p3(-pts[k](1), pts[k](0), 0) / 2.0;
    CHECK(line_sine(ts[k], exact) < 1e-14);
    CHECK(std::abs(ts[k].norm() - 1.0) < 1e-14);
  }
  const std::vector<Point> two = discrete_tangents({p3(0, 0, 0), p3(0, 3, 0)});
  CHECK((two[0] - p3(0, 1, 0)).norm() < 1e-15);
  CHECK((two[1] - p3(0, 1, 0)).norm() < 1e-15);
  CHECK(kind_of([] { discrete_tangents({p3(0, 0, 0), p3(0, 0, 0)}); }) ==
        ErrorKind::CoincidentPoints);
}

TEST_CASE("framed curve validation") {
  const std::vector<Point> line{p3(0, 0, 0), p3(1, 0, 0), p3(2, 0, 0)};
  const std::vector<Point> up(3, p3(0, 0, 1));
  const FramedCurve fc(line, up);
  CHECK(fc.tangent_residual() == 0.0);
  CHECK(kind_of([&] { FramedCurve(line, std::vector<Point>(3, p3(0, 0, 2))); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { FramedCurve(line, std::vector<Point>(3, p3(0.6, 0, 0.8))); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { FramedCurve(line, std::vector<Point>(2, p3(0, 0, 1))); }) ==
        ErrorKind::LengthMismatch);
}

TEST_CASE("transport along a line and a circle") {
  std::vector<Point> line;
  for (int k = 0; k < 10; ++k) line.push_back(p3(0.5 * k, 0.25 * k, 0));
  const FramedCurve flat = transport_normal(line, p3(0, 0, 1));
  for (const Point& n : flat.normals()) CHECK((n - p3(0, 0, 1)).norm() < 1e-15);

  const std::vector<Point> circle = circle_samples(1.0, 16);
  const FramedCurve radial = transport_normal(circle, p3(1, 0, 0));
  for (std::size_t k = 0; k < circle.size(); ++k) {
    CHECK((radial.normals()[k] - circle[k]).norm() < 1e-13);
  }

  CHECK(kind_of([&] { transport_normal(circle, p3(0.6, 0.8, 0)); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { transport_normal({p3(0, 0, 0), p3(0, 0, 0)}, p3(0, 0, 1)); }) ==
        ErrorKind::CoincidentPoints);
}

TEST_CASE("transport converges at second order on a helix") {
  const std::size_t reference = 1u << 13;
  const std::vector<Point> fine = helix(reference + 1);
  const Point t0 = discrete_tangents(fine).front();
  const Point n0 = (p3(-1, 0, 0) - p3(-1, 0, 0).dot(t0) * t0).normalized();
  const Point ref_end = transport_normal(fine, n0).normals().back();

  std::vector<double> errs;
  for (std::size_t count : {64u, 128u, 256u}) {
    const std::vector<Point> pts = helix(count + 1);
    const Point t = discrete_tangents(pts).front();
    const Point n = (p3(-1, 0, 0) - p3(-1, 0, 0).dot(t) * t).normalized();
    errs.push_back((transport_normal(pts, n).normals().back() - ref_end).norm());
  }
  CHECK(errs[0] / errs[1] >= 3.5);
  CHECK(errs[1] / errs[2] >= 3.5);
}

TEST_CASE("transported frames stay orthonormal") {
  const std::vector<Point> pts = helix(200);
  const Point t0 = discrete_tangents(pts).front();
  const Point a = (p3(-1, 0, 0) - p3(-1, 0, 0).dot(t0) * t0).normalized();
  const Point b = Eigen::Vector3d(t0).cross(Eigen::Vector3d(a));
  const auto frame = transport_frame(pts, {a, b});
  REQUIRE(frame.size() == 2);
  const std::vector<Point> ts = discrete_tangents(pts);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    CHECK(std::abs(frame[0][k].dot(frame[1][k])) < 1e-12);
    CHECK(std::abs(frame[0][k].norm() - 1.0) < 1e-12);
    CHECK(std::abs(frame[0][k].dot(ts[k])) < 1e-4);
  }
  CHECK(parallel_residual(pts, frame[0]) < 1e-12);
  CHECK(kind_of([&] { transport_frame(pts, {a, Point((a + b).normalized())}); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("plane lift") {
  const LorentzVec t = plane_lift(p3(0, 0, 2), p3(0, 0, 1));
  CHECK(t.o_coeff() == 0.0);
  CHECK(t.euclid() == p3(0, 0, 1));
  CHECK(t.q_coeff() == 2.0);
  CHECK(inner(t, t) == 1.0);
  CHECK(inner(t, lift(p3(3, -1, 2))) == 0.0);
}

TEST_CASE("enveloped sphere") {
  // x = 2n, xhat = n: t = n + 2q, 1/r = -(xihat,t)/(xihat,xi) = -(-1)/(-1/2) = -2,
  // s = t - 2 xi = -2o - 3n - 2q.
  Rng rng(73);
  for (int i = 0; i < 10; ++i) {
    const Point n = unit_vector(rng, 3);
    const SphereVec s = enveloped_sphere(2.0 * n, n, n);
    const LorentzVec expected(-2.0, -3.0 * n, -2.0);
    CHECK((s.vec().coords() - expected.coords()).norm() < 1e-14);
    CHECK(inner(s.vec(), s.vec()) == doctest::Approx(1.0));
    CHECK(std::abs(inner(s.vec(), lift(2.0 * n))) < 1e-14);
    CHECK(std::abs(inner(s.vec(), lift(n))) < 1e-14);
  }

  const SphereVec plane = enveloped_sphere(p3(0, 0, 1), p3(0, 0, 1), p3(3, 4, 1));
  CHECK(plane.curvature() == doctest::Approx(0.0));
  CHECK((plane.vec().coords() - plane_lift(p3(0, 0, 1), p3(0, 0, 1)).coords()).norm() < 1e-14);

  CHECK(kind_of([] { enveloped_sphere(p3(1, 0, 0), p3(0, 0, 1), p3(1, 0, 0)); }) ==
        ErrorKind::CoincidentPoints);
}

TEST_CASE("induced normal") {
  const Point n = p3(0, 1, 0);
  const SphereVec s(LorentzVec(-2.0, -3.0 * n, -2.0));
  const LorentzVec t_hat = induced_normal(s, n);
  const LorentzVec expected = -(LorentzVec(0.0, n, 0.0) + LorentzVec::infinity(3));
  CHECK((t_hat.coords() - expected.coords()).norm() < 1e-14);
  CHECK(inner(t_hat, LorentzVec::infinity(3)) == 0.0);

  const SphereVec plane(plane_lift(p3(0, 0, 1), p3(0, 0, 1)));
  CHECK((induced_normal(plane, p3(5, 5, 1)).coords() - plane.vec().coords()).norm() < 1e-14);

  CHECK(kind_of([&] { induced_normal(s, p3(0, 0, 1)); }) == ErrorKind::InputNotIncident);
}

TEST_CASE("reduction of a radius-2 circle onto the unit sphere") {
  const std::vector<Point> pts = circle_samples(2.0, 64);
  std::vector<Point> radial;
  for (const Point& p : pts) radial.push_back(p / 2.0);
  const SmoothReduction r = reduce_smooth(FramedCurve(pts, radial), unit_sphere());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    CHECK((r.curve[k] - pts[k] / 2.0).norm() < 1e-14);
    CHECK(std::abs(inner(r.congruence.spheres[k].vec(), lift(pts[k]))) < 1e-13);
  }
  CHECK(r.pair_residual < 1e-14);
  CHECK((reduce_sample(pts[5], radial[5], unit_sphere()) - pts[5] / 2.0).norm() < 1e-14);
}

TEST_CASE("reduction of a straight line") {
  std::vector<Point> line;
  for (int k = 0; k <= 20; ++k) line.push_back(p3(-1.0 + 0.1 * k, 0, 0));
  const SphereVec e = sphere_from_center_radius(p3(0.3, -0.2, 6.0), 1.5);
  const SmoothReduction r = reduce_smooth(FramedCurve(line, std::vector<Point>(21, p3(0, 0, 1))), e);
  for (const Point& p : r.curve) CHECK(sphere_distance(p, e) < 1e-12);
  CHECK(r.pair_residual < 1e-12);
}

TEST_CASE("reduction errors") {
  const std::vector<Point> pts = circle_samples(2.0, 16);
  std::vector<Point> radial;
  for (const Point& p : pts) radial.push_back(p / 2.0);
  const GeometryError meets = error_of([&] {
    reduce_smooth(FramedCurve(pts, radial), sphere_from_center_radius(p3(2, 0, 1), 1.0));
  });
  CHECK(meets.kind() == ErrorKind::CurveMeetsSphere);
  CHECK(meets.index() == 0u);

  // Normals turning about the tangent are orthogonal but not parallel.
  std::vector<Point> twisted;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double a = 0.1 * static_cast<double>(k);
    twisted.push_back(std::cos(a) * p3(0, 0, 1) + std::sin(a) * radial[k]);
  }
  CHECK(kind_of([&] { reduce_smooth(FramedCurve(pts, twisted), unit_sphere()); }) ==
        ErrorKind::NonParallelFrame);
}

TEST_CASE("sampled reductions are Ribaucour pairs up to second order") {
  // Edge quad circularity of the sampled pair under refinement, and
  // parallelism of the normal field induced on the partner.
  const SphereVec e = sphere_from_center_radius(p3(0.5, 0.0, 6.0), 2.0);
  std::vector<double> pair, drift;
  for (std::size_t count : {64u, 128u, 256u}) {
    const std::vector<Point> pts = helix(count);
    const Point t0 = discrete_tangents(pts).front();
    const Point n0 = (p3(-1, 0, 0) - p3(-1, 0, 0).dot(t0) * t0).normalized();
    const FramedCurve fc = transport_normal(pts, n0);
    const SmoothReduction r = reduce_smooth(fc, e);
    pair.push_back(r.pair_residual);

    std::vector<Point> induced;
    for (std::size_t k = 0; k < count; ++k) {
      const SphereVec s = enveloped_sphere(pts[k], fc.normals()[k], r.curve[k]);
      induced.push_back(induced_normal(s, r.curve[k]).euclid().normalized());
    }
    drift.push_back(parallel_residual(r.curve, induced));
  }
  CHECK(pair[0] / pair[1] >= 3.5);
  CHECK(pair[1] / pair[2] >= 3.5);
  // With circle tangents the induced field is discretely parallel to rounding,
  // stronger than the O(h^2) the smooth statement suggests.
  for (double d : drift) CHECK(d < 1e-12);
}

TEST_CASE("permij is symmetric and agrees with bquad") {
  Rng rng(79);
  for (int i = 0; i < 300; ++i) {
    const PermCase c = perm_case(rng);
    const LorentzVec ij = permij_closed_form(c.xi, c.ti, c.tj, c.ei, c.ej);
    const LorentzVec ji = permij_closed_form(c.xi, c.tj, c.ti, c.ej, c.ei);
    CHECK(line_sine(ij.coords(), ji.coords()) <= 1e-10);
    CHECK(std::abs(inner(ij, ij)) <= 1e-10 * ij.coord_norm() * ij.coord_norm());
    CHECK(std::abs(inner(ij, c.ei.vec())) <= 1e-10 * ij.coord_norm());
    CHECK(std::abs(inner(ij, c.ej.vec())) <= 1e-10 * ij.coord_norm());

    const std::vector<LorentzVec> ts{c.ti, c.tj};
    const std::vector<SphereVec> es{c.ei, c.ej};
    const Eigen::VectorXd a = bquad_nullspace(c.xi, ts, es);
    CHECK(a(0) == 1.0);
    CHECK(line_sine(bquad_assemble(c.xi, ts, es, a).coords(), ij.coords()) <= 1e-8);

    const LorentzVec it = iterated_reduction(c.xi, c.ti, c.tj, c.ei.vec(), c.ej.vec());
    CHECK(line_sine(it.coords(), ij.coords()) <= 1e-8);
  }
}

TEST_CASE("permij with decoupled spheres") {
  // Spheres centred off the other normal: (e_i,t_j) = n_j.(m_i - x)/r_i = 0.
  // Then (xi_ij, e_i) = 0 gives a_i = a_0 (e_i,xi)/(1-(e_i,t_i)) and likewise
  // for j, so a_i/a_j = (1-(e_j,t_j))(e_i,xi) / ((1-(e_i,t_i))(e_j,xi)).
  Rng rng(83);
  int checked = 0;
  while (checked < 50) {
    const Point x = gaussian(rng, 3);
    const Point ni = unit_vector(rng, 3);
    const Point nj = unit_vector(rng, 3);
    const Point nj_perp = (nj - nj.dot(ni) * ni).normalized();
    const Point w = Eigen::Vector3d(ni).cross(Eigen::Vector3d(nj_perp));
    const Point mi = x + uniform(rng, -3, 3) * ni + uniform(rng, -3, 3) * w;
    const Point mj = x + uniform(rng, -3, 3) * nj_perp + uniform(rng, -3, 3) * w;
    const double ri = uniform(rng, 0.3, 2.0);
    const double rj2 = (mi - mj).squaredNorm() - ri * ri;
    if (rj2 < 0.09) continue;
    const SphereVec ei = sphere_from_center_radius(mi, ri);
    const SphereVec ej = sphere_from_center_radius(mj, std::sqrt(rj2));
    const LorentzVec xi = lift(x), ti = plane_lift(x, ni), tj = plane_lift(x, nj_perp);
    REQUIRE(std::abs(inner(ei.vec(), ej.vec())) < 1e-12);
    REQUIRE(std::abs(inner(ei.vec(), tj)) < 1e-12);
    REQUIRE(std::abs(inner(ej.vec(), ti)) < 1e-12);

    const Eigen::Vector3d a = permij_coefficients(xi, ti, tj, ei, ej);
    const double expected = (1 - inner(ej.vec(), tj)) * inner(ei.vec(), xi) /
                            ((1 - inner(ei.vec(), ti)) * inner(ej.vec(), xi));
    CHECK(a(2) == 1.0);
    CHECK(a(1) / a(2) == doctest::Approx(expected).epsilon(1e-10));
    const LorentzVec v = permij_closed_form(xi, ti, tj, ei, ej);
    CHECK(std::abs(inner(v, ei.vec())) < 1e-10 * v.coord_norm());
    CHECK(std::abs(inner(v, ej.vec())) < 1e-10 * v.coord_norm());
    ++checked;
  }
}

TEST_CASE("permij rejects a degenerate first reduction") {
  Rng rng(89);
  const PermCase c = perm_case(rng);
  CHECK(kind_of([&] { permij_closed_form(c.xi, c.ei.vec(), c.tj, c.ei, c.ej); }) ==
        ErrorKind::ZeroDenominator);
}

TEST_CASE("bquad with one sphere is the single reduction") {
  Rng rng(97);
  for (int i = 0; i < 50; ++i) {
    const PermCase c = perm_case(rng);
    const std::vector<LorentzVec> ts{c.ti};
    const std::vector<SphereVec> es{c.ei};
    const Eigen::VectorXd a = bquad_nullspace(c.xi, ts, es);
    REQUIRE(a.size() == 2);
    const double e_xi = inner(c.ei.vec(), c.xi);
    const double e_t = inner(c.ei.vec(), c.ti);
    CHECK(a(1) == doctest::Approx(e_xi / (1 - e_t)).epsilon(1e-10));
    const LorentzVec single = drem(c.xi, c.ti, c.ei.vec());
    CHECK(line_sine(bquad_assemble(c.xi, ts, es, a).coords(), single.coords()) < 1e-10);
  }
}

TEST_CASE("bquad rank deficiency") {
  // e = t and xi on e: the only equation vanishes.
  const Point x = p3(0.3, 0.2, 1.0);
  const LorentzVec t = plane_lift(x, p3(0, 0, 1));
  const std::vector<LorentzVec> ts{t};
  const std::vector<SphereVec> es{SphereVec(t)};
  CHECK(kind_of([&] { bquad_nullspace(lift(x), ts, es); }) == ErrorKind::RankDeficient);

  Rng rng(101);
  const PermCase c = perm_case(rng);
  const std::vector<LorentzVec> two{c.ti, c.tj};
  const std::vector<SphereVec> skew{c.ei, c.ei};
  CHECK(kind_of([&] { bquad_nullspace(c.xi, two, skew); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("smooth Ribaucour coordinates") {
  const std::vector<Point> pts = helix(120);
  const SphereVec e1 = plane_from_normal_offset(p3(1, 0, 0), -2.0);
  const SphereVec e2 = plane_from_normal_offset(p3(0, 1, 0), -3.0);
  const Point t0 = discrete_tangents(pts).front();
  const Point n1 = (p3(-1, 0, 0) - p3(-1, 0, 0).dot(t0) * t0).normalized();
  const Point n2 = Eigen::Vector3d(t0).cross(Eigen::Vector3d(n1));
  const std::vector<Point> out = coords_smooth(pts, n1, n2, e1, e2);
  REQUIRE(out.size() == pts.size());
  for (const Point& p : out) {
    CHECK(point_on_sphere(p, e1));
    CHECK(point_on_sphere(p, e2));
  }
  for (std::size_t k = 0; k + 3 < out.size(); k += 7) {
    CHECK(concircular(out[k], out[k + 1], out[k + 2], out[k + 3]));
  }

  const auto frame = transport_frame(pts, {n1, n2});
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const LorentzVec it = iterated_reduction(lift(pts[k]), plane_lift(pts[k], frame[0][k]),
                                             plane_lift(pts[k], frame[1][k]), e1.vec(), e2.vec());
    CHECK(line_sine(it.coords(), lift(out[k]).coords()) <= 1e-7);
  }
}

TEST_CASE("line angle") {
  CHECK(line_angle(p3(1, 0, 0), p3(-2, 0, 0)) == 0.0);
  CHECK(line_angle(p3(1, 0, 0), p3(0, 3, 0)) == doctest::Approx(std::numbers::pi / 2));
  CHECK(line_angle(p3(1, 0, 0), p3(1, 1, 0)) == doctest::Approx(std::numbers::pi / 4));
  CHECK(line_angle(p3(1, 0, 0), p3(1, 1e-12, 0)) == doctest::Approx(1e-12).epsilon(1e-6));
  CHECK(kind_of([] { line_angle(p3(0, 0, 0), p3(1, 0, 0)); }) == ErrorKind::InvalidArgument);
}
