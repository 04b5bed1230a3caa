#include "ribaucour/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ribaucour {

namespace {

void require_points(const std::vector<Point>& points, std::size_t min_size) {
  if (points.size() < min_size) {
    throw GeometryError(ErrorKind::InvalidArgument,
                        "need at least " + std::to_string(min_size) + " points");
  }
  const auto n = points.front().size();
  require_supported_dim(static_cast<int>(n));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != n) {
      throw GeometryError(ErrorKind::DimensionMismatch, "point of wrong dimension", i);
    }
    if (!points[i].allFinite()) {
      throw GeometryError(ErrorKind::NonFinite, "non-finite point", i);
    }
  }
}

void require_same_shape(const DiscreteCurve& a, const DiscreteCurve& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "curves live in different dimensions");
  }
  if (a.size() != b.size()) {
    throw GeometryError(ErrorKind::LengthMismatch,
                        std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " points");
  }
}

// One step of the sphere transform along the edge (from, to).
Intersection sphere_step(const Point& from, const Point& to, const Point& hat_from,
                         const SphereVec& sphere, double tol) {
  return second_intersection(from, to, hat_from, sphere, tol);
}

template <typename Fn>
auto indexed(std::size_t index, Fn&& fn) {
  try {
    return fn();
  } catch (const GeometryError& e) {
    throw e.with_index(index);
  }
}

template <typename Fn>
auto staged(const std::string& stage, Fn&& fn) {
  try {
    return fn();
  } catch (const GeometryError& e) {
    throw e.with_stage(stage);
  }
}

}  // namespace

DiscreteCurve::DiscreteCurve(std::vector<Point> points, Unchecked) : points_(std::move(points)) {
  require_points(points_, 2);
}

DiscreteCurve::DiscreteCurve(std::vector<Point> points, double tol)
    : DiscreteCurve(std::move(points), Unchecked{}) {
  for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
    if (coincident(points_[k], points_[k + 1], tol)) {
      throw GeometryError(ErrorKind::CoincidentPoints, "consecutive points coincide", k);
    }
  }
}

DiscreteCurve DiscreteCurve::constructed(std::vector<Point> points) {
  return DiscreteCurve(std::move(points), Unchecked{});
}

CircularNet::CircularNet(std::size_t rows, std::size_t cols, std::vector<Point> points,
                         double tol)
    : rows_(rows), cols_(cols), points_(std::move(points)) {
  if (rows < 2 || cols < 2) {
    throw GeometryError(ErrorKind::InvalidArgument, "net needs at least 2x2 vertices");
  }
  if (points_.size() != rows * cols) {
    throw GeometryError(ErrorKind::LengthMismatch, "point count does not match the shape");
  }
  require_points(points_, 4);
  for (std::size_t i = 0; i + 1 < rows_; ++i) {
    for (std::size_t j = 0; j + 1 < cols_; ++j) {
      if (!concircular(at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1), tol)) {
        throw GeometryError(ErrorKind::NotCircularNet,
                            "quad (" + std::to_string(i) + "," + std::to_string(j) +
                                ") is not concircular",
                            i * cols_ + j);
      }
    }
  }
}

double CircularNet::quad_residual(std::size_t i, std::size_t j) const {
  return concircularity_residual(at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
}

PairReport pair_validate(const DiscreteCurve& x, const DiscreteCurve& y, double tol) {
  require_same_shape(x, y);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (coincident(x[k], y[k], tol)) {
      throw GeometryError(ErrorKind::CoincidentPoints, "corresponding points coincide", k);
    }
  }
  PairReport report;
  report.passed = true;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    const Point& a = x[k];
    const Point& b = x[k + 1];
    const Point& c = y[k + 1];
    const Point& d = y[k];
    const double residual = concircularity_residual(a, b, c, d);
    report.residuals.push_back(residual);
    report.max_residual = std::max(report.max_residual, residual);
    const bool ok = concircular(a, b, c, d, tol);
    report.passed = report.passed && ok;
    double cr = std::numeric_limits<double>::quiet_NaN();
    if (ok) {
      try {
        cr = edge_cross_ratio(a, b, c, d, tol);
      } catch (const GeometryError&) {
        // repeated point after a tangent step: cross ratio undefined
      }
    }
    report.cross_ratios.push_back(cr);
  }
  return report;
}

CurveTransform curve_transform_to_sphere(const DiscreteCurve& x, const SphereVec& sphere,
                                         const Point& initial, double tol) {
  if (sphere.dim() != x.ambient_dim() || initial.size() != x.ambient_dim()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "curve, sphere and initial point differ");
  }
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (point_on_sphere(x[k], sphere, tol)) {
      throw GeometryError(ErrorKind::CurveMeetsSphere, "curve vertex lies on the sphere", k);
    }
  }
  if (!point_on_sphere(initial, sphere, tol)) {
    throw GeometryError(ErrorKind::InitialNotOnSphere, "initial point is off the sphere");
  }
  std::vector<Point> hat{initial};
  hat.reserve(x.size());
  std::vector<std::size_t> tangent;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    const Intersection step =
        indexed(k, [&] { return sphere_step(x[k], x[k + 1], hat[k], sphere, tol); });
    if (step.tangent) tangent.push_back(k);
    hat.push_back(step.point);
  }
  return {DiscreteCurve::constructed(std::move(hat)), std::move(tangent)};
}

CurveTransform common_transform(const DiscreteCurve& a, const DiscreteCurve& b,
                                const SphereVec& sphere, const Point& initial, double tol) {
  require_same_shape(a, b);
  if (sphere.dim() != a.ambient_dim() || initial.size() != a.ambient_dim()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "curves, sphere and initial point differ");
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!point_on_sphere(a[k], sphere, tol) || !point_on_sphere(b[k], sphere, tol)) {
      throw GeometryError(ErrorKind::NotCospherical, "curve vertex is off the common sphere", k);
    }
  }
  if (!point_on_sphere(initial, sphere, tol)) {
    throw GeometryError(ErrorKind::InitialNotOnSphere, "initial point is off the sphere");
  }
  std::vector<Point> hat{initial};
  hat.reserve(a.size());
  std::vector<std::size_t> tangent;
  for (std::size_t k = 0; k + 1 < a.size(); ++k) {
    const Intersection step = indexed(k, [&] {
      const SphereSubspace ca = circle_through(a[k], a[k + 1], hat[k], tol);
      const SphereSubspace cb = circle_through(b[k], b[k + 1], hat[k], tol);
      return circle_circle_second(ca, cb, hat[k], tol);
    });
    if (step.tangent) tangent.push_back(k);
    hat.push_back(step.point);
  }
  return {DiscreteCurve::constructed(std::move(hat)), std::move(tangent)};
}

InterpolationChain interpolate_chain(const DiscreteCurve& x0, const DiscreteCurve& x1,
                                     const SphereVec& sphere,
                                     const std::array<Point, 3>& initials, double tol) {
  require_same_shape(x0, x1);
  CurveTransform x0_hat = staged("stage 1 (reduce x0)", [&] {
    return curve_transform_to_sphere(x0, sphere, initials[0], tol);
  });
  CurveTransform x1_hat = staged("stage 2 (reduce x1)", [&] {
    return curve_transform_to_sphere(x1, sphere, initials[2], tol);
  });
  CurveTransform common = staged("stage 3 (common transform)", [&] {
    return common_transform(x0_hat.curve, x1_hat.curve, sphere, initials[1], tol);
  });
  InterpolationChain chain{x0, std::move(x0_hat.curve), std::move(common.curve),
                           std::move(x1_hat.curve), x1, {}};
  const auto curves = chain.curves();
  for (std::size_t i = 0; i < chain.links.size(); ++i) {
    chain.links[i] = pair_validate(*curves[i], *curves[i + 1], tol);
  }
  return chain;
}

Point miguel_eighth(const CubeCorners& c, double tol) {
  struct Face {
    const Point *a, *b, *d, *e;
    const char* name;
  };
  const Face known[] = {{&c.v000, &c.v100, &c.v110, &c.v010, "z=0"},
                        {&c.v000, &c.v100, &c.v101, &c.v001, "y=0"},
                        {&c.v000, &c.v010, &c.v011, &c.v001, "x=0"}};
  for (const Face& f : known) {
    if (!concircular(*f.a, *f.b, *f.d, *f.e, tol)) {
      throw GeometryError(ErrorKind::InconsistentCube,
                          std::string("face ") + f.name + " is not concircular");
    }
  }
  const SphereSubspace face_x1 = circle_through(c.v100, c.v110, c.v101, tol);
  const SphereSubspace face_y1 = circle_through(c.v010, c.v110, c.v011, tol);
  Point v111 = circle_circle_second(face_x1, face_y1, c.v110, tol).point;
  if (!concircular(c.v001, c.v101, v111, c.v011, tol)) {
    throw GeometryError(ErrorKind::InconsistentCube,
                        "third face residual " +
                            std::to_string(concircularity_residual(c.v001, c.v101, v111, c.v011)));
  }
  return v111;
}

NetTransform net_transform_to_sphere(const CircularNet& x, const SphereVec& sphere,
                                     const Point& initial, double tol, double mismatch_tol) {
  if (sphere.dim() != x.ambient_dim() || initial.size() != x.ambient_dim()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "net, sphere and initial point differ");
  }
  const std::size_t rows = x.rows();
  const std::size_t cols = x.cols();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (point_on_sphere(x.at(i, j), sphere, tol)) {
        throw GeometryError(ErrorKind::NetMeetsSphere,
                            "vertex (" + std::to_string(i) + "," + std::to_string(j) +
                                ") lies on the sphere",
                            i * cols + j);
      }
    }
  }
  if (!point_on_sphere(initial, sphere, tol)) {
    throw GeometryError(ErrorKind::InitialNotOnSphere, "initial point is off the sphere");
  }
  const double scale = point_scale(x.points());

  std::vector<Point> hat(rows * cols);
  auto h = [&](std::size_t i, std::size_t j) -> Point& { return hat[i * cols + j]; };
  NetTransform out{x, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(cols)),
                   0.0, {}};
  auto step = [&](std::size_t i0, std::size_t j0, std::size_t i, std::size_t j) {
    return indexed(i * cols + j, [&] {
      return sphere_step(x.at(i0, j0), x.at(i, j), h(i0, j0), sphere, tol);
    });
  };
  auto record = [&](std::size_t i, std::size_t j, const Intersection& r) {
    if (r.tangent) out.tangent_vertices.emplace_back(i, j);
    h(i, j) = r.point;
  };

  h(0, 0) = initial;
  for (std::size_t j = 1; j < cols; ++j) record(0, j, step(0, j - 1, 0, j));
  for (std::size_t i = 1; i < rows; ++i) record(i, 0, step(i - 1, 0, i, 0));
  for (std::size_t i = 1; i < rows; ++i) {
    for (std::size_t j = 1; j < cols; ++j) {
      const Intersection along_row = step(i, j - 1, i, j);
      const Intersection along_col = step(i - 1, j, i, j);
      const double gap = (along_row.point - along_col.point).norm();
      out.route_mismatch(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = gap;
      out.max_mismatch = std::max(out.max_mismatch, gap);
      if (gap > mismatch_tol * scale) {
        throw GeometryError(ErrorKind::MiguelMismatch,
                            "routes to (" + std::to_string(i) + "," + std::to_string(j) +
                                ") differ by " + std::to_string(gap),
                            i * cols + j);
      }
      record(i, j, along_row);
    }
  }
  out.net = CircularNet(rows, cols, std::move(hat), tol);
  return out;
}

Eigen::MatrixXd cell_cosphericity(const CircularNet& x, const CircularNet& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw GeometryError(ErrorKind::LengthMismatch, "nets have different shapes");
  }
  Eigen::MatrixXd res(static_cast<Eigen::Index>(x.rows() - 1),
                      static_cast<Eigen::Index>(x.cols() - 1));
  for (std::size_t i = 0; i + 1 < x.rows(); ++i) {
    for (std::size_t j = 0; j + 1 < x.cols(); ++j) {
      const Point cell[] = {x.at(i, j), x.at(i + 1, j), x.at(i + 1, j + 1), x.at(i, j + 1),
                            y.at(i, j), y.at(i + 1, j), y.at(i + 1, j + 1), y.at(i, j + 1)};
      res(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          cosphericity_residual(cell, 2);
    }
  }
  return res;
}

Point default_square_aux(const Point& x0, const Point& y11) {
  const Point gap = x0 - y11;
  Eigen::Index axis = 0;
  gap.cwiseAbs().minCoeff(&axis);
  Point aux = 0.5 * (x0 + y11);
  aux(axis) += 0.5 * gap.norm();
  return aux;
}

InitialSquare initial_square(const Point& x0, const SphereVec& e1, const SphereVec& e2,
                             const Point& y11, const Point& aux, double tol) {
  if (std::abs(inner(e1.vec(), e2.vec())) > tol) {
    throw GeometryError(ErrorKind::InvalidArgument, "spheres e1 and e2 are not orthogonal");
  }
  if (!point_on_sphere(y11, e1, tol) || !point_on_sphere(y11, e2, tol)) {
    throw GeometryError(ErrorKind::InputNotIncident, "y11 is not on both e1 and e2");
  }
  const SphereSubspace circle = circle_through(x0, y11, aux, tol);
  const Point y10 = second_intersection(circle, e1, y11, tol).point;
  const Point y01 = second_intersection(circle, e2, y11, tol).point;
  return {x0, y10, y01, y11};
}

InitialSquare initial_square(const Point& x0, const SphereVec& e1, const SphereVec& e2,
                             const Point& y11, double tol) {
  return initial_square(x0, e1, e2, y11, default_square_aux(x0, y11), tol);
}

DoubleReduction double_reduction_curve(const DiscreteCurve& x, const SphereVec& e1,
                                       const SphereVec& e2, const InitialSquare& square,
                                       double tol, double order_tol) {
  if (!coincident(square.y00, x[0], tol)) {
    throw GeometryError(ErrorKind::InvalidArgument, "initial square does not start at x(0)");
  }
  if (std::abs(inner(e1.vec(), e2.vec())) > tol) {
    throw GeometryError(ErrorKind::InvalidArgument, "spheres e1 and e2 are not orthogonal");
  }
  CurveTransform ij = staged("route ij", [&] {
    const CurveTransform first = curve_transform_to_sphere(x, e1, square.y10, tol);
    return curve_transform_to_sphere(first.curve, e2, square.y11, tol);
  });
  CurveTransform ji = staged("route ji", [&] {
    const CurveTransform first = curve_transform_to_sphere(x, e2, square.y01, tol);
    return curve_transform_to_sphere(first.curve, e1, square.y11, tol);
  });
  double gap = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    gap = std::max(gap, (ij.curve[k] - ji.curve[k]).norm());
  }
  if (gap > order_tol * point_scale(x.points())) {
    throw GeometryError(ErrorKind::OrderMismatch,
                        "routes differ by " + std::to_string(gap));
  }
  return {std::move(ij.curve), std::move(ji.curve), gap};
}

}  // namespace ribaucour
