#include "ribaucour/cli.hpp"

#include <array>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "ribaucour/channel.hpp"
#include "ribaucour/discrete.hpp"
#include "ribaucour/io.hpp"
#include "ribaucour/smooth.hpp"

namespace ribaucour::cli {

namespace {

using io::Json;
using io::SchemaError;

Json curve_json(const std::vector<Point>& points) {
  return io::to_json(io::CurveFile{static_cast<int>(points.front().size()), points, {}});
}

Json net_json(const CircularNet& net) {
  return io::to_json(io::NetFile{net.ambient_dim(), net.rows(), net.cols(), net.points()});
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json pair_json(const PairReport& r) {
  return Json{{"kind", "pair_report"},
              {"residuals", r.residuals},
              {"cross_ratios", r.cross_ratios},
              {"max_residual", r.max_residual},
              {"passed", r.passed}};
}

Json error_json(const GeometryError& e) {
  Json j{{"kind", "error"},
         {"error", std::string(to_string(e.kind()))},
         {"detail", e.detail()},
         {"index", nullptr},
         {"stage", e.stage()}};
  if (e.index()) j["index"] = *e.index();
  return j;
}

class Job {
 public:
  Job(const JobConfig& c, std::ostream& out) : c_(c), out_(out), rng_(c.seed) {}

  int dispatch() {
    if (c_.command == "transform") return transform();
    if (c_.command == "interpolate") return interpolate();
    if (c_.command == "coords") return coords();
    if (c_.command == "channel") return channel();
    if (c_.command == "validate") return validate();
    if (c_.command == "reduce-net") return reduce_net();
    throw SchemaError("unknown command \"" + c_.command + "\"");
  }

 private:
  const std::string& required(const std::string& value, const char* flag) const {
    if (value.empty()) throw SchemaError(std::string("missing ") + flag);
    return value;
  }

  io::Artifact input(const std::string& path, const char* flag) const {
    return io::parse_artifact(io::read_json_file(required(path, flag)));
  }

  static const io::CurveFile& as_curve(const io::Artifact& a, const char* flag) {
    if (const auto* c = std::get_if<io::CurveFile>(&a)) return *c;
    throw SchemaError(std::string(flag) + ": expected a curve file");
  }

  SphereVec sphere(const std::string& spec, const char* flag) const {
    return io::parse_sphere(io::json_argument(required(spec, flag)), c_.tol);
  }

  Point unit_gaussian(int n) {
    std::normal_distribution<double> normal;
    Point g(n);
    do {
      for (int i = 0; i < n; ++i) g(i) = normal(rng_);
    } while (g.norm() < 1e-6);
    return g.normalized();
  }

  Point random_on(const SphereVec& e) {
    const auto decoded = decode_sphere(e, c_.tol);
    if (const auto* s = std::get_if<DecodedSphere>(&decoded)) {
      return s->center + s->radius * unit_gaussian(e.dim());
    }
    const auto& p = std::get<DecodedPlane>(decoded);
    Point g = unit_gaussian(e.dim());
    g -= g.dot(p.normal) * p.normal;
    return p.offset * p.normal + g;
  }

  // Uniformly random angle on the circle: lifts are f0 + cos(a) f1 + sin(a) f2.
  Point random_on(const SphereSubspace& circle) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(circle.gram());
    const Eigen::MatrixXd b = circle.basis_matrix() * solver.eigenvectors();
    const Eigen::VectorXd ev = solver.eigenvalues();
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.141592653589793);
    for (int attempt = 0; attempt < 16; ++attempt) {
      const double a = angle(rng_);
      const Eigen::VectorXd v = b.col(0) / std::sqrt(-ev(0)) +
                                std::cos(a) * b.col(1) / std::sqrt(ev(1)) +
                                std::sin(a) * b.col(2) / std::sqrt(ev(2));
      try {
        return unlift(LorentzVec::from_coords(v), c_.tol);
      } catch (const GeometryError&) {
        // hit the point at infinity of a line; draw again
      }
    }
    throw GeometryError(ErrorKind::PointAtInfinity, "no finite point drawn on the circle");
  }

  Point initial_or_random(std::size_t i, const SphereVec& e, int dim) {
    if (i < c_.initials.size()) return checked_point(c_.initials[i], dim, "--initial");
    return random_on(e);
  }

  static Point checked_point(const std::string& text, int dim, const char* flag) {
    Point p = io::parse_point(text);
    if (p.size() != dim) {
      throw SchemaError(std::string(flag) + ": expected " + std::to_string(dim) + " coordinates");
    }
    return p;
  }

  void emit(const std::string& path, const std::string& content) {
    if (path.empty()) {
      out_ << content;
    } else {
      io::write_atomic(path, content);
    }
  }

  void emit_report(const Json& report) {
    if (!c_.report.empty()) io::write_atomic(c_.report, io::dump(report));
  }

  int transform() {
    const io::Artifact art = input(c_.input, "--input");
    const SphereVec e = sphere(c_.sphere, "--sphere");
    if (const auto* net_file = std::get_if<io::NetFile>(&art)) {
      return transform_net(*net_file, e, false);
    }
    const auto& curve = std::get<io::CurveFile>(art);
    if (curve.normals) {
      const FramedCurve fc(curve.points, *curve.normals, kFrameTol, c_.tol);
      const SmoothReduction r = reduce_smooth(fc, e, kFrameTol, c_.tol);
      std::vector<Point> normals;
      normals.reserve(r.curve.size());
      for (std::size_t k = 0; k < r.curve.size(); ++k) {
        normals.push_back(induced_normal(r.congruence.spheres[k], r.curve[k], c_.tol)
                              .euclid()
                              .normalized());
      }
      emit(c_.output, io::dump(io::to_json(io::CurveFile{curve.ambient_dim, r.curve, normals})));
      emit_report({{"kind", "smooth_transform_report"}, {"pair_residual", r.pair_residual}});
      return kExitOk;
    }
    const DiscreteCurve x(curve.points, c_.tol);
    const Point start = initial_or_random(0, e, x.ambient_dim());
    const CurveTransform t = curve_transform_to_sphere(x, e, start, c_.tol);
    emit(c_.output, io::dump(curve_json(t.curve.points())));
    Json report = pair_json(pair_validate(x, t.curve, c_.tol));
    report["kind"] = "transform_report";
    report["tangent_steps"] = t.tangent_steps;
    emit_report(report);
    return kExitOk;
  }

  int transform_net(const io::NetFile& file, const SphereVec& e, bool full_report) {
    const CircularNet x(file.rows, file.cols, file.points, c_.tol);
    const Point start = initial_or_random(0, e, x.ambient_dim());
    const NetTransform t = net_transform_to_sphere(x, e, start, c_.tol);
    emit(c_.output, io::dump(net_json(t.net)));
    Json report{{"kind", "net_transform_report"},
                {"max_mismatch", t.max_mismatch},
                {"tangent_vertices", t.tangent_vertices}};
    if (full_report) {
      report["route_mismatch"] = matrix_json(t.route_mismatch);
      report["cell_residuals"] = matrix_json(cell_cosphericity(x, t.net));
    }
    emit_report(report);
    return kExitOk;
  }

  int reduce_net() {
    const io::Artifact art = input(c_.input, "--input");
    const auto* file = std::get_if<io::NetFile>(&art);
    if (file == nullptr) throw SchemaError("--input: expected a net file");
    return transform_net(*file, sphere(c_.sphere, "--sphere"), true);
  }

  int interpolate() {
    const DiscreteCurve x0(as_curve(input(c_.input, "--input"), "--input").points, c_.tol);
    const DiscreteCurve x1(as_curve(input(c_.input2, "--input2"), "--input2").points, c_.tol);
    const SphereVec e = sphere(c_.sphere, "--sphere");
    if (c_.initials.size() > 3) throw SchemaError("--initial given more than three times");
    std::array<Point, 3> initials;
    for (std::size_t i = 0; i < 3; ++i) initials[i] = initial_or_random(i, e, x0.ambient_dim());
    const InterpolationChain chain = interpolate_chain(x0, x1, e, initials, c_.tol);
    Json curves = Json::array();
    for (const DiscreteCurve* c : chain.curves()) curves.push_back(curve_json(c->points()));
    emit(c_.output, io::dump(Json{{"kind", "chain"},
                                  {"ambient_dim", x0.ambient_dim()},
                                  {"curves", curves}}));
    Json links = Json::array();
    for (const PairReport& r : chain.links) links.push_back(pair_json(r));
    emit_report({{"kind", "chain_report"}, {"links", links}});
    return kExitOk;
  }

  int coords() {
    const io::Artifact art = input(c_.input, "--input");
    const io::CurveFile& curve = as_curve(art, "--input");
    const SphereVec e1 = sphere(c_.sphere, "--sphere");
    const SphereVec e2 = sphere(c_.sphere2, "--sphere2");
    if (c_.order != "ij" && c_.order != "ji" && c_.order != "both") {
      throw SchemaError("--order must be ij, ji or both");
    }
    if (curve.normals) {
      if (curve.ambient_dim != 3) {
        throw SchemaError("smooth coordinates need a framed curve in R^3");
      }
      // The second normal completes the frame at the first sample.
      const Point n1 = curve.normals->front();
      const Point t0 = discrete_tangents(curve.points).front();
      const Eigen::Vector3d n2 = Eigen::Vector3d(t0).cross(Eigen::Vector3d(n1)).normalized();
      const std::vector<Point> result =
          coords_smooth(curve.points, n1, Point(n2), e1, e2, kFrameTol, c_.tol);
      emit(c_.output, io::dump(curve_json(result)));
      return kExitOk;
    }
    const DiscreteCurve x(curve.points, c_.tol);
    Point y11;
    if (!c_.initials.empty()) {
      y11 = checked_point(c_.initials.front(), x.ambient_dim(), "--initial");
    } else {
      const std::vector<LorentzVec> pair{e1.vec(), e2.vec()};
      y11 = random_on(orthogonal_complement(pair, x.ambient_dim(), c_.tol));
    }
    const Point aux = c_.aux.empty() ? default_square_aux(x[0], y11)
                                     : checked_point(c_.aux, x.ambient_dim(), "--aux");
    const InitialSquare square = initial_square(x[0], e1, e2, y11, aux, c_.tol);
    const DoubleReduction d = double_reduction_curve(x, e1, e2, square, c_.tol);
    if (c_.order == "ij") {
      emit(c_.output, io::dump(curve_json(d.route_ij.points())));
    } else if (c_.order == "ji") {
      emit(c_.output, io::dump(curve_json(d.route_ji.points())));
    } else {
      emit(c_.output, io::dump(Json{{"kind", "coords"},
                                    {"ambient_dim", x.ambient_dim()},
                                    {"order_check", d.order_check},
                                    {"route_ij", curve_json(d.route_ij.points())},
                                    {"route_ji", curve_json(d.route_ji.points())}}));
    }
    emit_report({{"kind", "coords_report"}, {"order_check", d.order_check}});
    return kExitOk;
  }

  int channel() {
    const io::Artifact art = input(c_.input, "--input");
    const auto* file = std::get_if<io::NetFile>(&art);
    if (file == nullptr) throw SchemaError("--input: expected a net file whose rows are curves");
    if (file->ambient_dim != 3) throw SchemaError("channel strips need curves in R^3");
    if (c_.arc_samples < 2) throw SchemaError("--arc-samples must be at least 2");
    std::vector<std::vector<Point>> curves(file->rows);
    for (std::size_t i = 0; i < file->rows; ++i) {
      curves[i].assign(file->points.begin() + static_cast<std::ptrdiff_t>(i * file->cols),
                       file->points.begin() + static_cast<std::ptrdiff_t>((i + 1) * file->cols));
    }
    Point n0;
    if (!c_.normal.empty()) {
      n0 = checked_point(c_.normal, 3, "--normal");
    } else {
      const Point t0 = discrete_tangents(curves.front()).front();
      Point g = unit_gaussian(3);
      while ((g - g.dot(t0) * t0).norm() < 1e-3) g = unit_gaussian(3);
      n0 = (g - g.dot(t0) * t0).normalized();
    }
    const Seminet net = smooth_seminet(curves, n0, c_.arc_samples, c_.flip, kFrameTol, c_.tol);
    std::ostringstream obj;
    io::write_obj(obj, net.strips);
    emit(c_.output, obj.str());
    Json seams = Json::array();
    for (const Seam& s : net.seams) seams.push_back(s.max_angle);
    emit_report({{"kind", "channel_report"},
                 {"seam_angles", seams},
                 {"tangent_residuals", net.tangent_residuals}});
    return kExitOk;
  }

  int validate() {
    const io::Artifact first = input(c_.input, "--input");
    Json report;
    bool passed = false;
    if (c_.input2.empty()) {
      const auto* file = std::get_if<io::NetFile>(&first);
      if (file == nullptr) throw SchemaError("validate: a single input must be a net");
      Eigen::MatrixXd res(static_cast<Eigen::Index>(file->rows - 1),
                          static_cast<Eigen::Index>(file->cols - 1));
      passed = true;
      auto at = [&](std::size_t i, std::size_t j) -> const Point& {
        return file->points[i * file->cols + j];
      };
      for (std::size_t i = 0; i + 1 < file->rows; ++i) {
        for (std::size_t j = 0; j + 1 < file->cols; ++j) {
          const auto r = static_cast<Eigen::Index>(i);
          const auto s = static_cast<Eigen::Index>(j);
          res(r, s) = concircularity_residual(at(i, j), at(i + 1, j), at(i + 1, j + 1),
                                              at(i, j + 1));
          passed = passed &&
                   concircular(at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1), c_.tol);
        }
      }
      report = Json{{"kind", "net_report"},
                    {"quad_residuals", matrix_json(res)},
                    {"max_residual", res.size() ? res.maxCoeff() : 0.0},
                    {"passed", passed}};
    } else {
      const io::Artifact second = input(c_.input2, "--input2");
      if (first.index() != second.index()) {
        throw SchemaError("validate: inputs must both be curves or both nets");
      }
      if (const auto* ca = std::get_if<io::CurveFile>(&first)) {
        const auto& b = std::get<io::CurveFile>(second);
        const PairReport r = pair_validate(DiscreteCurve::constructed(ca->points),
                                           DiscreteCurve::constructed(b.points), c_.tol);
        passed = r.passed;
        report = pair_json(r);
      } else {
        const auto& na = std::get<io::NetFile>(first);
        const auto& nb = std::get<io::NetFile>(second);
        const CircularNet x(na.rows, na.cols, na.points, c_.tol);
        const CircularNet y(nb.rows, nb.cols, nb.points, c_.tol);
        const Eigen::MatrixXd cells = cell_cosphericity(x, y);
        passed = cells.maxCoeff() <= c_.tol;
        report = Json{{"kind", "net_pair_report"},
                      {"cell_residuals", matrix_json(cells)},
                      {"max_residual", cells.maxCoeff()},
                      {"passed", passed}};
      }
    }
    const std::string content = io::dump(report);
    emit(c_.report.empty() ? c_.output : c_.report, content);
    return passed ? kExitOk : kExitGeometry;
  }

  const JobConfig& c_;
  std::ostream& out_;
  std::mt19937_64 rng_;
};

}  // namespace

int run(const JobConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (!(config.tol > 0) || !std::isfinite(config.tol)) {
      throw SchemaError("--tol must be a positive number");
    }
    Job job(config, out);
    return job.dispatch();
  } catch (const GeometryError& e) {
    const std::string report = io::dump(error_json(e));
    err << report;
    if (!config.report.empty()) {
      try {
        io::write_atomic(config.report, report);
      } catch (const SchemaError&) {
        // the error itself is already on stderr
      }
    }
    return kExitGeometry;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ribaucour transforms of curves and circular nets"};
  app.require_subcommand(1);
  JobConfig config;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--input", config.input, "input curve or net (JSON)");
    sub->add_option("--output", config.output, "output path (stdout if omitted)");
    sub->add_option("--report", config.report, "JSON report path");
    sub->add_option("--tol", config.tol, "relative tolerance")->capture_default_str();
    sub->add_option("--seed", config.seed, "seed for default initial points")
        ->capture_default_str();
  };
  auto with_sphere = [&](CLI::App* sub) {
    sub->add_option("--sphere", config.sphere, "target sphere spec: inline JSON or file");
  };
  auto with_initial = [&](CLI::App* sub) {
    sub->add_option("--initial", config.initials, "initial point x,y,z")
        ->allow_extra_args(false);
  };

  CLI::App* transform = app.add_subcommand("transform", "Ribaucour transform onto a sphere");
  common(transform);
  with_sphere(transform);
  with_initial(transform);

  CLI::App* interpolate =
      app.add_subcommand("interpolate", "chain of Ribaucour pairs between two curves");
  common(interpolate);
  with_sphere(interpolate);
  with_initial(interpolate);
  interpolate->add_option("--input2", config.input2, "second curve");

  CLI::App* coords = app.add_subcommand("coords", "discrete Ribaucour coordinates");
  common(coords);
  with_sphere(coords);
  with_initial(coords);
  coords->add_option("--sphere2", config.sphere2, "second, orthogonal sphere");
  coords->add_option("--aux", config.aux, "third point of the initial square's circle");
  coords->add_option("--order", config.order, "ij, ji or both")->capture_default_str();

  CLI::App* channel = app.add_subcommand("channel", "channel surface strips as OBJ");
  common(channel);
  channel->add_option("--normal", config.normal, "initial unit normal x,y,z");
  channel->add_option("--arc-samples", config.arc_samples, "points per characteristic arc")
      ->capture_default_str();
  channel->add_flag("--flip", config.flip, "use the complementary arcs");

  CLI::App* validate = app.add_subcommand("validate", "pair or net circularity report");
  common(validate);
  validate->add_option("--input2", config.input2, "partner curve or net");

  CLI::App* reduce_net = app.add_subcommand("reduce-net", "net transform with full report");
  common(reduce_net);
  with_sphere(reduce_net);
  with_initial(reduce_net);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitIo;
  }
  config.command = app.get_subcommands().front()->get_name();
  return run(config, out, err);
}

}  // namespace ribaucour::cli
