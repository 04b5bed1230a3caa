#include "ribaucour/channel.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "ribaucour/discrete.hpp"

namespace ribaucour {

namespace {

constexpr int kChannelDim = 3;

// Centred difference of the sphere family, second-order one-sided at the
// ends; only the direction matters, so the step length is dropped.
LorentzVec sphere_derivative(const std::vector<SphereVec>& s, std::size_t u) {
  const std::size_t n = s.size();
  if (n == 2) return s[1].vec() - s[0].vec();
  if (u == 0) return -3.0 * s[0].vec() + 4.0 * s[1].vec() - s[2].vec();
  if (u == n - 1) return 3.0 * s[n - 1].vec() - 4.0 * s[n - 2].vec() + s[n - 3].vec();
  return s[u + 1].vec() - s[u - 1].vec();
}

}  // namespace

SphereSubspace characteristic_circle(const SphereVec& s, const LorentzVec& s_prime, double tol) {
  if (s.dim() != s_prime.dim()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "sphere and derivative differ");
  }
  const std::vector<LorentzVec> pair{s.vec(), s_prime};
  const Signature sig = gram_signature(pair, tol);
  if (sig.rank < 2) {
    throw GeometryError(ErrorKind::DegenerateDerivative, "sphere family is locally constant");
  }
  if (sig.pos != 2) {
    throw GeometryError(ErrorKind::DegenerateSignature,
                        "span of the sphere and its derivative is not spacelike");
  }
  return orthogonal_complement(pair, s.dim(), tol);
}

QuadStrip channel_strip(const FramedCurve& x, const std::vector<Point>& xhat, int k_arc,
                        bool flip, double tol, double contact_tol) {
  if (x.ambient_dim() != kChannelDim) {
    throw GeometryError(ErrorKind::DimensionMismatch, "channel strips are built in R^3");
  }
  if (k_arc < 2) throw GeometryError(ErrorKind::InvalidArgument, "need at least two arc samples");
  const std::size_t n = x.size();
  if (xhat.size() != n) {
    throw GeometryError(ErrorKind::LengthMismatch, "partner curve has a different sample count");
  }
  const DiscreteCurve a = DiscreteCurve::constructed(x.samples());
  const DiscreteCurve b = DiscreteCurve::constructed(xhat);
  const PairReport report = pair_validate(a, b, tol);
  if (!report.passed) {
    const auto worst = std::max_element(report.residuals.begin(), report.residuals.end());
    throw GeometryError(ErrorKind::NonRibaucourInput,
                        "edge quad residual " + std::to_string(*worst),
                        static_cast<std::size_t>(worst - report.residuals.begin()));
  }

  QuadStrip strip;
  strip.column_spheres.reserve(n);
  for (std::size_t u = 0; u < n; ++u) {
    try {
      strip.column_spheres.push_back(
          enveloped_sphere(x.samples()[u], x.normals()[u], xhat[u], tol));
    } catch (const GeometryError& e) {
      throw e.with_index(u);
    }
  }

  const auto k = static_cast<std::size_t>(k_arc);
  strip.rows.assign(k, std::vector<Point>(n));
  strip.normals.assign(k, std::vector<Point>(n));
  // Defects are measured against the fastest change of the family: near a
  // stationary sphere the local derivative is itself of the size of the
  // discretization error, and a relative measure there would reject smooth pairs.
  std::vector<LorentzVec> raws;
  raws.reserve(n);
  double speed = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    raws.push_back(sphere_derivative(strip.column_spheres, u));
    speed = std::max(speed, raws.back().coord_norm());
  }
  for (std::size_t u = 0; u < n; ++u) {
    try {
      const SphereVec& s = strip.column_spheres[u];
      const LorentzVec xi = lift(x.samples()[u]);
      const LorentzVec xi_hat = lift(xhat[u]);
      // The difference quotient meets the contact conditions (s', xi) = (s', xi_hat) = 0
      // only up to discretization error; restore them so the circle passes
      // through both curve points.
      const SphereSubspace contact({s.vec(), xi, xi_hat}, tol);
      const LorentzVec& raw = raws[u];
      if (raw.coord_norm() <= tol * s.vec().coord_norm()) {
        throw GeometryError(ErrorKind::DegenerateDerivative, "sphere family is locally constant");
      }
      const LorentzVec fix = contact.project(raw);
      const double defect = speed > 0.0 ? fix.coord_norm() / speed : 0.0;
      strip.contact_defect = std::max(strip.contact_defect, defect);
      if (defect > contact_tol) {
        throw GeometryError(ErrorKind::NonRibaucourInput,
                            "spheres do not touch the partner curve (defect " +
                                std::to_string(defect) + ")");
      }
      const LorentzVec ds = raw - fix;
      if (ds.coord_norm() <= tol * speed) {
        throw GeometryError(ErrorKind::DegenerateDerivative, "sphere family is locally constant");
      }
      const SphereSubspace circle = characteristic_circle(s, ds / ds.coord_norm(), tol);
      const std::vector<Point> arc =
          sample_circle_arc(circle, x.samples()[u], xhat[u], k_arc, flip, tol);
      for (std::size_t r = 0; r < k; ++r) {
        strip.rows[r][u] = arc[r];
        const LorentzVec t = s.vec() - s.curvature() * lift(arc[r]);
        strip.normals[r][u] = t.euclid().normalized();
      }
    } catch (const GeometryError& e) {
      throw e.with_index(u);
    }
  }
  return strip;
}

Seminet smooth_seminet(const std::vector<std::vector<Point>>& curves, const Point& n0,
                       int k_arc, bool flip, double frame_tol, double tol,
                       double contact_tol) {
  if (curves.size() < 2) {
    throw GeometryError(ErrorKind::InvalidArgument, "need at least two curves");
  }
  Seminet net;
  FramedCurve framed = transport_normal(curves.front(), n0, frame_tol);
  net.tangent_residuals.push_back(framed.tangent_residual());
  for (std::size_t k = 0; k + 1 < curves.size(); ++k) {
    const std::string stage = "strip " + std::to_string(k);
    try {
      net.strips.push_back(channel_strip(framed, curves[k + 1], k_arc, flip, tol, contact_tol));
      // The spheres of this strip induce the normal field of the next curve.
      framed = FramedCurve(curves[k + 1], net.strips.back().normals.back(),
                           std::numeric_limits<double>::infinity(), tol);
    } catch (const GeometryError& e) {
      throw e.with_stage(stage);
    }
    net.tangent_residuals.push_back(framed.tangent_residual());
  }
  for (std::size_t k = 0; k + 1 < net.strips.size(); ++k) {
    const QuadStrip& below = net.strips[k];
    const QuadStrip& above = net.strips[k + 1];
    net.seams.push_back({below.normals.back(), above.normals.front(),
                         seam_continuity(below, above, tol)});
  }
  return net;
}

double seam_continuity(const QuadStrip& a, const QuadStrip& b, double tol) {
  const auto& top = a.rows.back();
  const auto& bottom = b.rows.front();
  if (top.size() != bottom.size()) {
    throw GeometryError(ErrorKind::BoundaryMismatch, "strips have different column counts");
  }
  double worst = 0.0;
  for (std::size_t u = 0; u < top.size(); ++u) {
    if (top[u].size() != bottom[u].size() || !coincident(top[u], bottom[u], tol)) {
      throw GeometryError(ErrorKind::BoundaryMismatch, "strips do not share this vertex", u);
    }
    worst = std::max(worst, line_angle(a.normals.back()[u], b.normals.front()[u]));
  }
  return worst;
}

}  // namespace ribaucour
