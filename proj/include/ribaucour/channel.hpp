#pragma once

// Channel surface strips spanned by Ribaucour pairs of sampled space curves,
// and their assembly into C^1 surfaces along semi-discrete nets.

#include <cstddef>
#include <vector>

#include "ribaucour/smooth.hpp"

namespace ribaucour {

/// Largest relative size of the contact correction applied to the sphere
/// derivative before a strip is rejected. Sampled smooth Ribaucour pairs give
/// O(h^2) here; a zigzagging discrete transform gives O(1).
inline constexpr double kContactTol = 0.1;

/// The circle <s, s'>^perp along which the sphere s touches its envelope.
SphereSubspace characteristic_circle(const SphereVec& s, const LorentzVec& s_prime,
                                     double tol = kDefaultTol);

/// k_arc x k_u grid; row 0 is the framed curve, the last row its partner.
struct QuadStrip {
  std::vector<std::vector<Point>> rows;
  std::vector<SphereVec> column_spheres;
  std::vector<std::vector<Point>> normals;  // unit surface normals, same shape as rows
  double contact_defect = 0.0;  // largest contact correction of the sphere derivative, relative to its largest size

  std::size_t arc_count() const { return rows.size(); }
  std::size_t column_count() const { return rows.front().size(); }
};

/// Strip of the channel surface enveloping the spheres that touch x and pass
/// through xhat. Requires R^3 and a discrete Ribaucour pair (x, xhat) that
/// samples a smooth one: the spheres must nearly touch xhat as well.
QuadStrip channel_strip(const FramedCurve& x, const std::vector<Point>& xhat, int k_arc,
                        bool flip = false, double tol = kDefaultTol,
                        double contact_tol = kContactTol);

struct Seam {
  std::vector<Point> below;  // normals of the strip ending on the shared curve
  std::vector<Point> above;  // normals of the strip starting on it
  double max_angle = 0.0;
};

struct Seminet {
  std::vector<QuadStrip> strips;
  std::vector<Seam> seams;
  std::vector<double> tangent_residuals;  // frame residual of each curve's normal field
};

/// Strips between consecutive curves; each curve after the first carries the
/// normal field induced by the previous strip's spheres. Errors are tagged
/// with the stage "strip k".
Seminet smooth_seminet(const std::vector<std::vector<Point>>& curves, const Point& n0,
                       int k_arc, bool flip = false, double frame_tol = kFrameTol,
                       double tol = kDefaultTol, double contact_tol = kContactTol);

/// Largest angle between the tangent planes of two strips along their shared curve.
double seam_continuity(const QuadStrip& a, const QuadStrip& b, double tol = kDefaultTol);

}  // namespace ribaucour
