#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "ysurf/types.hpp"

namespace ysurf {

// ---------------------------------------------------------------------------
// Fundamental forms of a sampled immersion
// ---------------------------------------------------------------------------

/// Positions sampled on a uniform (u, v) grid with the same step in both
/// directions; stored row-major with u as the row index.
struct SampledImmersion {
  int rows = 0;
  int cols = 0;
  std::vector<Vec3> positions;

  const Vec3& at(int i, int j) const { return positions[static_cast<std::size_t>(i) * cols + j]; }
};

SampledImmersion sample_immersion(const std::function<Vec3(double, double)>& map, double u0,
                                  double v0, int rows, int cols, double step);

struct FormSample {
  int row = 0;
  int col = 0;
  Eigen::Matrix2d metric;
  Eigen::Matrix2d second_form;
  double a_norm_sq = 0.0;
  double mean_curvature = 0.0;  // k1 + k2 with respect to Xu x Xv
  double gauss_curvature = 0.0;
};

/// Central-difference fundamental forms at every interior sample.
/// Throws StructuralError naming the sample when det(metric) <= 1e-12.
std::vector<FormSample> fundamental_forms(const SampledImmersion& immersion, double step);

// ---------------------------------------------------------------------------
// Minimality and Y-configuration
// ---------------------------------------------------------------------------

struct MinimalityReport {
  double max_abs_h = 0.0;
  std::vector<int> offending_nodes;
  bool analytic = false;  // true when the face carried analytic mean curvature
  bool passed = true;
};

/// Uses the face's analytic mean curvature when present, otherwise the
/// cotangent-Laplacian estimate at interior nodes.
MinimalityReport verify_minimality(const FacePatch& face, double tolerance);

/// Discrete mean curvature |Delta x| / area at every node (zero on boundary nodes).
std::vector<double> discrete_mean_curvature(const FacePatch& face);

struct JunctionCheck {
  int junction = 0;
  double max_angle_deviation_deg = 0.0;
  double max_conormal_sum = 0.0;
  double max_unit_error = 0.0;
  double max_tangent_dot = 0.0;
  // Angle between declared conormals and the direction read off the first
  // element row of the mesh; informational, it is O(h).
  double max_mesh_conormal_deviation_deg = 0.0;
};

struct YConfigurationReport {
  std::vector<JunctionCheck> junctions;
  double angle_tol_deg = 0.0;
  double sum_tol = 0.0;
  bool passed = true;
  std::vector<std::string> failures;
};

/// Throws StructuralError if the surface has no junction or a junction does
/// not have exactly three incident faces with matching conormal data.
YConfigurationReport check_y_configuration(const YSurface& surface, double angle_tol_deg,
                                           double sum_tol = 1e-8);

// ---------------------------------------------------------------------------
// Gauss-Bonnet accounting
// ---------------------------------------------------------------------------

struct LoopCurvature {
  LoopTag tag = LoopTag::Truncation;
  double integral = 0.0;
};

struct GaussBonnetReport {
  double int_k = 0.0;
  std::vector<LoopCurvature> loops;
  int chi = 0;
  double residual = 0.0;
  double relative_residual = 0.0;  // residual / (2 pi)
};

/// Integral of K = -|A|^2/2 by lumped quadrature, geodesic curvature
/// k = -H_Gamma . tau on junction loops and discrete boundary turning on
/// truncation loops, against 2 pi chi(V - E + F).
GaussBonnetReport gauss_bonnet_report(const YSurface& surface, int face_id);

/// V - E + F of a triangulation.
int euler_characteristic(const FacePatch& face);

// ---------------------------------------------------------------------------
// Density
// ---------------------------------------------------------------------------

struct AtInfinity {};
using DensityCenter = std::variant<Vec3, AtInfinity>;

struct DensityReport {
  DensityCenter center;
  std::vector<double> radii;
  std::vector<double> ratios;
  double growth_constant = 0.0;
};

/// Area of the surface inside B_r(center) by exact triangle/ball clipping.
double area_in_ball(const YSurface& surface, const Vec3& center, double radius);

/// Ratios area(B_r)/(pi r^2). `AtInfinity` measures about the origin at the given (large) radii.
DensityReport density_report(const YSurface& surface, const DensityCenter& center,
                             const std::vector<double>& radii);

/// Area of a plane triangle (2-D coordinates) intersected with the disk of
/// radius `radius` centered at the origin.
double triangle_disk_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                          const Eigen::Vector2d& c, double radius);

// ---------------------------------------------------------------------------
// Structural validation
// ---------------------------------------------------------------------------

struct Violation {
  std::string what;
  int face = -1;
  int node = -1;
  double value = 0.0;
};

/// Checks the FacePatch / JunctionCurve / YSurface invariants that do not need
/// curvature data: unit normals, positive element areas, connectivity, simple
/// boundary loops, junction node matching, conormal unit length.
std::vector<Violation> validate_surface(const YSurface& surface);

}  // namespace ysurf
