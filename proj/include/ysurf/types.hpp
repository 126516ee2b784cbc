#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace ysurf {

using Vec3 = Eigen::Vector3d;

/// Thrown when an input violates a structural invariant (face counts, open loops, mismatched nodes).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown for invalid scalar arguments (nonpositive sizes, inadmissible fields).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class LoopTag { Junction, Truncation };

const char* to_string(LoopTag tag);
LoopTag loop_tag_from_string(const std::string& s);

struct BoundaryLoop {
  LoopTag tag = LoopTag::Truncation;
  std::vector<int> node_ids;
  // Open chains occur where a junction segment ends on the truncation boundary.
  bool closed = true;
};

/// Declared asymptotic topology of a face: genus g, number of ends e, sum of end multiplicities d.
struct Topology {
  int genus = 0;
  int num_ends = 0;
  int end_multiplicity_sum = 0;

  int euler_characteristic() const { return 1 - 2 * genus - num_ends; }
  bool operator==(const Topology&) const = default;
};

enum class ProfileEnd { Junction, Truncation, Axis };

const char* to_string(ProfileEnd end);
ProfileEnd profile_end_from_string(const std::string& s);

struct ProfileSample {
  double s = 0.0;  // arclength
  double r = 0.0;
  double z = 0.0;
  double dr_ds = 0.0;
  double dz_ds = 0.0;
  double a_norm_sq = 0.0;
};

/// Generating curve of a surface of revolution about the z axis. Sample j owns the
/// contiguous node range [ring_start[j], ring_start[j] + ring_size[j]) of its face.
struct ProfileCurve {
  std::vector<ProfileSample> samples;
  std::vector<int> ring_start;
  std::vector<int> ring_size;
  ProfileEnd start_kind = ProfileEnd::Truncation;
  ProfileEnd end_kind = ProfileEnd::Truncation;

  std::array<double, 2> param_range() const {
    return {samples.front().s, samples.back().s};
  }
};

struct FacePatch {
  std::vector<Vec3> nodes;
  std::vector<std::array<int, 3>> elements;
  std::vector<Vec3> normal;
  std::vector<double> a_norm_sq;
  std::vector<double> area_weights;
  Topology topology;
  std::vector<BoundaryLoop> boundary_loops;
  // Analytic mean curvature per node when the generator knows it; empty otherwise.
  std::vector<double> mean_curvature;
  std::optional<ProfileCurve> profile;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  bool is_compact() const { return topology.num_ends == 0; }
};

struct JunctionCurve {
  std::vector<Vec3> samples;
  bool closed = true;
  std::vector<Vec3> tangent;
  std::vector<Vec3> curvature_vector;
  std::vector<int> incident_faces;
  // conormals[i][k]: outward unit conormal of incident face i at sample k.
  std::vector<std::vector<Vec3>> conormals;
  // loop_ids[i]: index of the junction loop of incident face i; its node_ids[k] sits at samples[k].
  std::vector<int> loop_ids;
  std::vector<double> length_weights;

  int num_samples() const { return static_cast<int>(samples.size()); }
};

struct YSurface {
  std::string name;
  std::vector<FacePatch> faces;
  std::vector<JunctionCurve> junctions;

  int num_faces() const { return static_cast<int>(faces.size()); }
  int total_nodes() const;
  /// Offset of each face's first node in the stacked nodal vector.
  std::vector<int> face_offsets() const;
};

/// Barycentric lumped nodal areas (one third of each incident triangle).
std::vector<double> lumped_areas(const std::vector<Vec3>& nodes,
                                 const std::vector<std::array<int, 3>>& elements);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

/// Trapezoidal arclength weights on a polyline.
std::vector<double> polyline_weights(const std::vector<Vec3>& samples, bool closed);

/// Central-difference unit tangents on a polyline (one-sided at open ends).
std::vector<Vec3> polyline_tangents(const std::vector<Vec3>& samples, bool closed);

/// Recomputes area weights and, where missing, junction tangents and length weights.
void finalize_surface(YSurface& surface);

}  // namespace ysurf
