#include "ysurf/types.hpp"

namespace ysurf {

const char* to_string(LoopTag tag) {
  return tag == LoopTag::Junction ? "junction" : "truncation";
}

LoopTag loop_tag_from_string(const std::string& s) {
  if (s == "junction") return LoopTag::Junction;
  if (s == "truncation") return LoopTag::Truncation;
  throw StructuralError("unknown boundary loop tag '" + s + "'");
}

const char* to_string(ProfileEnd end) {
  switch (end) {
    case ProfileEnd::Junction:
      return "junction";
    case ProfileEnd::Truncation:
      return "truncation";
    case ProfileEnd::Axis:
      return "axis";
  }
  return "truncation";
}

ProfileEnd profile_end_from_string(const std::string& s) {
  if (s == "junction") return ProfileEnd::Junction;
  if (s == "truncation") return ProfileEnd::Truncation;
  if (s == "axis") return ProfileEnd::Axis;
  throw StructuralError("unknown profile end kind '" + s + "'");
}

int YSurface::total_nodes() const {
  int n = 0;
  for (const auto& f : faces) n += f.num_nodes();
  return n;
}

std::vector<int> YSurface::face_offsets() const {
  std::vector<int> offsets;
  offsets.reserve(faces.size());
  int n = 0;
  for (const auto& f : faces) {
    offsets.push_back(n);
    n += f.num_nodes();
  }
  return offsets;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

std::vector<double> lumped_areas(const std::vector<Vec3>& nodes,
                                 const std::vector<std::array<int, 3>>& elements) {
  std::vector<double> w(nodes.size(), 0.0);
  for (const auto& e : elements) {
    const double third = triangle_area(nodes[e[0]], nodes[e[1]], nodes[e[2]]) / 3.0;
    for (int v : e) w[v] += third;
  }
  return w;
}

std::vector<double> polyline_weights(const std::vector<Vec3>& samples, bool closed) {
  const std::size_t n = samples.size();
  std::vector<double> w(n, 0.0);
  if (n < 2) return w;
  const std::size_t segments = closed ? n : n - 1;
  for (std::size_t k = 0; k < segments; ++k) {
    const std::size_t next = (k + 1) % n;
    const double len = (samples[next] - samples[k]).norm();
    w[k] += 0.5 * len;
    w[next] += 0.5 * len;
  }
  return w;
}

std::vector<Vec3> polyline_tangents(const std::vector<Vec3>& samples, bool closed) {
  const std::size_t n = samples.size();
  std::vector<Vec3> t(n, Vec3::Zero());
  if (n < 2) return t;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t prev = k == 0 ? (closed ? n - 1 : 0) : k - 1;
    std::size_t next = k + 1 == n ? (closed ? 0 : n - 1) : k + 1;
    Vec3 d = samples[next] - samples[prev];
    t[k] = d.normalized();
  }
  return t;
}

void finalize_surface(YSurface& surface) {
  for (auto& face : surface.faces) face.area_weights = lumped_areas(face.nodes, face.elements);
  for (auto& j : surface.junctions) {
    if (j.tangent.size() != j.samples.size()) j.tangent = polyline_tangents(j.samples, j.closed);
    j.length_weights = polyline_weights(j.samples, j.closed);
  }
}

}  // namespace ysurf
