#include "ysurf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

namespace ysurf {

namespace {

constexpr double kPi = std::numbers::pi;

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

// Edge -> incident element count, in deterministic (sorted) order.
std::map<EdgeKey, int> edge_counts(const FacePatch& face) {
  std::map<EdgeKey, int> counts;
  for (const auto& e : face.elements) {
    for (int k = 0; k < 3; ++k) ++counts[edge_key(e[k], e[(k + 1) % 3])];
  }
  return counts;
}

std::vector<char> boundary_mask(const FacePatch& face) {
  std::vector<char> mask(face.nodes.size(), 0);
  for (const auto& [edge, count] : edge_counts(face)) {
    if (count == 1) mask[edge.first] = mask[edge.second] = 1;
  }
  return mask;
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Signed area of (disk of radius R at origin) intersected with triangle (0, p, q).
double wedge_disk_area(const Eigen::Vector2d& p, const Eigen::Vector2d& q, double R) {
  auto sector = [R](const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
    return 0.5 * R * R * std::atan2(cross2(u, v), u.dot(v));
  };
  const Eigen::Vector2d d = q - p;
  const double a = d.squaredNorm();
  if (a == 0.0) return 0.0;
  const double b = p.dot(d);
  const double c = p.squaredNorm() - R * R;
  const double disc = b * b - a * c;
  if (disc <= 0.0) return sector(p, q);
  const double s = std::sqrt(disc);
  const double t1 = (-b - s) / a;
  const double t2 = (-b + s) / a;
  if (t2 <= 0.0 || t1 >= 1.0) return sector(p, q);
  const Eigen::Vector2d p1 = p + std::max(t1, 0.0) * d;
  const Eigen::Vector2d p2 = p + std::min(t2, 1.0) * d;
  return sector(p, p1) + 0.5 * cross2(p1, p2) + sector(p2, q);
}

}  // namespace

SampledImmersion sample_immersion(const std::function<Vec3(double, double)>& map, double u0,
                                  double v0, int rows, int cols, double step) {
  SampledImmersion s;
  s.rows = rows;
  s.cols = cols;
  s.positions.reserve(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) s.positions.push_back(map(u0 + i * step, v0 + j * step));
  }
  return s;
}

std::vector<FormSample> fundamental_forms(const SampledImmersion& x, double step) {
  if (!(step > 0.0)) throw ArgumentError("step must be positive");
  if (x.rows < 3 || x.cols < 3) throw ArgumentError("immersion needs at least 3x3 samples");
  std::vector<FormSample> out;
  const double h = step;
  for (int i = 1; i + 1 < x.rows; ++i) {
    for (int j = 1; j + 1 < x.cols; ++j) {
      const Vec3 xu = (x.at(i + 1, j) - x.at(i - 1, j)) / (2 * h);
      const Vec3 xv = (x.at(i, j + 1) - x.at(i, j - 1)) / (2 * h);
      const Vec3 xuu = (x.at(i + 1, j) - 2 * x.at(i, j) + x.at(i - 1, j)) / (h * h);
      const Vec3 xvv = (x.at(i, j + 1) - 2 * x.at(i, j) + x.at(i, j - 1)) / (h * h);
      const Vec3 xuv = (x.at(i + 1, j + 1) - x.at(i + 1, j - 1) - x.at(i - 1, j + 1) +
                        x.at(i - 1, j - 1)) /
                       (4 * h * h);
      FormSample f;
      f.row = i;
      f.col = j;
      f.metric << xu.dot(xu), xu.dot(xv), xu.dot(xv), xv.dot(xv);
      const double det = f.metric.determinant();
      if (!(det > 1e-12)) {
        std::ostringstream msg;
        msg << "degenerate metric (det = " << det << ") at sample (" << i << ", " << j << ")";
        throw StructuralError(msg.str());
      }
      const Vec3 n = xu.cross(xv).normalized();
      f.second_form << xuu.dot(n), xuv.dot(n), xuv.dot(n), xvv.dot(n);
      const double E = f.metric(0, 0), F = f.metric(0, 1), G = f.metric(1, 1);
      const double L = f.second_form(0, 0), M = f.second_form(0, 1), N = f.second_form(1, 1);
      f.gauss_curvature = (L * N - M * M) / det;
      f.mean_curvature = (E * N - 2 * F * M + G * L) / det;
      f.a_norm_sq = f.mean_curvature * f.mean_curvature - 2 * f.gauss_curvature;
      out.push_back(f);
    }
  }
  return out;
}

std::vector<double> discrete_mean_curvature(const FacePatch& face) {
  const std::size_t n = face.nodes.size();
  std::vector<Vec3> lap(n, Vec3::Zero());
  for (const auto& e : face.elements) {
    for (int k = 0; k < 3; ++k) {
      const int i = e[k], j = e[(k + 1) % 3], o = e[(k + 2) % 3];
      const Vec3 a = face.nodes[i] - face.nodes[o];
      const Vec3 b = face.nodes[j] - face.nodes[o];
      const double cot = a.dot(b) / a.cross(b).norm();
      const Vec3 d = face.nodes[j] - face.nodes[i];
      lap[i] += 0.5 * cot * d;
      lap[j] -= 0.5 * cot * d;
    }
  }
  const auto w = lumped_areas(face.nodes, face.elements);
  const auto boundary = boundary_mask(face);
  std::vector<double> h(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!boundary[i] && w[i] > 0.0) h[i] = lap[i].norm() / w[i];
  }
  return h;
}

MinimalityReport verify_minimality(const FacePatch& face, double tolerance) {
  MinimalityReport rep;
  const auto boundary = boundary_mask(face);
  std::vector<double> h;
  if (face.mean_curvature.size() == face.nodes.size()) {
    h = face.mean_curvature;
    rep.analytic = true;
  } else {
    h = discrete_mean_curvature(face);
  }
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (boundary[i]) continue;
    const double v = std::abs(h[i]);
    rep.max_abs_h = std::max(rep.max_abs_h, v);
    if (v > tolerance) rep.offending_nodes.push_back(static_cast<int>(i));
  }
  rep.passed = rep.offending_nodes.empty();
  return rep;
}

YConfigurationReport check_y_configuration(const YSurface& surface, double angle_tol_deg,
                                           double sum_tol) {
  if (surface.junctions.empty()) throw StructuralError("surface has no junction curve");
  YConfigurationReport rep;
  rep.angle_tol_deg = angle_tol_deg;
  rep.sum_tol = sum_tol;
  for (int jid = 0; jid < static_cast<int>(surface.junctions.size()); ++jid) {
    const auto& j = surface.junctions[jid];
    const int nf = static_cast<int>(j.incident_faces.size());
    if (nf != 3 || static_cast<int>(j.conormals.size()) != nf) {
      throw StructuralError("junction " + std::to_string(jid) + " has " + std::to_string(nf) +
                            " incident faces; a Y-junction needs exactly 3");
    }
    JunctionCheck jc;
    jc.junction = jid;
    const int ns = j.num_samples();
    for (const auto& c : j.conormals) {
      if (static_cast<int>(c.size()) != ns) {
        throw StructuralError("junction " + std::to_string(jid) + ": conormal count mismatch");
      }
    }
    for (int k = 0; k < ns; ++k) {
      Vec3 sum = Vec3::Zero();
      for (int i = 0; i < 3; ++i) {
        const Vec3& t = j.conormals[i][k];
        sum += t;
        jc.max_unit_error = std::max(jc.max_unit_error, std::abs(t.norm() - 1.0));
        if (k < static_cast<int>(j.tangent.size())) {
          jc.max_tangent_dot = std::max(jc.max_tangent_dot, std::abs(t.dot(j.tangent[k])));
        }
        const Vec3& u = j.conormals[(i + 1) % 3][k];
        const double dev = std::abs(angle_between(t, u) * 180.0 / kPi - 120.0);
        jc.max_angle_deviation_deg = std::max(jc.max_angle_deviation_deg, dev);
      }
      jc.max_conormal_sum = std::max(jc.max_conormal_sum, sum.norm());
    }

    // Mesh-derived conormals along each junction edge.
    if (static_cast<int>(j.loop_ids.size()) == 3) {
      for (int i = 0; i < 3; ++i) {
        const auto& face = surface.faces.at(j.incident_faces[i]);
        const auto& loop = face.boundary_loops.at(j.loop_ids[i]);
        std::map<EdgeKey, int> third;
        for (const auto& e : face.elements) {
          for (int k = 0; k < 3; ++k) third[edge_key(e[k], e[(k + 1) % 3])] = e[(k + 2) % 3];
        }
        const int m = static_cast<int>(loop.node_ids.size());
        const int edges = j.closed ? m : m - 1;
        for (int k = 0; k < edges; ++k) {
          const int kn = (k + 1) % m;
          auto it = third.find(edge_key(loop.node_ids[k], loop.node_ids[kn]));
          if (it == third.end()) continue;
          const Vec3& p = face.nodes[loop.node_ids[k]];
          const Vec3& q = face.nodes[loop.node_ids[kn]];
          const Vec3 e = (q - p).normalized();
          Vec3 d = face.nodes[it->second] - 0.5 * (p + q);
          d -= d.dot(e) * e;
          const Vec3 mesh_conormal = -d.normalized();
          const Vec3 declared = (j.conormals[i][k] + j.conormals[i][kn]).normalized();
          jc.max_mesh_conormal_deviation_deg =
              std::max(jc.max_mesh_conormal_deviation_deg,
                       angle_between(mesh_conormal, declared) * 180.0 / kPi);
        }
      }
    }

    auto fail = [&](const std::string& what, double v) {
      std::ostringstream os;
      os << "junction " << jid << ": " << what << " = " << v;
      rep.failures.push_back(os.str());
    };
    if (jc.max_angle_deviation_deg > angle_tol_deg) fail("max angle deviation (deg)", jc.max_angle_deviation_deg);
    if (jc.max_conormal_sum > sum_tol) fail("max |sum tau|", jc.max_conormal_sum);
    if (jc.max_unit_error > 1e-8) fail("max ||tau| - 1|", jc.max_unit_error);
    if (jc.max_tangent_dot > 1e-8) fail("max |tau . t|", jc.max_tangent_dot);
    rep.junctions.push_back(jc);
  }
  rep.passed = rep.failures.empty();
  return rep;
}

int euler_characteristic(const FacePatch& face) {
  const auto edges = edge_counts(face);
  return face.num_nodes() - static_cast<int>(edges.size()) + static_cast<int>(face.elements.size());
}

GaussBonnetReport gauss_bonnet_report(const YSurface& surface, int face_id) {
  const FacePatch& face = surface.faces.at(face_id);
  GaussBonnetReport rep;

  const auto weights = face.area_weights.size() == face.nodes.size()
                           ? face.area_weights
                           : lumped_areas(face.nodes, face.elements);
  for (std::size_t i = 0; i < face.nodes.size(); ++i) rep.int_k -= 0.5 * face.a_norm_sq[i] * weights[i];

  // Every open chain must end on nodes shared with another loop.
  std::vector<int> loop_membership(face.nodes.size(), 0);
  for (const auto& loop : face.boundary_loops) {
    for (int v : loop.node_ids) ++loop_membership[v];
  }
  const auto boundary = boundary_mask(face);
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    if (boundary[i] && loop_membership[i] == 0) {
      throw StructuralError("boundary node " + std::to_string(i) + " of face " +
                            std::to_string(face_id) + " belongs to no boundary loop");
    }
  }
  for (const auto& loop : face.boundary_loops) {
    if (!loop.closed && (loop.node_ids.size() < 2 || loop_membership[loop.node_ids.front()] < 2 ||
                         loop_membership[loop.node_ids.back()] < 2)) {
      throw StructuralError("open boundary loop on face " + std::to_string(face_id));
    }
  }

  std::vector<double> angle_sum(face.nodes.size(), 0.0);
  for (const auto& e : face.elements) {
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = face.nodes[e[k]];
      angle_sum[e[k]] += angle_between(face.nodes[e[(k + 1) % 3]] - p, face.nodes[e[(k + 2) % 3]] - p);
    }
  }

  for (int l = 0; l < static_cast<int>(face.boundary_loops.size()); ++l) {
    const auto& loop = face.boundary_loops[l];
    LoopCurvature lc;
    lc.tag = loop.tag;
    if (loop.tag == LoopTag::Truncation) {
      for (int v : loop.node_ids) lc.integral += kPi - angle_sum[v];
    } else {
      bool found = false;
      for (const auto& j : surface.junctions) {
        for (std::size_t i = 0; i < j.incident_faces.size(); ++i) {
          if (j.incident_faces[i] != face_id || i >= j.loop_ids.size() || j.loop_ids[i] != l) continue;
          found = true;
          for (int k = 0; k < j.num_samples(); ++k) {
            lc.integral += -j.curvature_vector[k].dot(j.conormals[i][k]) * j.length_weights[k];
          }
        }
      }
      if (!found) {
        throw StructuralError("junction loop " + std::to_string(l) + " of face " +
                              std::to_string(face_id) + " is not attached to any junction");
      }
    }
    rep.loops.push_back(lc);
  }
  rep.chi = euler_characteristic(face);
  double total = rep.int_k;
  for (const auto& lc : rep.loops) total += lc.integral;
  rep.residual = std::abs(total - 2.0 * kPi * rep.chi);
  rep.relative_residual = rep.residual / (2.0 * kPi);
  return rep;
}

double triangle_disk_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                          const Eigen::Vector2d& c, double radius) {
  return std::abs(wedge_disk_area(a, b, radius) + wedge_disk_area(b, c, radius) +
                  wedge_disk_area(c, a, radius));
}

double area_in_ball(const YSurface& surface, const Vec3& center, double radius) {
  double area = 0.0;
  const double r2 = radius * radius;
  for (const auto& face : surface.faces) {
    for (const auto& e : face.elements) {
      const Vec3& p0 = face.nodes[e[0]];
      const Vec3& p1 = face.nodes[e[1]];
      const Vec3& p2 = face.nodes[e[2]];
      const double d0 = (p0 - center).squaredNorm();
      const double d1 = (p1 - center).squaredNorm();
      const double d2 = (p2 - center).squaredNorm();
      if (d0 <= r2 && d1 <= r2 && d2 <= r2) {
        area += triangle_area(p0, p1, p2);
        continue;
      }
      const Vec3 centroid = (p0 + p1 + p2) / 3.0;
      const double reach = std::sqrt(std::max({(p0 - centroid).squaredNorm(),
                                               (p1 - centroid).squaredNorm(),
                                               (p2 - centroid).squaredNorm()}));
      if ((centroid - center).norm() - reach >= radius) continue;
      const Vec3 n = (p1 - p0).cross(p2 - p0).normalized();
      const double dist = (center - p0).dot(n);
      if (std::abs(dist) >= radius) continue;
      const double rho = std::sqrt(r2 - dist * dist);
      const Vec3 foot = center - dist * n;
      const Vec3 e1 = (p1 - p0).normalized();
      const Vec3 e2 = n.cross(e1);
      auto proj = [&](const Vec3& p) {
        const Vec3 d = p - foot;
        return Eigen::Vector2d(d.dot(e1), d.dot(e2));
      };
      area += triangle_disk_area(proj(p0), proj(p1), proj(p2), rho);
    }
  }
  return area;
}

DensityReport density_report(const YSurface& surface, const DensityCenter& center,
                             const std::vector<double>& radii) {
  if (radii.empty()) throw ArgumentError("density_report needs at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw ArgumentError("radii must be positive and strictly increasing");
    }
  }
  const Vec3 c = std::holds_alternative<Vec3>(center) ? std::get<Vec3>(center) : Vec3::Zero();
  DensityReport rep;
  rep.center = center;
  rep.radii = radii;
  for (double r : radii) {
    const double a = area_in_ball(surface, c, r);
    rep.ratios.push_back(a / (kPi * r * r));
    rep.growth_constant = std::max(rep.growth_constant, a / (r * r));
  }
  return rep;
}

std::vector<Violation> validate_surface(const YSurface& surface) {
  std::vector<Violation> out;
  for (int f = 0; f < surface.num_faces(); ++f) {
    const auto& face = surface.faces[f];
    const int n = face.num_nodes();
    if (static_cast<int>(face.normal.size()) != n) {
      out.push_back({"normal count differs from node count", f, -1, static_cast<double>(face.normal.size())});
    } else {
      for (int i = 0; i < n; ++i) {
        const double err = std::abs(face.normal[i].norm() - 1.0);
        if (!(err <= 1e-8)) out.push_back({"non-unit normal", f, i, face.normal[i].norm()});
      }
    }
    if (static_cast<int>(face.a_norm_sq.size()) != n) {
      out.push_back({"missing |A|^2 data", f, -1, static_cast<double>(face.a_norm_sq.size())});
    }
    bool indices_ok = true;
    for (std::size_t e = 0; e < face.elements.size(); ++e) {
      const auto& el = face.elements[e];
      if (std::any_of(el.begin(), el.end(), [n](int v) { return v < 0 || v >= n; })) {
        out.push_back({"element references missing node", f, static_cast<int>(e), 0.0});
        indices_ok = false;
        continue;
      }
      const double a = triangle_area(face.nodes[el[0]], face.nodes[el[1]], face.nodes[el[2]]);
      if (!(a > 0.0)) out.push_back({"degenerate element", f, el[0], a});
    }
    if (!indices_ok) continue;

    // Connectivity of the element graph through shared nodes.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::vector<char> used(n, 0);
    for (const auto& el : face.elements) {
      for (int k = 0; k < 3; ++k) {
        used[el[k]] = 1;
        parent[find(el[k])] = find(el[(k + 1) % 3]);
      }
    }
    std::set<int> roots;
    for (int i = 0; i < n; ++i) {
      if (used[i]) roots.insert(find(i));
    }
    if (roots.size() > 1) out.push_back({"element graph is disconnected", f, -1, static_cast<double>(roots.size())});

    const auto edges = edge_counts(face);
    for (std::size_t l = 0; l < face.boundary_loops.size(); ++l) {
      const auto& loop = face.boundary_loops[l];
      std::set<int> seen(loop.node_ids.begin(), loop.node_ids.end());
      if (seen.size() != loop.node_ids.size()) {
        out.push_back({"boundary loop is not simple", f, static_cast<int>(l), 0.0});
        continue;
      }
      const std::size_t m = loop.node_ids.size();
      const std::size_t links = loop.closed ? m : m - 1;
      for (std::size_t k = 0; k < links; ++k) {
        const int a = loop.node_ids[k], b = loop.node_ids[(k + 1) % m];
        if (a < 0 || a >= n || b < 0 || b >= n || !edges.contains(edge_key(a, b))) {
          out.push_back({"boundary loop step is not a mesh edge", f, a, static_cast<double>(l)});
          break;
        }
      }
    }
  }

  for (int jid = 0; jid < static_cast<int>(surface.junctions.size()); ++jid) {
    const auto& j = surface.junctions[jid];
    if (j.incident_faces.size() != 3) {
      out.push_back({"junction does not have exactly 3 incident faces", -1, jid,
                     static_cast<double>(j.incident_faces.size())});
      continue;
    }
    if (j.loop_ids.size() != 3 || j.conormals.size() != 3) {
      out.push_back({"junction incidence data incomplete", -1, jid, 0.0});
      continue;
    }
    if (j.curvature_vector.size() != j.samples.size()) {
      out.push_back({"junction curvature vector count mismatch", -1, jid, 0.0});
    }
    for (int i = 0; i < 3; ++i) {
      const int fid = j.incident_faces[i];
      if (fid < 0 || fid >= surface.num_faces()) {
        out.push_back({"junction references missing face", fid, jid, 0.0});
        continue;
      }
      const auto& face = surface.faces[fid];
      if (j.loop_ids[i] < 0 || j.loop_ids[i] >= static_cast<int>(face.boundary_loops.size())) {
        out.push_back({"junction references missing loop", fid, jid, 0.0});
        continue;
      }
      const auto& loop = face.boundary_loops[j.loop_ids[i]];
      if (loop.tag != LoopTag::Junction || loop.node_ids.size() != j.samples.size()) {
        out.push_back({"junction loop tag or length mismatch", fid, jid, 0.0});
        continue;
      }
      for (int k = 0; k < j.num_samples(); ++k) {
        const int v = loop.node_ids[k];
        const double d = (face.nodes.at(v) - j.samples[k]).norm();
        if (!(d <= 1e-10)) out.push_back({"junction node does not match sample", fid, v, d});
      }
      if (j.conormals[i].size() != j.samples.size()) {
        out.push_back({"conormal count mismatch", fid, jid, 0.0});
        continue;
      }
      for (int k = 0; k < j.num_samples(); ++k) {
        const double err = std::abs(j.conormals[i][k].norm() - 1.0);
        if (!(err <= 1e-8)) out.push_back({"non-unit conormal", fid, loop.node_ids[k], j.conormals[i][k].norm()});
      }
    }
  }
  return out;
}

}  // namespace ysurf
