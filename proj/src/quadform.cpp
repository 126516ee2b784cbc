#include "ysurf/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "ysurf/classify.hpp"

namespace ysurf {

namespace {

using Triplet = Eigen::Triplet<double>;

SparseMatrix diagonal(int n, const std::vector<double>& d) {
  std::vector<Triplet> t;
  t.reserve(d.size());
  for (int i = 0; i < n; ++i) t.emplace_back(i, i, d[i]);
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

const BoundaryLoop& junction_loop(const YSurface& s, const JunctionCurve& j, int i) {
  const auto& face = s.faces.at(j.incident_faces.at(i));
  const auto& loop = face.boundary_loops.at(j.loop_ids.at(i));
  if (loop.tag != LoopTag::Junction || loop.node_ids.size() != j.samples.size()) {
    throw StructuralError("junction loop does not match the junction samples");
  }
  return loop;
}

}  // namespace

std::vector<std::array<int, 3>> junction_triples(const YSurface& surface) {
  const auto off = surface.face_offsets();
  std::vector<std::array<int, 3>> triples;
  for (const auto& j : surface.junctions) {
    if (j.incident_faces.size() != 3 || j.loop_ids.size() != 3) {
      throw StructuralError("junction must have exactly 3 incident faces");
    }
    std::array<const BoundaryLoop*, 3> loops{};
    for (int i = 0; i < 3; ++i) loops[i] = &junction_loop(surface, j, i);
    for (int k = 0; k < j.num_samples(); ++k) {
      std::array<int, 3> t{};
      for (int i = 0; i < 3; ++i) {
        const int fid = j.incident_faces[i];
        const int v = loops[i]->node_ids[k];
        if ((surface.faces[fid].nodes.at(v) - j.samples[k]).norm() > 1e-10) {
          throw StructuralError("junction node " + std::to_string(v) + " of face " +
                                std::to_string(fid) + " does not match sample " + std::to_string(k));
        }
        t[i] = off[fid] + v;
      }
      triples.push_back(t);
    }
  }
  return triples;
}

std::vector<char> truncation_mask(const YSurface& surface) {
  const auto off = surface.face_offsets();
  std::vector<char> mask(surface.total_nodes(), 0);
  for (int f = 0; f < surface.num_faces(); ++f) {
    for (const auto& loop : surface.faces[f].boundary_loops) {
      if (loop.tag != LoopTag::Truncation) continue;
      for (int v : loop.node_ids) mask[off[f] + v] = 1;
    }
  }
  return mask;
}

Reducer build_reducer(int full_dim, std::vector<char> dirichlet,
                      const std::vector<std::array<int, 3>>& triples) {
  Reducer r;
  r.full_dim = full_dim;
  std::vector<int> owner(full_dim, -1);
  for (int t = 0; t < static_cast<int>(triples.size()); ++t) {
    for (int d : triples[t]) {
      if (owner[d] >= 0) throw StructuralError("dof " + std::to_string(d) + " is in two junction triples");
      owner[d] = t;
    }
  }

  // elim_by[d]: the free dofs whose negated sum gives d.
  std::vector<std::vector<int>> elim_by(full_dim);
  std::vector<char> is_elim(full_dim, 0);
  for (const auto& t : triples) {
    std::vector<int> free;
    for (int d : t) {
      if (!dirichlet[d]) free.push_back(d);
    }
    if (free.size() == 1) {
      dirichlet[free[0]] = 1;
    } else if (free.size() >= 2) {
      const int e = free.back();
      free.pop_back();
      is_elim[e] = 1;
      elim_by[e] = free;
      r.eliminated.push_back(e);
    }
  }

  std::vector<int> column(full_dim, -1);
  int cols = 0;
  for (int d = 0; d < full_dim; ++d) {
    if (!dirichlet[d] && !is_elim[d]) column[d] = cols++;
  }
  std::vector<Triplet> entries;
  for (int d = 0; d < full_dim; ++d) {
    if (column[d] >= 0) {
      entries.emplace_back(d, column[d], 1.0);
    } else if (is_elim[d]) {
      for (int o : elim_by[d]) entries.emplace_back(d, column[o], -1.0);
    }
  }
  r.map.resize(full_dim, cols);
  r.map.setFromTriplets(entries.begin(), entries.end());
  r.reduced_dim = cols;
  r.dirichlet = std::move(dirichlet);
  return r;
}

IndexFormMatrices assemble_index_form(const YSurface& surface) {
  IndexFormMatrices m;
  m.face_offsets = surface.face_offsets();
  const int n = surface.total_nodes();
  std::vector<Triplet> stiff;
  std::vector<double> pot(n, 0.0), mass(n, 0.0), junc(n, 0.0);

  for (int f = 0; f < surface.num_faces(); ++f) {
    const auto& face = surface.faces[f];
    if (face.a_norm_sq.size() != face.nodes.size()) {
      throw StructuralError("face " + std::to_string(f) + " is missing |A|^2 data");
    }
    const int off = m.face_offsets[f];
    stiff.reserve(stiff.size() + 9 * face.elements.size());
    for (const auto& el : face.elements) {
      const Vec3& p0 = face.nodes[el[0]];
      const Vec3& p1 = face.nodes[el[1]];
      const Vec3& p2 = face.nodes[el[2]];
      const std::array<Vec3, 3> e{p2 - p1, p0 - p2, p1 - p0};
      const double area = 0.5 * e[2].cross(-e[1]).norm();
      if (!(area > 0.0)) throw StructuralError("degenerate element in face " + std::to_string(f));
      for (int a = 0; a < 3; ++a) {
        stiff.emplace_back(off + el[a], off + el[a], e[a].dot(e[a]) / (4.0 * area));
        for (int b = a + 1; b < 3; ++b) {
          const double v = e[a].dot(e[b]) / (4.0 * area);
          stiff.emplace_back(off + el[a], off + el[b], v);
          stiff.emplace_back(off + el[b], off + el[a], v);
        }
      }
    }
    const auto w = face.area_weights.size() == face.nodes.size() ? face.area_weights
                                                                 : lumped_areas(face.nodes, face.elements);
    for (int i = 0; i < face.num_nodes(); ++i) {
      mass[off + i] = w[i];
      pot[off + i] = face.a_norm_sq[i] * w[i];
    }
  }

  for (const auto& j : surface.junctions) {
    if (j.incident_faces.size() != 3) throw StructuralError("junction must have exactly 3 incident faces");
    for (int i = 0; i < 3; ++i) {
      const auto& loop = junction_loop(surface, j, i);
      const int fid = j.incident_faces[i];
      for (int k = 0; k < j.num_samples(); ++k) {
        const int v = loop.node_ids[k];
        if ((surface.faces[fid].nodes[v] - j.samples[k]).norm() > 1e-10) {
          throw StructuralError("unmatched junction node " + std::to_string(v) + " on face " +
                                std::to_string(fid));
        }
        junc[m.face_offsets[fid] + v] += j.curvature_vector[k].dot(j.conormals[i][k]) * j.length_weights[k];
      }
    }
  }

  m.stiffness.resize(n, n);
  m.stiffness.setFromTriplets(stiff.begin(), stiff.end());
  m.potential = diagonal(n, pot);
  m.mass = diagonal(n, mass);
  m.junction = diagonal(n, junc);
  return m;
}

ReducedForm apply_compatibility(const IndexFormMatrices& matrices, const YSurface& surface) {
  ReducedForm r;
  r.reducer = build_reducer(matrices.dim(), truncation_mask(surface), junction_triples(surface));
  const SparseMatrix& T = r.reducer.map;
  const SparseMatrix Tt = T.transpose();
  r.K = Tt * (matrices.index_form() * T);
  r.M = Tt * (matrices.mass * T);
  r.K.makeCompressed();
  r.M.makeCompressed();
  return r;
}

NormalField NormalField::zero(const YSurface& surface) {
  NormalField f;
  for (const auto& face : surface.faces) f.values.push_back(Eigen::VectorXd::Zero(face.num_nodes()));
  return f;
}

NormalField NormalField::from_stacked(const YSurface& surface, const Eigen::VectorXd& stacked) {
  if (stacked.size() != surface.total_nodes()) throw ArgumentError("stacked field has the wrong length");
  NormalField f;
  int off = 0;
  for (const auto& face : surface.faces) {
    f.values.push_back(stacked.segment(off, face.num_nodes()));
    off += face.num_nodes();
  }
  return f;
}

Eigen::VectorXd NormalField::stacked() const {
  Eigen::Index n = 0;
  for (const auto& v : values) n += v.size();
  Eigen::VectorXd out(n);
  Eigen::Index off = 0;
  for (const auto& v : values) {
    out.segment(off, v.size()) = v;
    off += v.size();
  }
  return out;
}

double evaluate_Q(const NormalField& field, const YSurface& surface) {
  if (static_cast<int>(field.values.size()) != surface.num_faces()) {
    throw ArgumentError("field has " + std::to_string(field.values.size()) + " faces, surface has " +
                        std::to_string(surface.num_faces()));
  }
  for (int f = 0; f < surface.num_faces(); ++f) {
    if (field.values[f].size() != surface.faces[f].num_nodes()) {
      throw ArgumentError("field on face " + std::to_string(f) + " has the wrong number of nodes");
    }
  }

  for (const auto& j : surface.junctions) {
    if (j.incident_faces.size() != 3) throw StructuralError("junction must have exactly 3 incident faces");
    for (int k = 0; k < j.num_samples(); ++k) {
      double sum = 0.0, mag = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double v = field.values[j.incident_faces[i]][junction_loop(surface, j, i).node_ids[k]];
        sum += v;
        mag += std::abs(v);
      }
      if (std::abs(sum) > 1e-12 * std::max(1.0, mag)) {
        std::ostringstream os;
        os << "compatibility violated at junction sample " << k << ": f1 + f2 + f3 = " << sum;
        throw ArgumentError(os.str());
      }
    }
  }
  if (field.compact_support) {
    for (int f = 0; f < surface.num_faces(); ++f) {
      for (const auto& loop : surface.faces[f].boundary_loops) {
        if (loop.tag != LoopTag::Truncation) continue;
        for (int v : loop.node_ids) {
          if (field.values[f][v] != 0.0) {
            std::ostringstream os;
            os << "Dirichlet condition violated on face " << f << " truncation node " << v
               << " (value " << field.values[f][v] << ")";
            throw ArgumentError(os.str());
          }
        }
      }
    }
  }

  double gradient = 0.0, potential = 0.0, junction = 0.0;
  for (int f = 0; f < surface.num_faces(); ++f) {
    const auto& face = surface.faces[f];
    const auto& v = field.values[f];
    for (const auto& el : face.elements) {
      const Vec3& p0 = face.nodes[el[0]];
      const Vec3& p1 = face.nodes[el[1]];
      const Vec3& p2 = face.nodes[el[2]];
      const Vec3 normal = (p1 - p0).cross(p2 - p0);
      const double twice_area = normal.norm();
      const Vec3 n = normal / twice_area;
      // grad of the linear interpolant: sum_i f_i (n x opposite edge) / (2 area).
      const Vec3 g = (v[el[0]] * n.cross(p2 - p1) + v[el[1]] * n.cross(p0 - p2) +
                      v[el[2]] * n.cross(p1 - p0)) /
                     twice_area;
      gradient += 0.5 * twice_area * g.squaredNorm();
    }
    const auto w = face.area_weights.size() == face.nodes.size() ? face.area_weights
                                                                 : lumped_areas(face.nodes, face.elements);
    for (int i = 0; i < face.num_nodes(); ++i) potential += face.a_norm_sq[i] * v[i] * v[i] * w[i];
  }
  for (const auto& j : surface.junctions) {
    for (int i = 0; i < 3; ++i) {
      const auto& loop = junction_loop(surface, j, i);
      const auto& v = field.values[j.incident_faces[i]];
      for (int k = 0; k < j.num_samples(); ++k) {
        const double fv = v[loop.node_ids[k]];
        junction += j.curvature_vector[k].dot(j.conormals[i][k]) * fv * fv * j.length_weights[k];
      }
    }
  }
  return gradient - potential - junction;
}

double SmoothStep::operator()(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * (3.0 - 2.0 * s);
}

double SmoothStep::derivative(double s) const {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return 6.0 * s * (1.0 - s);
}

CutoffProfile build_log_cutoff(const YSurface& surface, double R, const SmoothStep& xi) {
  if (!(R > 1.0)) throw ArgumentError("cutoff scale R must exceed 1");
  CutoffProfile c;
  c.R = R;
  c.C = xi.bound();
  const double log_r = std::log(R);
  for (const auto& face : surface.faces) {
    std::vector<double> psi(face.nodes.size()), phi(face.nodes.size());
    for (std::size_t i = 0; i < face.nodes.size(); ++i) {
      const double r = face.nodes[i].norm();
      psi[i] = r > 0.0 ? 2.0 - std::log(r) / log_r : std::numeric_limits<double>::infinity();
      phi[i] = xi(psi[i]);
    }
    for (const auto& el : face.elements) {
      const Vec3& p0 = face.nodes[el[0]];
      const Vec3& p1 = face.nodes[el[1]];
      const Vec3& p2 = face.nodes[el[2]];
      const Vec3 normal = (p1 - p0).cross(p2 - p0);
      const double twice_area = normal.norm();
      const Vec3 n = normal / twice_area;
      const Vec3 g = (phi[el[0]] * n.cross(p2 - p1) + phi[el[1]] * n.cross(p0 - p2) +
                      phi[el[2]] * n.cross(p1 - p0)) /
                     twice_area;
      const double ratio = ((p0 + p1 + p2) / 3.0).norm() * g.norm() * log_r;
      c.max_gradient_ratio = std::max(c.max_gradient_ratio, ratio);
    }
    c.psi.push_back(std::move(psi));
    c.phi.push_back(std::move(phi));
  }
  c.bound_ok = c.max_gradient_ratio <= 1.1 * c.C;
  return c;
}

ConstantsProbe q_of_constants(const YSurface& surface, const std::array<double, 3>& c, double R) {
  if (surface.junctions.size() != 1 || surface.junctions[0].incident_faces.size() != 3) {
    throw StructuralError("constant test fields need exactly one three-face junction");
  }
  const double mag = std::abs(c[0]) + std::abs(c[1]) + std::abs(c[2]);
  if (std::abs(c[0] + c[1] + c[2]) > 1e-12 * std::max(1.0, mag)) {
    throw ArgumentError("constants must satisfy c1 + c2 + c3 = 0");
  }
  const auto cutoff = build_log_cutoff(surface, R);
  const auto& j = surface.junctions[0];
  NormalField field = NormalField::zero(surface);
  field.compact_support = false;
  ConstantsProbe probe;
  for (int i = 0; i < 3; ++i) {
    const int fid = j.incident_faces[i];
    for (int v = 0; v < surface.faces[fid].num_nodes(); ++v) field.values[fid][v] = c[i] * cutoff.phi[fid][v];
    probe.theta_prediction += c[i] * c[i] * face_theta(surface.faces[fid]).theta;
  }
  for (int f = 0; f < surface.num_faces(); ++f) {
    for (const auto& loop : surface.faces[f].boundary_loops) {
      if (loop.tag != LoopTag::Truncation) continue;
      for (int v : loop.node_ids) probe.support_contained = probe.support_contained && field.values[f][v] == 0.0;
    }
  }
  probe.q_value = evaluate_Q(field, surface);
  return probe;
}

double l2star_norm_sq(const NormalField& field, const YSurface& surface) {
  if (static_cast<int>(field.values.size()) != surface.num_faces()) throw ArgumentError("field/surface mismatch");
  double total = 0.0;
  for (int f = 0; f < surface.num_faces(); ++f) {
    const auto& face = surface.faces[f];
    const auto w = face.area_weights.size() == face.nodes.size() ? face.area_weights
                                                                 : lumped_areas(face.nodes, face.elements);
    for (int i = 0; i < face.num_nodes(); ++i) {
      const double r = face.nodes[i].norm();
      const double lg = std::log(2.0 + r);
      const double v = field.values[f][i];
      total += v * v * w[i] / ((1.0 + r * r) * lg * lg);
    }
  }
  return total;
}

void write_coo(const SparseMatrix& m, std::ostream& out) {
  const Eigen::SparseMatrix<double, Eigen::RowMajor> rm(m);
  char buf[64];
  for (int r = 0; r < rm.outerSize(); ++r) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rm, r); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      out << it.row() << ' ' << it.col() << ' ' << buf << '\n';
    }
  }
}

}  // namespace ysurf
