#include "ysurf/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "ysurf/quadform.hpp"

namespace ysurf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoundaryTol = 1e-9 * kPi;

bool near(double x, double v) { return std::abs(x - v) <= kBoundaryTol; }

bool is_annulus(const Topology& t) { return t.genus == 0 && t.num_ends == 1; }

}  // namespace

double alpha_of(const Topology& t) {
  return 2.0 * kPi * (1 - 2 * t.genus - t.num_ends - t.end_multiplicity_sum);
}

FaceTheta face_theta(const FacePatch& face) {
  if (face.a_norm_sq.size() != face.nodes.size()) throw StructuralError("face is missing |A|^2 data");
  if (face.topology.genus < 0 || face.topology.num_ends < 0 || face.topology.end_multiplicity_sum < 0) {
    throw StructuralError("face topology metadata is missing or negative");
  }
  FaceTheta ft;
  ft.topology = face.topology;
  ft.euler_chi = face.topology.euler_characteristic();
  ft.alpha = alpha_of(face.topology);
  const auto w = face.area_weights.size() == face.nodes.size() ? face.area_weights
                                                               : lumped_areas(face.nodes, face.elements);
  for (std::size_t i = 0; i < w.size(); ++i) ft.truncated_total_curvature += face.a_norm_sq[i] * w[i];

  if (face.topology.num_ends > 0) {
    double r_trunc = std::numeric_limits<double>::infinity();
    for (const auto& loop : face.boundary_loops) {
      if (loop.tag != LoopTag::Truncation) continue;
      for (int v : loop.node_ids) r_trunc = std::min(r_trunc, face.nodes[v].norm());
    }
    if (std::isfinite(r_trunc) && r_trunc > 0.0) {
      // Ends of finite total curvature carry |A|^2 dA ~ r^-3 dr, so the
      // truncation error scales as R^-2: Richardson over R/2 and R.
      double inner = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (face.nodes[i].norm() <= 0.5 * r_trunc) inner += face.a_norm_sq[i] * w[i];
      }
      ft.tail_estimate = (ft.truncated_total_curvature - inner) / 3.0;
    }
  }
  ft.total_curvature = ft.truncated_total_curvature + ft.tail_estimate;
  ft.beta = -0.5 * ft.total_curvature;
  ft.theta = ft.alpha + ft.beta;
  return ft;
}

std::array<double, 3> ThetaReport::sorted_theta() const {
  return {faces.at(order[0]).theta, faces.at(order[1]).theta, faces.at(order[2]).theta};
}

std::array<Topology, 3> ThetaReport::sorted_topology() const {
  return {faces.at(order[0]).topology, faces.at(order[1]).topology, faces.at(order[2]).topology};
}

namespace {

void sort_order(ThetaReport& r) {
  if (r.faces.size() != 3) return;
  std::array<int, 3> idx{0, 1, 2};
  std::stable_sort(idx.begin(), idx.end(),
                   [&r](int a, int b) { return r.faces[a].theta < r.faces[b].theta; });
  r.order = idx;
}

}  // namespace

ThetaReport theta_report(const YSurface& surface) {
  ThetaReport r;
  for (int f = 0; f < surface.num_faces(); ++f) {
    FaceTheta ft = face_theta(surface.faces[f]);
    ft.face = f;
    r.faces.push_back(ft);
  }
  sort_order(r);
  return r;
}

ThetaReport theta_report_from_values(const std::array<double, 3>& theta,
                                     const std::array<Topology, 3>& topology) {
  ThetaReport r;
  for (int i = 0; i < 3; ++i) {
    FaceTheta ft;
    ft.face = i;
    ft.topology = topology[i];
    ft.euler_chi = topology[i].euler_characteristic();
    ft.alpha = alpha_of(topology[i]);
    ft.theta = theta[i];
    ft.beta = theta[i] - ft.alpha;
    ft.total_curvature = -2.0 * ft.beta;
    ft.truncated_total_curvature = ft.total_curvature;
    r.faces.push_back(ft);
  }
  sort_order(r);
  return r;
}

Topology default_topology_for(double theta) {
  return theta > -2.0 * kPi ? Topology{0, 0, 0} : Topology{0, 1, 1};
}

ConstantModeForm reduced_constant_form(double theta1, double theta2, double theta3) {
  ConstantModeForm f;
  std::array<double, 3> in{theta1, theta2, theta3};
  std::array<int, 3> idx{0, 1, 2};
  std::stable_sort(idx.begin(), idx.end(), [&in](int a, int b) { return in[a] < in[b]; });
  f.permutation = idx;
  for (int i = 0; i < 3; ++i) f.sorted[i] = in[idx[i]];
  const double t1 = f.sorted[0], t2 = f.sorted[1], t3 = f.sorted[2];
  f.matrix << t1 + t3, t3, t3, t2 + t3;
  f.trace = t1 + t2 + 2.0 * t3;
  f.determinant = t1 * t2 + t3 * (t1 + t2);
  const double mean = 0.5 * f.trace;
  const double half_gap = std::hypot(0.5 * (t1 - t2), t3);
  f.eigenvalues = {mean - half_gap, mean + half_gap};
  // Sign pattern of (trace, det) fixes the number of negative eigenvalues.
  if (f.determinant < 0.0) {
    f.negative_count = 1;
  } else if (f.determinant > 0.0) {
    f.negative_count = f.trace < 0.0 ? 2 : 0;
  } else {
    f.negative_count = f.trace < 0.0 ? 1 : 0;
  }
  return f;
}

std::string to_string(Conclusion c) {
  switch (c) {
    case Conclusion::YCatenoid:
      return "Y-catenoid";
    case Conclusion::DiskAnnulusStable:
      return "disk + annulus + stable unbounded face";
    case Conclusion::IndexAtLeastTwo:
      return "contradiction: index ≥ 2";
    case Conclusion::FlatAnnulusImpossible:
      return "contradiction: flat annulus impossible";
    case Conclusion::ExtraCompactFace:
      return "contradiction: more than one compact face";
    case Conclusion::BoundaryCase:
      return "boundary case";
  }
  return "boundary case";
}

std::vector<std::string> Verdict::path() const {
  std::vector<std::string> p;
  for (const auto& r : rules) {
    if (r.decisive) p.push_back(r.id);
  }
  return p;
}

Verdict classify_index_one(const ThetaReport& report, int index_hypothesis) {
  if (report.faces.size() != 3) {
    throw StructuralError("classification needs exactly three faces, got " +
                          std::to_string(report.faces.size()));
  }
  if (index_hypothesis != 1) throw ArgumentError("the case analysis assumes Morse index one");
  for (const auto& f : report.faces) {
    if (f.theta > f.alpha + kBoundaryTol) {
      std::ostringstream os;
      os << "face " << f.face << ": theta " << f.theta << " exceeds alpha " << f.alpha
         << " (beta must be <= 0)";
      throw StructuralError(os.str());
    }
  }

  Verdict v;
  v.face_order = report.order;
  const auto th = report.sorted_theta();
  const auto topo = report.sorted_topology();
  const double t1 = th[0], t2 = th[1], t3 = th[2];
  const auto form = reduced_constant_form(t1, t2, t3);

  auto step = [&v](std::string id, std::string anchor, std::vector<std::pair<std::string, double>> in,
                   std::string outcome, bool decisive) {
    v.rules.push_back({std::move(id), std::move(anchor), std::move(in), std::move(outcome), decisive});
  };
  auto finish = [&v](Conclusion c, const std::string& rule) {
    v.conclusion = c;
    v.deciding_rule = rule;
    return v;
  };

  if (t3 < 0.0) {
    step("a", "all three constant-mode coefficients negative", {{"theta3", t3}},
         "theta3 < 0: constants with c1 + c2 + c3 = 0 give two negative directions", true);
    return finish(Conclusion::IndexAtLeastTwo, "a");
  }
  step("a", "all three constant-mode coefficients negative", {{"theta3", t3}}, "theta3 >= 0", false);

  step("b", "nonnegative coefficient forces a bounded disk", {{"theta3", t3}, {"alpha3", alpha_of(topo[2])}},
       "Sigma3 is a compact disk", true);

  const int extra_compact = (topo[0].num_ends == 0) + (topo[1].num_ends == 0);
  if (extra_compact > 0) {
    step("b2", "convex hull and half-space exclusion of further compact faces",
         {{"compact_faces", 1.0 + extra_compact}},
         extra_compact == 2 ? "three compact faces cannot keep the Y-configuration"
                            : "two compact faces with one unbounded face are excluded",
         true);
    return finish(Conclusion::ExtraCompactFace, "b2");
  }
  step("b2", "convex hull and half-space exclusion of further compact faces", {{"compact_faces", 1.0}},
       "Sigma1 and Sigma2 are unbounded", false);

  const std::vector<std::pair<std::string, double>> c_inputs{
      {"theta1", t1}, {"theta2", t2}, {"theta3", t3}, {"trace", form.trace}, {"det", form.determinant}};
  if (near(t2, -4.0 * kPi)) {
    v.boundary_flags.push_back("theta2 = -4pi: determinant test is not strict");
    step("c", "trace negative and determinant positive", c_inputs,
         "theta2 on the -4pi boundary; not classified", true);
    return finish(Conclusion::BoundaryCase, "c");
  }
  if (t2 < -4.0 * kPi) {
    step("c", "trace negative and determinant positive", c_inputs,
         "theta2 <= -4pi: two negative directions in the constant-mode form", true);
    return finish(Conclusion::IndexAtLeastTwo, "c");
  }
  step("c", "trace negative and determinant positive", c_inputs, "-4pi < theta2", false);

  if (near(t2, -2.0 * kPi)) {
    step("d", "flat unbounded face excluded", {{"theta2", t2}},
         "theta2 = -2pi: Sigma2 would be a flat punctured plane", true);
    return finish(Conclusion::FlatAnnulusImpossible, "d");
  }
  step("d", "flat unbounded face excluded", {{"theta2", t2}}, "theta2 < -2pi: Sigma2 is an annulus", false);

  // Sigma2 topologies compatible with -4pi < theta2 < -2pi (alpha2 >= theta2, alpha2 <= -2pi).
  const int budget = static_cast<int>(std::floor(1.0 - t2 / (2.0 * kPi) + 1e-9));
  for (int g = 0; 2 * g + 2 <= budget; ++g) {
    for (int e = 1; 2 * g + 2 * e <= budget; ++e) {
      for (int d = e; 2 * g + e + d <= budget; ++d) v.sigma2_admissible.push_back({g, e, d});
    }
  }

  if (near(t3, kPi)) {
    v.boundary_flags.push_back("theta3 = pi: boundary of the disk-coefficient bound");
    step("e", "disk coefficient below pi", c_inputs, "theta3 on the pi boundary; not classified", true);
    return finish(Conclusion::BoundaryCase, "e");
  }
  if (t3 < kPi) {
    step("e", "disk coefficient below pi", c_inputs,
         "theta3 < pi: trace < 0 and det > 0, two negative directions", true);
    return finish(Conclusion::IndexAtLeastTwo, "e");
  }
  step("e", "disk coefficient below pi", c_inputs, "theta3 >= pi", false);

  if (near(t3, 2.0 * kPi)) {
    v.boundary_flags.push_back("theta3 = 2pi: equality case, classified by the flat-disk rule");
    step("f", "flat disk forces reflection symmetry of the other faces", {{"theta3", t3}},
         "theta3 = 2pi: Sigma3 is a flat disk, Sigma1 and Sigma2 are symmetric annuli", true);
    return finish(Conclusion::YCatenoid, "f");
  }
  step("f", "flat disk forces reflection symmetry of the other faces", {{"theta3", t3}},
       "pi <= theta3 < 2pi", false);

  if (!is_annulus(topo[0])) {
    const std::string consistency = t1 <= -6.0 * kPi + kBoundaryTol ? "theta1 <= -6pi" : "theta1 > -6pi (inconsistent topology)";
    if (t2 < -3.0 * kPi) {
      step("g", "non-annular third face forces theta1 <= -6pi",
           {{"theta1", t1}, {"theta2", t2}, {"det", form.determinant}},
           consistency + "; theta2 < -3pi makes the determinant positive: index >= 2", true);
      return finish(Conclusion::IndexAtLeastTwo, "g");
    }
    step("g", "non-annular third face forces theta1 <= -6pi",
         {{"theta1", t1}, {"theta2", t2}, {"det", form.determinant}},
         consistency + "; -3pi <= theta2: Sigma2 is an annulus with total curvature <= 2pi", true);
  } else {
    step("g", "non-annular third face forces theta1 <= -6pi", {{"theta1", t1}},
         "Sigma1 is an annulus", false);
  }

  if (topo[0].num_ends == 1) {
    step("h", "one-ended third face", {{"ends1", 1.0}}, "Sigma1 has one end: Y-catenoid", true);
    return finish(Conclusion::YCatenoid, "h");
  }
  step("h", "one-ended third face", {{"ends1", static_cast<double>(topo[0].num_ends)}},
       "Sigma1 unbounded and Dirichlet stable", true);
  return finish(Conclusion::DiskAnnulusStable, "h");
}

ConstantsCrossCheck cross_check_constants(const YSurface& surface, const ThetaReport& report,
                                          const std::vector<double>& R_list) {
  ConstantsCrossCheck out;
  if (surface.junctions.empty()) {
    out.note = "not applicable — no junction constants";
    return out;
  }
  if (surface.junctions.size() != 1 || report.faces.size() != 3) {
    out.note = "not applicable — needs one junction and three faces";
    return out;
  }
  out.applicable = true;
  const auto th = report.sorted_theta();
  out.negative_count = reduced_constant_form(th[0], th[1], th[2]).negative_count;
  const auto& incident = surface.junctions[0].incident_faces;
  const std::array<std::array<double, 3>, 2> basis{{{1.0, -1.0, 0.0}, {1.0, 1.0, -2.0}}};
  for (double R : R_list) {
    for (const auto& cs : basis) {
      // Map sorted-theta constants onto the junction's incident-face order.
      std::array<double, 3> c{};
      for (int s = 0; s < 3; ++s) {
        const int face = report.faces[report.order[s]].face;
        for (int i = 0; i < 3; ++i) {
          if (incident[i] == face) c[i] = cs[s];
        }
      }
      const auto probe = q_of_constants(surface, c, R);
      out.rows.push_back({R, cs, probe.q_value, probe.theta_prediction, probe.gap()});
    }
  }
  return out;
}

}  // namespace ysurf
