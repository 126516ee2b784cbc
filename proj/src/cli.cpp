#include "ysurf/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "ysurf/generators.hpp"
#include "ysurf/geometry.hpp"
#include "ysurf/mesh_io.hpp"

namespace ysurf {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

bool all_positive(std::initializer_list<double> xs) {
  for (double x : xs) {
    if (!(x > 0.0) || !std::isfinite(x)) return false;
  }
  return true;
}

// Writes to config.out when set, else to the given stream.
void emit(const std::string& text, const std::string& path, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot open '" + path + "' for writing");
  f << text;
}

json topology_json(const Topology& t) {
  return {{"genus", t.genus}, {"num_ends", t.num_ends}, {"end_multiplicity_sum", t.end_multiplicity_sum}};
}

}  // namespace

void RunConfig::validate() const {
  if (!all_positive({neck_radius, half_height, truncation_u, extent, junction_length, h, angle_tol_deg})) {
    throw ArgumentError("geometry sizes, mesh size and tolerances must be positive");
  }
  if (zero_tolerance < 0.0) throw ArgumentError("zero tolerance must be positive (0 selects the default)");
  if (angular < 0) throw ArgumentError("angular resolution must be nonnegative");
  if (eigen_count < 1) throw ArgumentError("eigenvalue count must be at least 1");
  if (fourier_cap < 0) throw ArgumentError("Fourier cap must be nonnegative");
  if (threads < 1) throw ArgumentError("thread count must be at least 1");
  for (std::size_t i = 1; i < R_list.size(); ++i) {
    if (!(R_list[i] > R_list[i - 1])) throw ArgumentError("R list must be strictly increasing");
  }
  for (std::size_t i = 1; i < cutoff_R.size(); ++i) {
    if (!(cutoff_R[i] > cutoff_R[i - 1])) throw ArgumentError("cutoff R list must be strictly increasing");
  }
  for (double R : cutoff_R) {
    if (!(R > 1.0)) throw ArgumentError("cutoff radii must exceed 1");
  }
  static const std::vector<std::string> known{"plane", "catenoid", "flat_ycone", "ycatenoid"};
  if (!is_file() && std::find(known.begin(), known.end(), surface) == known.end()) {
    throw ArgumentError("unknown surface '" + surface + "'");
  }
}

double RunConfig::default_truncation() const {
  if (surface == "catenoid") return half_height;
  if (surface == "ycatenoid") return truncation_u;
  return extent;
}

YSurface build_surface(const RunConfig& c, std::optional<double> truncation) {
  const Resolution res{c.h, c.angular};
  const double t = truncation.value_or(c.default_truncation());
  if (c.is_file()) return read_surface(c.surface.substr(5));
  if (c.surface == "plane") return make_plane(t, res);
  if (c.surface == "catenoid") return make_catenoid(c.neck_radius, t, res);
  if (c.surface == "flat_ycone") return make_flat_ycone(t, c.junction_length, res);
  if (c.surface == "ycatenoid") return make_ycatenoid(c.neck_radius, t, res);
  throw ArgumentError("unknown surface '" + c.surface + "'");
}

SurfaceFamily surface_family(const RunConfig& c) {
  if (c.is_file()) throw ArgumentError("a mesh file has no truncation family");
  return [c](double R) { return build_surface(c, R); };
}

int resolve_threads(std::optional<int> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("YSURF_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

std::string to_document(const json& j) { return j.dump(1) + "\n"; }

json surface_summary(const YSurface& s, const RunConfig& c) {
  json faces = json::array();
  for (const auto& f : s.faces) {
    faces.push_back({{"nodes", f.num_nodes()},
                     {"elements", f.elements.size()},
                     {"topology", topology_json(f.topology)},
                     {"axisymmetric", f.profile.has_value()}});
  }
  json j = {{"name", s.name},
            {"source", c.surface},
            {"faces", faces},
            {"junctions", s.junctions.size()},
            {"total_nodes", s.total_nodes()},
            {"h", c.h}};
  if (!c.is_file()) j["truncation"] = c.default_truncation();
  return j;
}

json spectrum_json(const SpectrumResult& r) {
  return {{"eigenvalues", r.eigenvalues},
          {"index", r.morse_index},
          {"nullity_truncated", r.nullity},
          {"zero_tolerance", r.zero_tolerance},
          {"dimension", r.dimension},
          {"method", r.method},
          {"max_relative_residual", r.max_relative_residual},
          {"inertia_eigensolver_agree", r.counts_agree}};
}

json theta_json(const ThetaReport& report) {
  json per_face = json::array();
  for (const auto& f : report.faces) {
    per_face.push_back({{"face", f.face},
                        {"topology", topology_json(f.topology)},
                        {"euler_characteristic", f.euler_chi},
                        {"alpha", f.alpha},
                        {"total_curvature", f.total_curvature},
                        {"truncated_total_curvature", f.truncated_total_curvature},
                        {"tail_estimate", f.tail_estimate},
                        {"beta", f.beta},
                        {"theta", f.theta}});
  }
  json j = {{"per_face", per_face}};
  if (report.faces.size() == 3) {
    const auto th = report.sorted_theta();
    const auto form = reduced_constant_form(th[0], th[1], th[2]);
    j["order"] = report.order;
    j["matrix2x2"] = {{form.matrix(0, 0), form.matrix(0, 1)}, {form.matrix(1, 0), form.matrix(1, 1)}};
    j["trace"] = form.trace;
    j["det"] = form.determinant;
    j["eigenvalues"] = form.eigenvalues;
    j["negative_count"] = form.negative_count;
  }
  return j;
}

json verdict_json(const Verdict& v) {
  json rules = json::array();
  for (const auto& r : v.rules) {
    json inputs = json::object();
    for (const auto& [k, x] : r.inputs) inputs[k] = x;
    rules.push_back(
        {{"id", r.id}, {"anchor", r.anchor}, {"inputs", inputs}, {"outcome", r.outcome}, {"decisive", r.decisive}});
  }
  json adm = json::array();
  for (const auto& t : v.sigma2_admissible) adm.push_back(topology_json(t));
  return {{"rules", rules},
          {"conclusion", to_string(v.conclusion)},
          {"deciding_rule", v.deciding_rule},
          {"path", v.path()},
          {"boundary_flags", v.boundary_flags},
          {"sigma2_admissible_topologies", adm},
          {"face_order", v.face_order}};
}

// ---------------------------------------------------------------------------

int cmd_generate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  c.validate();
  const YSurface s = build_surface(c);
  const std::string doc = dump_document(surface_to_json(s));
  emit(doc, c.out, out);
  err << s.name << ": " << s.num_faces() << " face(s), " << s.junctions.size() << " junction(s), "
      << s.total_nodes() << " nodes\n";
  if (!s.junctions.empty()) {
    const auto y = check_y_configuration(s, c.angle_tol_deg);
    for (const auto& jc : y.junctions) {
      err << "junction " << jc.junction << ": max angle deviation " << jc.max_angle_deviation_deg
          << " deg, max |sum tau| " << jc.max_conormal_sum << (y.passed ? " (ok)" : " (FAILED)") << "\n";
    }
    for (const auto& f : y.failures) err << "  " << f << "\n";
    if (!y.passed) return kExitVerifyFailed;
  }
  return kExitOk;
}

json index_report(const RunConfig& c) {
  c.validate();
  SpectrumOptions opt;
  opt.modes = c.eigen_count;
  opt.zero_tolerance = c.zero_tolerance;
  const YSurface s = build_surface(c);
  json report;
  report["surface"] = surface_summary(s, c);
  const SpectrumResult r = compute_spectrum(s, opt);
  report["spectrum"] = spectrum_json(r);
  report["index"] = r.morse_index;
  report["nullity_truncated"] = r.nullity;
  report["lowest_eigenvalues"] = r.eigenvalues;

  if (!c.R_list.empty()) {
    const auto sweep = morse_index_sweep(surface_family(c), c.R_list, c.h, opt, c.threads);
    json rows = json::array();
    for (const auto& cs : sweep.cases) {
      json row = {{"R", cs.R}, {"status", cs.status}};
      if (cs.result) {
        row["index"] = cs.result->morse_index;
        row["nullity_truncated"] = cs.result->nullity;
        row["eigenvalues"] = cs.result->eigenvalues;
      }
      rows.push_back(row);
    }
    report["sweep"] = {{"rows", rows},
                       {"stabilized_index", sweep.stabilized_index ? json(*sweep.stabilized_index) : json(nullptr)},
                       {"index_monotone", sweep.index_monotone},
                       {"eigenvalues_monotone", sweep.eigenvalues_monotone},
                       {"diagnostics", sweep.diagnostics}};
    if (sweep.stabilized_index) report["index"] = *sweep.stabilized_index;
  }

  bool axisymmetric = !s.faces.empty();
  for (const auto& f : s.faces) axisymmetric = axisymmetric && f.profile.has_value();
  if (axisymmetric) {
    const auto fi = fourier_index(s, c.fourier_cap, c.eigen_count, c.zero_tolerance);
    json modes = json::array();
    for (const auto& m : fi.modes) {
      modes.push_back({{"k", m.k}, {"n_minus", m.inertia.n_minus}, {"n_zero", m.inertia.n_zero},
                       {"eigenvalues", m.eigenvalues}});
    }
    report["fourier"] = {{"total_index", fi.total_index},
                         {"total_nullity", fi.total_nullity},
                         {"modes", modes},
                         {"certified_from", fi.certified_from},
                         {"certificate", fi.certificate}};
  }
  report["theta"] = theta_json(theta_report(s));
  return report;
}

int cmd_index(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  const json report = index_report(c);
  emit(to_document(report), c.out, out);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  err << "index " << report["index"] << " (" << report["spectrum"]["method"].get<std::string>() << ", " << secs
      << " s)\n";
  return kExitOk;
}

namespace {

ThetaReport theta_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open theta file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw StructuralError(std::string("cannot parse theta file: ") + e.what());
  }
  try {
    const json& values = doc.is_array() ? doc : doc.at("theta");
    if (!values.is_array() || values.size() != 3) throw StructuralError("theta file needs exactly three values");
    const double unit = (doc.is_object() && doc.value("units", std::string("radians")) == "pi") ? kPi : 1.0;
    std::array<double, 3> th{};
    for (int i = 0; i < 3; ++i) th[i] = values[i].get<double>() * unit;
    std::array<Topology, 3> topo{};
    if (doc.is_object() && doc.contains("topology")) {
      const auto& t = doc["topology"];
      if (t.size() != 3) throw StructuralError("theta file topology needs three entries");
      for (int i = 0; i < 3; ++i) topo[i] = {t[i].at(0).get<int>(), t[i].at(1).get<int>(), t[i].at(2).get<int>()};
    } else {
      for (int i = 0; i < 3; ++i) topo[i] = default_topology_for(th[i]);
    }
    return theta_report_from_values(th, topo);
  } catch (const json::exception& e) {
    throw StructuralError(std::string("malformed theta file: ") + e.what());
  }
}

}  // namespace

json classify_report(const RunConfig& c) {
  c.validate();
  json report;
  ThetaReport tr;
  if (!c.theta_file.empty()) {
    tr = theta_from_file(c.theta_file);
    report["surface"] = {{"source", "theta-file:" + c.theta_file}};
  } else {
    const YSurface s = build_surface(c);
    if (s.num_faces() != 3) {
      throw StructuralError("classification needs three faces, surface has " + std::to_string(s.num_faces()));
    }
    if (s.junctions.size() != 1) {
      throw StructuralError("classification needs exactly one junction, surface has " +
                            std::to_string(s.junctions.size()));
    }
    if (!s.junctions[0].closed) throw StructuralError("junction is not compact (open curve)");
    report["surface"] = surface_summary(s, c);
    tr = theta_report(s);
  }
  const Verdict v = classify_index_one(tr, 1);
  report["theta"] = theta_json(tr);
  report["verdict"] = verdict_json(v);
  return report;
}

int cmd_classify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const json report = classify_report(c);
  emit(to_document(report), c.out, out);
  err << "verdict: " << report["verdict"]["conclusion"].get<std::string>() << " (rule "
      << report["verdict"]["deciding_rule"].get<std::string>() << ")\n";
  return kExitOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  c.validate();
  if (c.R_list.empty()) throw ArgumentError("sweep needs a nonempty --R list");
  SpectrumOptions opt;
  opt.modes = c.eigen_count;
  opt.zero_tolerance = c.zero_tolerance;
  const auto sweep = morse_index_sweep(surface_family(c), c.R_list, c.h, opt, c.threads);
  std::ostringstream csv;
  write_spectrum_csv(spectrum_rows(sweep), csv);
  emit(csv.str(), c.out, out);
  for (const auto& d : sweep.diagnostics) err << "diagnostic: " << d << "\n";
  if (sweep.stabilized_index) err << "stabilized index " << *sweep.stabilized_index << "\n";

  // Constants against the theta prediction, on a mesh reaching past R^2.
  // The flat cone has no curvature to resolve: its largest swept mesh is used as is.
  if ((c.surface == "ycatenoid" || c.surface == "flat_ycone") && !c.cutoff_R.empty()) {
    YSurface big;
    if (c.surface == "ycatenoid") {
      const double reach = c.cutoff_R.back() * c.cutoff_R.back();
      const auto prof = ycatenoid_profile(c.neck_radius);
      const double u_max = std::acosh(1.05 * reach / prof.a) + 0.1;
      big = make_ycatenoid(c.neck_radius, std::max(u_max, prof.u0 + 1.0), {std::max(c.h, 0.05), c.angular});
    } else {
      big = build_surface(c, c.R_list.back());
    }
    const auto tr = theta_report(big);
    const auto cc = cross_check_constants(big, tr, c.cutoff_R);
    std::ostringstream ccsv;
    ccsv << "R,Q_value,theta_prediction,gap,c\n";
    char buf[256];
    for (const auto& row : cc.rows) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%g;%g;%g\n", row.R, row.q_value, row.theta_prediction,
                    row.gap, row.c_sorted[0], row.c_sorted[1], row.c_sorted[2]);
      ccsv << buf;
    }
    const std::string path = !c.constants_out.empty() ? c.constants_out
                             : !c.out.empty()         ? c.out + ".constants.csv"
                                                      : std::string();
    if (path.empty()) {
      err << ccsv.str();
    } else {
      emit(ccsv.str(), path, err);
    }
  } else {
    err << "constants cross-check: not applicable to this surface\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

namespace {

struct Suite {
  std::vector<CheckItem>& items;
  std::string name;

  void check(const std::string& what, bool ok, double measured, const std::string& bound,
             const std::string& detail = "") {
    items.push_back({name, what, ok, measured, bound, detail});
  }
  // Runs a block; an exception becomes a failed item instead of aborting the suite.
  template <class F>
  void guard(const std::string& what, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      items.push_back({name, what, false, std::numeric_limits<double>::quiet_NaN(), "no exception", e.what()});
    }
  }
};

void verify_file(const RunConfig& c, std::vector<CheckItem>& items) {
  Suite core{items, "ysurface_core"};
  YSurface s;
  try {
    s = build_surface(c);
  } catch (const std::exception& e) {
    core.check("read mesh", false, 0.0, "readable", e.what());
    return;
  }
  const auto violations = validate_surface(s);
  for (const auto& v : violations) {
    std::ostringstream os;
    os << v.what << " (face " << v.face << ", node " << v.node << ", value " << v.value << ")";
    core.check("FacePatch invariant", false, v.value, "satisfied", os.str());
  }
  if (violations.empty()) core.check("FacePatch invariants", true, 0.0, "no violations");
  for (int f = 0; f < s.num_faces(); ++f) {
    core.guard("Gauss-Bonnet face " + std::to_string(f), [&] {
      const auto gb = gauss_bonnet_report(s, f);
      core.check("Gauss-Bonnet face " + std::to_string(f), gb.relative_residual <= 1e-3, gb.relative_residual,
                 "<= 1e-3");
    });
  }
}

}  // namespace

std::vector<CheckItem> verify_suite(const RunConfig& c) {
  c.validate();
  std::vector<CheckItem> items;
  if (c.is_file()) {
    verify_file(c, items);
    return items;
  }
  const Resolution res{c.h, c.angular};
  const double r0 = c.neck_radius;

  Suite core{items, "ysurface_core"};
  std::vector<std::pair<std::string, YSurface>> family;
  core.guard("generate", [&] {
    family.emplace_back("catenoid", make_catenoid(r0, c.half_height, res));
    family.emplace_back("ycatenoid", make_ycatenoid(r0, c.truncation_u, res));
    family.emplace_back("flat_ycone", make_flat_ycone(c.extent, c.junction_length, res));
    family.emplace_back("plane", make_plane(c.extent, res));
  });
  for (const auto& [name, s] : family) {
    const auto v = validate_surface(s);
    core.check(name + ": structural invariants", v.empty(), static_cast<double>(v.size()), "0 violations",
               v.empty() ? "" : v.front().what);
    double worst = 0.0;
    core.guard(name + ": Gauss-Bonnet", [&] {
      for (int f = 0; f < s.num_faces(); ++f) worst = std::max(worst, gauss_bonnet_report(s, f).relative_residual);
      core.check(name + ": Gauss-Bonnet relative residual", worst <= 1e-3, worst, "<= 1e-3");
    });
    core.guard(name + ": minimality", [&] {
      double h_max = 0.0;
      for (const auto& f : s.faces) h_max = std::max(h_max, verify_minimality(f, 1e-9).max_abs_h);
      core.check(name + ": analytic mean curvature", h_max <= 1e-9, h_max, "<= 1e-9");
    });
    if (!s.junctions.empty()) {
      core.guard(name + ": Y-configuration", [&] {
        const auto y = check_y_configuration(s, c.angle_tol_deg);
        core.check(name + ": Y-configuration", y.passed, y.junctions.front().max_conormal_sum, "|sum tau| <= 1e-8",
                   y.failures.empty() ? "" : y.failures.front());
      });
    }
  }
  core.guard("density", [&] {
    const auto cone = make_flat_ycone(c.extent, c.junction_length, res);
    const auto d = density_report(cone, Vec3(0, 0, 0), {0.2 * std::min(c.extent, 0.5 * c.junction_length)});
    core.check("flat_ycone: junction density", std::abs(d.ratios.back() - 1.5) <= 0.05, d.ratios.back(),
               "1.5 +- 0.05");
    const auto cat = make_catenoid(1.0, 6.0, {std::max(c.h, 0.05), c.angular});
    const auto di = density_report(cat, AtInfinity{}, {150.0});
    core.check("catenoid: density at infinity", std::abs(di.ratios.back() - 2.0) <= 0.05, di.ratios.back(),
               "2 +- 0.05");
  });

  Suite qf{items, "quadform"};
  qf.guard("index form", [&] {
    const auto yc = make_ycatenoid(r0, c.truncation_u, res);
    const auto mats = assemble_index_form(yc);
    const SparseMatrix K = mats.index_form();
    const double asym = (SparseMatrix(K.transpose()) - K).norm();
    qf.check("symmetry of S - P - J", asym <= 1e-12 * K.norm(), asym, "<= 1e-12 ||K||");
    const auto red = apply_compatibility(mats, yc);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      Eigen::VectorXd x(red.dim());
      for (int i = 0; i < x.size(); ++i) x[i] = g(rng);
      const Eigen::VectorXd f = red.reducer.expand(x);
      const double qm = f.dot(K * f);
      const double qq = evaluate_Q(NormalField::from_stacked(yc, f), yc);
      worst = std::max(worst, std::abs(qm - qq) / std::max(1.0, std::abs(qq)));
    }
    qf.check("matrix form vs quadrature", worst <= 1e-10, worst, "<= 1e-10 relative");
  });
  qf.guard("cutoff", [&] {
    const auto cat = make_catenoid(1.0, 20.0, {0.1, 0});
    double worst = 0.0;
    for (double R : {10.0, 100.0, 1e4}) worst = std::max(worst, build_log_cutoff(cat, R).max_gradient_ratio);
    qf.check("cutoff gradient |x||grad phi| log R", worst <= 1.1 * SmoothStep{}.bound(), worst, "<= 1.1 C");
  });
  qf.guard("constants gap", [&] {
    const auto prof = ycatenoid_profile(1.0);
    const auto big = make_ycatenoid(1.0, std::acosh(1.05e4 / prof.a) + 0.1, {0.05, 0});
    const double g10 = q_of_constants(big, {1, 1, -2}, 10.0).gap();
    const double g100 = q_of_constants(big, {1, 1, -2}, 100.0).gap();
    const double ratio = g10 / g100;
    qf.check("constants gap ratio R=10 -> 100", ratio >= 1.6 && ratio <= 2.4, ratio, "[1.6, 2.4]");
  });

  Suite sp{items, "spectra"};
  SpectrumResult ycr;
  sp.guard("index", [&] {
    const auto cone = compute_spectrum(make_flat_ycone(c.extent, c.junction_length, res));
    sp.check("flat_ycone index", cone.morse_index == 0, cone.morse_index, "0");
    sp.check("flat_ycone lowest eigenvalue", cone.eigenvalues.front() >= -1e-10, cone.eigenvalues.front(),
             ">= -1e-10");
    const auto cat = compute_spectrum(make_catenoid(r0, c.half_height, res));
    sp.check("catenoid index", cat.morse_index == 1, cat.morse_index, "1");
    ycr = compute_spectrum(make_ycatenoid(r0, c.truncation_u, res));
    sp.check("ycatenoid index", ycr.morse_index == 1, ycr.morse_index, "1");
    const bool agree = cone.counts_agree && cat.counts_agree && ycr.counts_agree;
    sp.check("inertia vs eigensolver counts", agree, agree ? 0.0 : 1.0, "agree");
    const double res_max = std::max({cone.max_relative_residual, cat.max_relative_residual, ycr.max_relative_residual});
    sp.check("eigenpair residuals", res_max <= 1e-8, res_max, "<= 1e-8");
  });
  sp.guard("fourier", [&] {
    for (const auto& s : {make_catenoid(r0, c.half_height, res), make_ycatenoid(r0, c.truncation_u, res)}) {
      const auto fi = fourier_index(s, c.fourier_cap);
      const auto two = symmetric_2d_eigenvalues(s, 5);
      double worst = 0.0;
      for (std::size_t k = 0; k < two.size() && k < fi.modes[0].eigenvalues.size(); ++k) {
        worst = std::max(worst, std::abs(fi.modes[0].eigenvalues[k] - two[k]) / std::abs(two[k]));
      }
      sp.check(s.name + ": Fourier mode 0 vs 2-D symmetric", worst <= 0.02, worst, "<= 2%");
      int higher = 0;
      for (const auto& m : fi.modes) higher += m.k > 0 ? m.inertia.n_minus : 0;
      sp.check(s.name + ": negative direction in mode 0 only",
               fi.modes[0].inertia.n_minus == 1 && higher == 0 && fi.total_index == 1, fi.total_index,
               "mode 0: 1, others 0");
    }
  });
  sp.guard("monotonicity", [&] {
    const double u_lo = std::max(ycatenoid_profile(r0).u0 + 1.0, c.truncation_u - 1.0);
    const auto lo = compute_spectrum(make_ycatenoid(r0, u_lo, res));
    const auto hi = compute_spectrum(make_ycatenoid(r0, u_lo + 1.0, res));
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < std::min(lo.eigenvalues.size(), hi.eigenvalues.size()); ++k) {
      worst = std::max(worst, (hi.eigenvalues[k] - lo.eigenvalues[k]) / std::abs(lo.eigenvalues[k]));
    }
    sp.check("Dirichlet monotonicity (ycatenoid)", worst <= 1e-3, worst, "<= 1e-3 relative increase");
  });

  Suite cl{items, "classify"};
  cl.guard("constant form", [&] {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-12.0 * kPi, 2.0 * kPi);
    double worst = 0.0;
    int mismatches = 0;
    for (int t = 0; t < 1000; ++t) {
      const double a = u(rng), b = u(rng), d = u(rng);
      const auto f = reduced_constant_form(a, b, d);
      const double t1 = f.sorted[0], t2 = f.sorted[1], t3 = f.sorted[2];
      worst = std::max({worst, std::abs(f.trace - (t1 + t2 + 2 * t3)),
                        std::abs(f.determinant - (t1 * t2 + t3 * (t1 + t2)))});
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(f.matrix);
      const int brute = (es.eigenvalues().array() < 0.0).count();
      mismatches += brute != f.negative_count;
    }
    cl.check("trace/det identities", worst <= 1e-12 * 24 * kPi * 12 * kPi, worst, "<= 1e-12 (scaled)");
    cl.check("negative_count vs eigen signs", mismatches == 0, mismatches, "0 mismatches");
  });
  cl.guard("ycatenoid verdict", [&] {
    const auto yc = make_ycatenoid(r0, c.truncation_u, res);
    const auto tr = theta_report(yc);
    const auto v = classify_index_one(tr);
    cl.check("ycatenoid verdict", v.conclusion == Conclusion::YCatenoid, tr.sorted_theta()[2] / kPi,
             "Y-catenoid", to_string(v.conclusion));
    const auto th = tr.sorted_theta();
    const int nc = reduced_constant_form(th[0], th[1], th[2]).negative_count;
    if (ycr.dimension > 0) {
      cl.check("constant-mode lower bound", nc <= ycr.morse_index && nc == 1, nc, "== index (1)");
    }
  });

  Suite io{items, "cli_io"};
  io.guard("round trip", [&] {
    const auto yc = make_ycatenoid(r0, c.truncation_u, res);
    const std::string first = dump_document(surface_to_json(yc));
    const std::string second = dump_document(surface_to_json(surface_from_json(json::parse(first))));
    io.check("mesh round trip byte identity", first == second, first == second ? 0.0 : 1.0, "identical");
  });
  return items;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream&) {
  const auto items = verify_suite(c);
  int failed = 0;
  std::ostringstream os;
  for (const auto& it : items) {
    failed += !it.passed;
    os << (it.passed ? "PASS " : "FAIL ") << it.suite << " / " << it.name << ": measured " << it.measured
       << " (bound " << it.bound << ")";
    if (!it.detail.empty()) os << " — " << it.detail;
    os << "\n";
  }
  os << (failed ? "FAILED " : "OK ") << items.size() - failed << "/" << items.size() << " checks passed\n";
  emit(os.str(), c.out, out);
  return failed ? kExitVerifyFailed : kExitOk;
}

// ---------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Morse index and theta-invariant classification of Y-surfaces"};
  app.set_help_flag("--help", "print help");  // -h is the mesh size
  app.require_subcommand(1);
  RunConfig cfg;
  int threads_flag = 0;
  double a_flag = 0.0;

  auto common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--surface", cfg.surface, "plane | catenoid | flat_ycone | ycatenoid | file:<path>");
    sub->add_option("--r0", cfg.neck_radius, "junction radius of the Y-catenoid");
    sub->add_option("--a", a_flag, "waist radius of the catenoid");
    sub->add_option("--half-height", cfg.half_height, "catenoid truncation |z| <= value");
    sub->add_option("--trunc-u", cfg.truncation_u, "Y-catenoid truncation in the catenary parameter");
    sub->add_option("--extent", cfg.extent, "flat surface radius / strip width");
    sub->add_option("--junction-length", cfg.junction_length, "flat Y-cone junction length");
    sub->add_option("--h", cfg.h, "mesh size in the generating parameter");
    sub->add_option("--angular", cfg.angular, "angular samples (0: automatic)");
    sub->add_option("--R", cfg.R_list, "truncation sweep values")->delimiter(',');
    sub->add_option("--cutoff-R", cfg.cutoff_R, "log-cutoff radii for the constants check")->delimiter(',');
    sub->add_option("--eigs", cfg.eigen_count, "number of lowest eigenvalues");
    sub->add_option("--modes", cfg.fourier_cap, "Fourier mode cap");
    sub->add_option("--tol-zero", cfg.zero_tolerance, "zero tolerance (default: 1e-8 max |diag K|)");
    sub->add_option("--angle-tol", cfg.angle_tol_deg, "junction angle tolerance in degrees");
    sub->add_option("--out", cfg.out, "output path (default: stdout)");
    sub->add_option("--constants-out", cfg.constants_out, "constants convergence CSV (sweep)");
    sub->add_option("--theta-file", cfg.theta_file, "classify from theta values instead of a mesh");
    sub->add_option("--threads", threads_flag, "worker threads (mirrors YSURF_THREADS)");
  };
  auto* gen = app.add_subcommand("generate", "write a mesh exchange document");
  auto* idx = app.add_subcommand("index", "Morse index report");
  auto* cls = app.add_subcommand("classify", "theta invariants and the index-one case analysis");
  auto* swp = app.add_subcommand("sweep", "truncation sweep CSV");
  auto* ver = app.add_subcommand("verify", "run the invariant suites");
  for (auto* s : {gen, idx, cls, swp, ver}) common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitArgument;
  }
  try {
    cfg.threads = resolve_threads(threads_flag > 0 ? std::optional<int>(threads_flag) : std::nullopt);
    if (threads_flag < 0) throw ArgumentError("thread count must be at least 1");
    if (a_flag != 0.0) {
      if (!(a_flag > 0.0)) throw ArgumentError("catenoid waist must be positive");
      cfg.neck_radius = a_flag;
    }
    if (gen->parsed()) return cmd_generate(cfg, out, err);
    if (idx->parsed()) return cmd_index(cfg, out, err);
    if (cls->parsed()) return cmd_classify(cfg, out, err);
    if (swp->parsed()) return cmd_sweep(cfg, out, err);
    if (ver->parsed()) return cmd_verify(cfg, out, err);
  } catch (const StructuralError& e) {
    err << "structural error: " << e.what() << "\n";
    return kExitStructural;
  } catch (const ArgumentError& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitArgument;
  } catch (const SpectralError& e) {
    err << "spectral failure: " << e.what() << "\n";
    return kExitSpectral;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitStructural;
  }
  return kExitArgument;
}

}  // namespace ysurf
