#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ysurf/generators.hpp"
#include "ysurf/geometry.hpp"
#include "ysurf/mesh_io.hpp"

using namespace ysurf;
using std::numbers::pi;

namespace {

// Bisection on the 120-degree balance: the catenary slope dr/dz = sinh(u)
// must equal tan(30 deg) where it meets the disk.
double balance_root() {
  double lo = 0.0, hi = 2.0;
  const double target = std::tan(pi / 6.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::sinh(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Composite Simpson on [a, b].
template <class F>
double simpson(F f, double a, double b, int n = 4000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double total_curvature(const FacePatch& f) {
  double t = 0.0;
  for (int i = 0; i < f.num_nodes(); ++i) t += f.a_norm_sq[i] * f.area_weights[i];
  return t;
}

Vec3 catenoid_map(double u, double v) { return {std::cosh(u) * std::cos(v), std::cosh(u) * std::sin(v), u}; }

}  // namespace

TEST_CASE("catenoid neck radius and curvature at the neck") {
  const auto cat = make_catenoid(1.0, 1.0, {0.05, 0});
  const auto& p = *cat.faces[0].profile;
  double r_min = 1e9;
  for (const auto& s : p.samples) r_min = std::min(r_min, s.r);
  CHECK(r_min == doctest::Approx(1.0).epsilon(1e-14));

  // Finite-difference fundamental forms at u = 0.
  const double step = 1e-3;
  const auto imm = sample_immersion(catenoid_map, -step, 0.0, 3, 3, step);
  const auto forms = fundamental_forms(imm, step);
  REQUIRE(forms.size() == 1);
  CHECK(forms[0].a_norm_sq == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(std::abs(forms[0].mean_curvature) < 1e-5);
}

TEST_CASE("fundamental forms converge at second order") {
  const double u = 0.7;
  const double exact = -1.0 / std::pow(std::cosh(u), 4);
  std::vector<double> errs;
  const std::vector<double> steps{0.08, 0.04, 0.02};
  for (double st : steps) {
    const auto imm = sample_immersion(catenoid_map, u - st, 0.3, 3, 3, st);
    errs.push_back(std::abs(fundamental_forms(imm, st)[0].gauss_curvature - exact));
  }
  for (int i = 0; i + 1 < 3; ++i) {
    const double slope = std::log(errs[i] / errs[i + 1]) / std::log(2.0);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.15));
  }
}

TEST_CASE("sphere curvature and the minimality check") {
  const double rho = 2.0;
  auto sphere = [rho](double th, double ph) {
    return Vec3(rho * std::sin(th) * std::cos(ph), rho * std::sin(th) * std::sin(ph), rho * std::cos(th));
  };
  const double st = 1e-3;
  const auto f = fundamental_forms(sample_immersion(sphere, 1.0, 0.5, 3, 3, st), st)[0];
  CHECK(f.a_norm_sq == doctest::Approx(2.0 / (rho * rho)).epsilon(1e-5));
  CHECK(std::abs(f.mean_curvature) == doctest::Approx(2.0 / rho).epsilon(1e-5));

  const auto cap = make_sphere_cap(rho, 1.0, {0.05, 0});
  const auto rep = verify_minimality(cap.faces[0], 1e-6);
  CHECK_FALSE(rep.passed);
  CHECK(rep.max_abs_h == doctest::Approx(2.0 / rho).epsilon(1e-9));
  CHECK_FALSE(rep.offending_nodes.empty());
}

TEST_CASE("generated minimal faces satisfy |A|^2 = -2K and H = 0") {
  const auto cat = make_catenoid(1.0, 3.0, {0.05, 0});
  CHECK(verify_minimality(cat.faces[0], 1e-6).passed);
  const auto yc = make_ycatenoid(1.0, 3.0, {0.05, 0});
  for (const auto& f : yc.faces) CHECK(verify_minimality(f, 1e-6).passed);
  const auto cone = make_flat_ycone(1.0, 1.0, {0.05, 0});
  for (const auto& f : cone.faces) {
    CHECK(verify_minimality(f, 0.0).max_abs_h == 0.0);
    for (double a : f.a_norm_sq) CHECK(a == 0.0);
  }
  // |A|^2 against -2K from finite differences at a few profile points.
  const auto& p = *cat.faces[0].profile;
  for (std::size_t j = 5; j < p.samples.size(); j += 37) {
    const double u = p.samples[j].z;  // a = 1
    const double st = 1e-3;
    const auto fm = fundamental_forms(sample_immersion(catenoid_map, u - st, 0.0, 3, 3, st), st)[0];
    CHECK(std::abs(p.samples[j].a_norm_sq + 2.0 * fm.gauss_curvature) < 1e-5);
  }
}

TEST_CASE("catenoid total curvature tends to 8 pi") {
  // Quadrature oracle: int |A|^2 dA = 2 pi int 2 sech^2 u du over [-H, H].
  for (double H : {2.0, 4.0}) {
    const auto cat = make_catenoid(1.0, H, {0.02, 0});
    const double oracle = 2.0 * pi * simpson([](double u) { return 2.0 / std::pow(std::cosh(u), 2); }, -H, H);
    CHECK(total_curvature(cat.faces[0]) == doctest::Approx(oracle).epsilon(2e-3));
  }
  const double limit = 2.0 * pi * simpson([](double u) { return 2.0 / std::pow(std::cosh(u), 2); }, -30, 30);
  CHECK(limit == doctest::Approx(8.0 * pi).epsilon(1e-10));
}

TEST_CASE("Y-catenoid profile constants") {
  const auto p = ycatenoid_profile(1.0);
  const double u0 = balance_root();
  CHECK(p.u0 == doctest::Approx(u0).epsilon(1e-12));
  CHECK(p.u0 == doctest::Approx(0.549306).epsilon(1e-6));
  CHECK(p.a == doctest::Approx(1.0 / std::cosh(u0)).epsilon(1e-12));
  CHECK(p.a == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  CHECK(std::tanh(p.u0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("Y-catenoid structure and junction data") {
  const auto yc = make_ycatenoid(1.0, 3.0, {0.05, 0});
  REQUIRE(yc.num_faces() == 3);
  REQUIRE(yc.junctions.size() == 1);
  const auto& j = yc.junctions[0];
  for (int k = 0; k < j.num_samples(); ++k) {
    const Vec3 sum = j.conormals[0][k] + j.conormals[1][k] + j.conormals[2][k];
    CHECK(sum.norm() <= 1e-12);
    CHECK(j.curvature_vector[k].norm() == doctest::Approx(1.0).epsilon(1e-12));
    // points toward the axis
    CHECK(j.curvature_vector[k].dot(j.samples[k]) < 0.0);
  }
  CHECK(total_curvature(yc.faces[2]) == 0.0);
  // Each catenoidal face: int |A|^2 = 2 pi (tanh u - tanh u0) -> 2 pi.
  const auto p = ycatenoid_profile(1.0);
  const auto fine = make_ycatenoid(1.0, 3.0, {0.02, 0});
  const double oracle = 2.0 * pi * 2.0 * (std::tanh(3.0) - std::tanh(p.u0));
  CHECK(total_curvature(fine.faces[0]) == doctest::Approx(oracle).epsilon(2e-3));
  CHECK(total_curvature(fine.faces[1]) == doctest::Approx(oracle).epsilon(2e-3));
  CHECK(2.0 * pi * 2.0 * (1.0 - 0.5) == doctest::Approx(2.0 * pi));

  CHECK_THROWS_AS(make_ycatenoid(1.0, 0.3, {0.05, 0}), ArgumentError);
  CHECK_THROWS_AS(make_ycatenoid(-1.0, 3.0, {0.05, 0}), ArgumentError);
}

TEST_CASE("flat Y-cone junction") {
  const auto cone = make_flat_ycone(1.0, 1.0, {0.05, 0});
  REQUIRE(cone.num_faces() == 3);
  const auto& j = cone.junctions[0];
  CHECK_FALSE(j.closed);
  for (int k = 0; k < j.num_samples(); ++k) {
    CHECK((j.conormals[0][k] + j.conormals[1][k] + j.conormals[2][k]).norm() <= 1e-12);
    CHECK(j.curvature_vector[k].norm() == 0.0);
  }
}

TEST_CASE("Y-configuration checks") {
  const auto cone = make_flat_ycone(1.0, 1.0, {0.05, 0});
  const auto rc = check_y_configuration(cone, 0.1);
  CHECK(rc.passed);
  CHECK(rc.junctions[0].max_angle_deviation_deg <= 1e-10);

  const auto yc = make_ycatenoid(1.0, 3.0, {0.02, 0});
  const auto ry = check_y_configuration(yc, 0.1);
  CHECK(ry.passed);
  CHECK(ry.junctions[0].max_angle_deviation_deg <= 0.1);
  CHECK(ry.junctions[0].max_conormal_sum <= 1e-8);

  // Rotate one conormal so two faces meet at 90 degrees.
  auto bent = cone;
  auto& jb = bent.junctions[0];
  for (int k = 0; k < jb.num_samples(); ++k) {
    const Vec3 t = jb.tangent[k];
    jb.conormals[1][k] = t.cross(jb.conormals[0][k]).normalized();
  }
  const auto rb = check_y_configuration(bent, 0.1);
  CHECK_FALSE(rb.passed);
  CHECK_FALSE(rb.failures.empty());

  const auto cat = make_catenoid(1.0, 2.0, {0.1, 0});
  CHECK_THROWS_AS(check_y_configuration(cat, 0.1), StructuralError);
}

TEST_CASE("Gauss-Bonnet accounting") {
  SUBCASE("flat disk") {
    const auto plane = make_plane(1.0, {0.05, 0});
    const auto gb = gauss_bonnet_report(plane, 0);
    CHECK(gb.int_k == 0.0);
    double ring = 0.0;
    for (const auto& l : gb.loops) ring += l.integral;
    CHECK(ring == doctest::Approx(2.0 * pi).epsilon(1e-12));
    CHECK(gb.relative_residual <= 1e-12);
  }
  SUBCASE("Y-catenoid disk uses k = -H.tau = 1 on the junction") {
    const auto yc = make_ycatenoid(1.0, 3.0, {0.05, 0});
    const auto gb = gauss_bonnet_report(yc, 2);
    REQUIRE(gb.loops.size() == 1);
    CHECK(gb.loops[0].tag == LoopTag::Junction);
    CHECK(gb.loops[0].integral == doctest::Approx(2.0 * pi).epsilon(1e-3));
  }
  SUBCASE("residuals at h = 0.02 and refinement order") {
    auto worst = [](const YSurface& s) {
      double w = 0.0;
      for (int f = 0; f < s.num_faces(); ++f) w = std::max(w, gauss_bonnet_report(s, f).relative_residual);
      return w;
    };
    const double cat_c = worst(make_catenoid(1.0, 3.0, {0.04, 0}));
    const double cat_f = worst(make_catenoid(1.0, 3.0, {0.02, 0}));
    const double yc_c = worst(make_ycatenoid(1.0, 3.0, {0.04, 0}));
    const double yc_f = worst(make_ycatenoid(1.0, 3.0, {0.02, 0}));
    CHECK(cat_f <= 1e-3);
    CHECK(yc_f <= 1e-3);
    CHECK(std::log(cat_c / cat_f) / std::log(2.0) >= 1.0);
    CHECK(std::log(yc_c / yc_f) / std::log(2.0) >= 1.0);
    CHECK(worst(make_flat_ycone(1.0, 1.0, {0.02, 0})) <= 1e-12);
  }
  SUBCASE("coarse mesh misses the bound") {
    const auto cat = make_catenoid(1.0, 3.0, {0.3, 0});
    CHECK(gauss_bonnet_report(cat, 0).relative_residual > 1e-3);
  }
}

TEST_CASE("Euler characteristic of generated meshes") {
  CHECK(euler_characteristic(make_catenoid(1.0, 2.0, {0.1, 0}).faces[0]) == 0);
  CHECK(euler_characteristic(make_plane(1.0, {0.1, 0}).faces[0]) == 1);
  const auto yc = make_ycatenoid(1.0, 2.0, {0.1, 0});
  CHECK(euler_characteristic(yc.faces[0]) == 0);
  CHECK(euler_characteristic(yc.faces[2]) == 1);
}

TEST_CASE("density ratios") {
  const auto plane = make_plane(2.0, {0.05, 0});
  for (double r : density_report(plane, Vec3(0, 0, 0), {0.1, 0.5, 1.0}).ratios) {
    CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto cone = make_flat_ycone(1.0, 1.0, {0.05, 0});
  for (double r : density_report(cone, Vec3(0, 0, 0), {0.05, 0.2, 0.4}).ratios) {
    CHECK(std::abs(r - 1.5) <= 0.05);
  }
  // Regular interior point of a strip
  const auto d1 = density_report(cone, Vec3(0.5, 0.0, 0.0), {0.05});
  CHECK(std::abs(d1.ratios[0] - 1.0) <= 0.05);

  const auto cat = make_catenoid(1.0, 6.0, {0.05, 0});
  const auto di = density_report(cat, AtInfinity{}, {25.0, 50.0, 150.0});
  CHECK(di.ratios[0] < di.ratios[1]);
  CHECK(di.ratios[1] < di.ratios[2]);
  CHECK(std::abs(di.ratios.back() - 2.0) <= 0.05);
}

TEST_CASE("triangle-disk clipping") {
  using V2 = Eigen::Vector2d;
  // Triangle inside the disk: plain area.
  CHECK(triangle_disk_area(V2(0, 0), V2(0.1, 0), V2(0, 0.1), 1.0) == doctest::Approx(0.005).epsilon(1e-14));
  // Large triangle containing the disk: pi r^2.
  CHECK(triangle_disk_area(V2(-10, -10), V2(30, -10), V2(-10, 30), 1.0) == doctest::Approx(pi).epsilon(1e-12));
  // Quarter disk from a right triangle at the origin.
  CHECK(triangle_disk_area(V2(0, 0), V2(5, 0), V2(0, 5), 1.0) == doctest::Approx(pi / 4).epsilon(1e-12));
}

TEST_CASE("mesh document round trip") {
  for (const auto& s : {make_ycatenoid(1.0, 2.0, {0.1, 0}), make_flat_ycone(1.0, 1.0, {0.1, 0}),
                        make_catenoid(1.0, 1.5, {0.1, 0})}) {
    const std::string first = dump_document(surface_to_json(s));
    const auto back = surface_from_json(nlohmann::json::parse(first));
    const std::string second = dump_document(surface_to_json(back));
    CHECK(first == second);
    CHECK(back.num_faces() == s.num_faces());
    CHECK(back.faces[0].nodes[3] == s.faces[0].nodes[3]);
  }
  CHECK_THROWS_AS(surface_from_json(nlohmann::json::parse(R"({"faces": 3})")), StructuralError);
}

TEST_CASE("structural validation names the offending node") {
  auto s = make_plane(1.0, {0.1, 0});
  CHECK(validate_surface(s).empty());
  s.faces[0].normal[7] *= 1.5;
  const auto v = validate_surface(s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].what == "non-unit normal");
  CHECK(v[0].face == 0);
  CHECK(v[0].node == 7);
}
