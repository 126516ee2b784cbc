#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "ysurf/classify.hpp"
#include "ysurf/generators.hpp"

using namespace ysurf;
using std::numbers::pi;

namespace {

constexpr Topology kDisk{0, 0, 0};
constexpr Topology kAnnulus{0, 1, 1};
constexpr Topology kTwoEnds{0, 2, 2};

int eigen_sign_count(double t1, double t2, double t3) {
  Eigen::Matrix2d m;
  m << t1 + t3, t3, t3, t2 + t3;
  const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(m).eigenvalues();
  return (ev[0] < 0) + (ev[1] < 0);
}

struct Expected {
  Conclusion conclusion;
  std::string rule;
};

// Inequalities of the case analysis, written out independently of the classifier.
Expected brute_force(double t1, double t2, double t3, Topology top1, Topology top2) {
  const double eps = 1e-9 * pi;
  auto on = [eps](double x, double y) { return std::abs(x - y) <= eps; };
  if (t3 < 0) return {Conclusion::IndexAtLeastTwo, "a"};
  if (top1.num_ends == 0 || top2.num_ends == 0) return {Conclusion::ExtraCompactFace, "b2"};
  if (on(t2, -4 * pi)) return {Conclusion::BoundaryCase, "c"};
  if (t2 < -4 * pi) return {Conclusion::IndexAtLeastTwo, "c"};
  if (on(t2, -2 * pi)) return {Conclusion::FlatAnnulusImpossible, "d"};
  if (on(t3, pi)) return {Conclusion::BoundaryCase, "e"};
  if (t3 < pi) return {Conclusion::IndexAtLeastTwo, "e"};
  if (on(t3, 2 * pi)) return {Conclusion::YCatenoid, "f"};
  const bool annulus1 = top1.genus == 0 && top1.num_ends == 1;
  if (!annulus1 && t2 < -3 * pi) return {Conclusion::IndexAtLeastTwo, "g"};
  return {top1.num_ends == 1 ? Conclusion::YCatenoid : Conclusion::DiskAnnulusStable, "h"};
}

}  // namespace

TEST_CASE("alpha from topology") {
  CHECK(alpha_of(kDisk) == doctest::Approx(2 * pi));
  CHECK(alpha_of(kAnnulus) == doctest::Approx(-2 * pi));
  CHECK(alpha_of(kTwoEnds) == doctest::Approx(-6 * pi));
  CHECK(alpha_of({1, 1, 1}) == doctest::Approx(-6 * pi));
}

TEST_CASE("face theta on generated faces") {
  SUBCASE("flat disk") {
    const auto yc = make_ycatenoid(1.0, 3.0, {0.05, 0});
    const auto t = face_theta(yc.faces[2]);
    CHECK(t.alpha == doctest::Approx(2 * pi).epsilon(1e-15));
    CHECK(std::abs(t.beta) <= 1e-9);
    CHECK(std::abs(t.theta - 2 * pi) <= 1e-9);
  }
  SUBCASE("Y-catenoid at u = 6, h = 0.02") {
    const auto rep = theta_report(make_ycatenoid(1.0, 6.0, {0.02, 0}));
    const auto th = rep.sorted_theta();
    CHECK(std::abs(th[0] + 3 * pi) <= 0.01 * pi);
    CHECK(std::abs(th[1] + 3 * pi) <= 0.01 * pi);
    CHECK(std::abs(th[2] - 2 * pi) <= 1e-9);
    CHECK(rep.order[2] == 2);
    // Gauss map zone oracle: 2 pi (1 - tanh u0) * 2 = 2 pi
    CHECK(rep.faces[0].total_curvature == doctest::Approx(2 * pi).epsilon(0.01));
  }
  SUBCASE("full catenoid") {
    const auto t = face_theta(make_catenoid(1.0, 6.0, {0.05, 0}).faces[0]);
    CHECK(t.alpha == doctest::Approx(-6 * pi));
    CHECK(std::abs(t.beta + 4 * pi) <= 0.01 * pi);
    CHECK(std::abs(t.theta + 10 * pi) <= 0.01 * pi);
    CHECK(t.tail_estimate > 0.0);
  }
}

TEST_CASE("reduced constant form examples") {
  SUBCASE("zero") {
    const auto f = reduced_constant_form(0, 0, 0);
    CHECK(f.matrix.norm() == 0.0);
    CHECK(f.negative_count == 0);
  }
  SUBCASE("Y-catenoid values") {
    const auto f = reduced_constant_form(-3 * pi, -3 * pi, 2 * pi);
    Eigen::Matrix2d expect;
    expect << -pi, 2 * pi, 2 * pi, -pi;
    CHECK((f.matrix - expect).norm() <= 1e-14);
    CHECK(f.eigenvalues[0] == doctest::Approx(-3 * pi));
    CHECK(f.eigenvalues[1] == doctest::Approx(pi));
    CHECK(f.negative_count == 1);
  }
  SUBCASE("trace negative, determinant positive") {
    const auto f = reduced_constant_form(-6 * pi, -4 * pi, 2 * pi);
    CHECK(f.trace == doctest::Approx(-6 * pi));
    CHECK(f.determinant == doctest::Approx(4 * pi * pi));
    CHECK(f.negative_count == 2);
  }
  SUBCASE("input order does not matter") {
    const auto a = reduced_constant_form(2 * pi, -3 * pi, -5 * pi);
    CHECK(a.sorted == std::array<double, 3>{-5 * pi, -3 * pi, 2 * pi});
    CHECK(a.permutation == std::array<int, 3>{2, 1, 0});
  }
}

TEST_CASE("constant form identities on 1000 random triples") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-12 * pi, 2 * pi);
  for (int i = 0; i < 1000; ++i) {
    std::array<double, 3> t{u(rng), u(rng), u(rng)};
    const auto f = reduced_constant_form(t[0], t[1], t[2]);
    std::sort(t.begin(), t.end());
    const double trace = t[0] + t[1] + 2 * t[2];
    const double det = t[0] * t[1] + t[2] * (t[0] + t[1]);
    CHECK(std::abs(f.trace - trace) <= 1e-12 * std::max(1.0, std::abs(trace)));
    CHECK(std::abs(f.determinant - det) <= 1e-12 * std::max(1.0, std::abs(det)));
    CHECK(f.negative_count == eigen_sign_count(t[0], t[1], t[2]));
  }
}

TEST_CASE("verdict examples") {
  SUBCASE("Y-catenoid values") {
    const auto v = classify_index_one(theta_report_from_values({-3 * pi, -3 * pi, 2 * pi}, {kAnnulus, kAnnulus, kDisk}));
    CHECK(to_string(v.conclusion) == "Y-catenoid");
    CHECK(v.path() == std::vector<std::string>{"b", "f"});
    CHECK(v.deciding_rule == "f");
    CHECK_FALSE(v.boundary_flags.empty());
  }
  SUBCASE("all negative") {
    const auto v = classify_index_one(theta_report_from_values({-3 * pi, -3 * pi, -pi}, {kAnnulus, kAnnulus, kDisk}));
    CHECK(to_string(v.conclusion) == "contradiction: index ≥ 2");
    CHECK(v.path() == std::vector<std::string>{"a"});
  }
  SUBCASE("disk coefficient below pi") {
    const auto v = classify_index_one(theta_report_from_values({-5 * pi, -3 * pi, pi / 2}, {kAnnulus, kAnnulus, kDisk}));
    CHECK(v.conclusion == Conclusion::IndexAtLeastTwo);
    CHECK(v.deciding_rule == "e");
    CHECK(v.path() == std::vector<std::string>{"b", "e"});
  }
  SUBCASE("boundary hits are flagged") {
    const auto c = classify_index_one(theta_report_from_values({-5 * pi, -4 * pi, 1.5 * pi}, {kAnnulus, kAnnulus, kDisk}));
    CHECK(c.conclusion == Conclusion::BoundaryCase);
    CHECK(c.deciding_rule == "c");
    const auto e = classify_index_one(theta_report_from_values({-3 * pi, -3 * pi, pi}, {kAnnulus, kAnnulus, kDisk}));
    CHECK(e.conclusion == Conclusion::BoundaryCase);
    CHECK(e.deciding_rule == "e");
  }
  SUBCASE("stable unbounded face") {
    const auto v = classify_index_one(theta_report_from_values({-7 * pi, -2.5 * pi, 1.5 * pi}, {kTwoEnds, kAnnulus, kDisk}));
    CHECK(v.conclusion == Conclusion::DiskAnnulusStable);
    CHECK(v.deciding_rule == "h");
    CHECK_FALSE(v.sigma2_admissible.empty());
    CHECK(v.sigma2_admissible.front() == kAnnulus);
  }
  SUBCASE("invalid inputs") {
    ThetaReport two = theta_report_from_values({-3 * pi, -3 * pi, 2 * pi}, {kAnnulus, kAnnulus, kDisk});
    two.faces.pop_back();
    CHECK_THROWS_AS(classify_index_one(two), StructuralError);
    const auto ok = theta_report_from_values({-3 * pi, -3 * pi, 2 * pi}, {kAnnulus, kAnnulus, kDisk});
    CHECK_THROWS_AS(classify_index_one(ok, 2), ArgumentError);
    // theta above alpha means negative total curvature
    CHECK_THROWS_AS(classify_index_one(theta_report_from_values({-pi, -3 * pi, 2 * pi}, {kAnnulus, kAnnulus, kDisk})),
                    StructuralError);
  }
}

TEST_CASE("50-point grid against the brute-force inequalities") {
  int contradictions[3] = {0, 0, 0};
  int n = 0;
  for (double t3 : {-0.5 * pi, 0.5 * pi, pi, 1.5 * pi, 2 * pi}) {
    for (double t2 : {-5 * pi, -4 * pi, -3.5 * pi, -2.5 * pi, -2 * pi}) {
      for (double shift : {0.0, -3 * pi}) {
        const double t1 = t2 + shift;
        const Topology top1 = t1 <= -6 * pi ? kTwoEnds : kAnnulus;
        const auto v = classify_index_one(theta_report_from_values({t1, t2, t3}, {top1, kAnnulus, kDisk}));
        const auto want = brute_force(t1, t2, t3, top1, kAnnulus);
        CHECK(v.conclusion == want.conclusion);
        CHECK(v.deciding_rule == want.rule);
        if (v.conclusion == Conclusion::IndexAtLeastTwo) {
          // the constant-mode form really has two negative directions
          if (v.deciding_rule != "g") CHECK(eigen_sign_count(t1, t2, t3) == 2);
          if (v.deciding_rule == "a") ++contradictions[0];
          if (v.deciding_rule == "c") ++contradictions[1];
          if (v.deciding_rule == "e") ++contradictions[2];
        }
        ++n;
      }
    }
  }
  CHECK(n == 50);
  for (int c : contradictions) CHECK(c > 0);
}

TEST_CASE("classification is deterministic") {
  const auto r = theta_report_from_values({-5 * pi, -3 * pi, pi / 2}, {kAnnulus, kAnnulus, kDisk});
  const auto a = classify_index_one(r);
  const auto b = classify_index_one(r);
  REQUIRE(a.rules.size() == b.rules.size());
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    CHECK(a.rules[i].id == b.rules[i].id);
    CHECK(a.rules[i].outcome == b.rules[i].outcome);
    CHECK(a.rules[i].inputs == b.rules[i].inputs);
  }
}

TEST_CASE("verdict on a generated Y-catenoid") {
  const auto v = classify_index_one(theta_report(make_ycatenoid(1.0, 6.0, {0.05, 0})));
  CHECK(v.conclusion == Conclusion::YCatenoid);
  CHECK(v.path() == std::vector<std::string>{"b", "f"});
}

TEST_CASE("constants cross-check") {
  SUBCASE("flat Y-cone") {
    const auto s = make_flat_ycone(1.0, 1.0, {0.05, 0});
    const auto x = cross_check_constants(s, theta_report(s), {2.0, 10.0});
    CHECK(x.applicable);
    CHECK(x.negative_count == 0);
    REQUIRE(x.rows.size() == 4);
    for (const auto& row : x.rows) CHECK(row.q_value >= 0.0);
  }
  SUBCASE("Y-catenoid: one negative direction") {
    const auto s = make_ycatenoid(1.0, 10.5, {0.1, 0});
    const auto x = cross_check_constants(s, theta_report(s), {10.0, 100.0});
    CHECK(x.applicable);
    CHECK(x.negative_count == 1);
    int negative_rows = 0;
    for (const auto& row : x.rows) negative_rows += row.q_value < 0.0;
    CHECK(negative_rows == 2);  // (1, 1, -2) at both R
  }
  SUBCASE("catenoid has no junction") {
    const auto s = make_catenoid(1.0, 2.0, {0.1, 0});
    ThetaReport r;
    r.faces.push_back(face_theta(s.faces[0]));
    const auto x = cross_check_constants(s, r, {10.0});
    CHECK_FALSE(x.applicable);
    CHECK(x.note == "not applicable — no junction constants");
  }
}
