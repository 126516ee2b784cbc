#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ysurf/generators.hpp"
#include "ysurf/spectra.hpp"

using namespace ysurf;

namespace {

SparseMatrix sparse_identity(int n, double scale = 1.0) {
  SparseMatrix m(n, n);
  m.setIdentity();
  return m * scale;
}

SparseMatrix laplacian_1d(int n) {
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0);
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -1.0);
      t.emplace_back(i + 1, i, -1.0);
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

TEST_CASE("inertia of a small diagonal matrix") {
  const Eigen::MatrixXd d = Eigen::Vector3d(1.0, -2.0, 0.0).asDiagonal();
  CHECK(inertia(d, 1e-9) == Inertia{1, 1, 1});
  CHECK(inertia(SparseMatrix(d.sparseView()), 1e-9) == Inertia{1, 1, 1});
  CHECK(negative_pivots(Eigen::MatrixXd(Eigen::Vector3d(1.0, -2.0, 3.0).asDiagonal())) == 1);
  CHECK(pencil_inertia(SparseMatrix(d.sparseView()), sparse_identity(3, 2.0), 1e-9) == Inertia{1, 1, 1});
}

TEST_CASE("dense and sparse inertia agree with eigenvalue counts") {
  // L - s I has eigenvalues 2 - 2 cos(k pi / (n + 1)) - s
  const int n = 2500;
  const SparseMatrix L = laplacian_1d(n);
  for (double s : {0.001, 0.01, 0.05}) {
    int expected = 0;
    for (int k = 1; k <= n; ++k) expected += 2.0 - 2.0 * std::cos(k * M_PI / (n + 1)) - s < 0.0;
    const SparseMatrix A = L - sparse_identity(n, s);
    CHECK(inertia(A, 1e-12).n_minus == expected);
    CHECK(negative_pivots(A) == expected);
  }
  const SparseMatrix small = laplacian_1d(200) - sparse_identity(200, 0.01);
  CHECK(inertia(Eigen::MatrixXd(small), 1e-12) == inertia(small, 1e-12));
}

TEST_CASE("identity pencil") {
  SUBCASE("dense") {
    const auto e = lowest_modes(sparse_identity(40), sparse_identity(40), 3);
    for (int i = 0; i < 3; ++i) CHECK(e.values[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("iterative") {
    EigenOptions o;
    o.force_iterative = true;
    const auto e = lowest_modes(sparse_identity(300), sparse_identity(300), 4, o);
    REQUIRE(e.values.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(e.values[i] == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("iterative and dense eigensolvers agree on the catenoid") {
  const auto s = make_catenoid(1.0, 1.2, {0.12, 0});
  const auto red = apply_compatibility(assemble_index_form(s), s);
  REQUIRE(red.dim() < kDenseLimit);
  const auto dense = lowest_modes(red.K, red.M, 5);
  EigenOptions o;
  o.force_iterative = true;
  const auto iter = lowest_modes(red.K, red.M, 5, o);
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(dense.values[i] - iter.values[i]) <= 1e-8 * std::max(1.0, std::abs(dense.values[i])));
    CHECK(iter.relative_residuals[i] <= 1e-8);
  }
  // M-orthonormal
  const Eigen::MatrixXd G = iter.vectors.transpose() * (red.M * iter.vectors);
  CHECK((G - Eigen::MatrixXd::Identity(5, 5)).norm() <= 1e-8);
}

TEST_CASE("non-convergence reports the best residual") {
  EigenOptions o;
  o.force_iterative = true;
  o.max_basis = 4;
  o.residual_tolerance = 1e-300;
  const SparseMatrix L = laplacian_1d(400);
  try {
    lowest_modes(L, sparse_identity(400), 3, o);
    FAIL("expected SpectralError");
  } catch (const SpectralError& e) {
    CHECK(e.best_residual > 0.0);
    CHECK(std::isfinite(e.best_residual));
  }
}

TEST_CASE("index of the generated surfaces") {
  SUBCASE("flat Y-cone") {
    const auto r = compute_spectrum(make_flat_ycone(1.0, 1.0, {0.1, 0}));
    CHECK(r.morse_index == 0);
    CHECK(r.eigenvalues.front() >= -1e-10);
  }
  SUBCASE("catenoid, a single axisymmetric negative direction") {
    const auto s = make_catenoid(1.0, 3.0, {0.06, 0});
    const auto red = apply_compatibility(assemble_index_form(s), s);
    const auto r = compute_spectrum(red);
    CHECK(r.morse_index == 1);
    CHECK(r.counts_agree);
    CHECK(r.eigenvalues[0] < 0.0);
    CHECK(r.eigenvalues[1] > 0.0);
    const auto e = lowest_modes(red.K, red.M, 1);
    const auto power = angular_mode_power(s, red.reducer.expand(e.vectors.col(0)));
    double rest = 0.0;
    for (std::size_t k = 1; k < power.size(); ++k) rest += power[k];
    CHECK(rest < 0.01);
  }
  SUBCASE("Y-catenoid") {
    const auto r = compute_spectrum(make_ycatenoid(1.0, 3.0, {0.06, 0}));
    CHECK(r.morse_index == 1);
    CHECK(r.counts_agree);
  }
}

TEST_CASE("mesh refinement changes the lowest eigenvalue by under 1%") {
  const double coarse = compute_spectrum(make_ycatenoid(1.0, 3.0, {0.06, 0})).eigenvalues[0];
  const double fine = compute_spectrum(make_ycatenoid(1.0, 3.0, {0.03, 0})).eigenvalues[0];
  CHECK(std::abs(coarse - fine) <= 0.01 * std::abs(fine));
}

TEST_CASE("truncation sweeps") {
  SUBCASE("flat Y-cone") {
    const auto sw = morse_index_sweep([](double R) { return make_flat_ycone(R, 1.0, {0.1, 0}); }, {1, 2, 4}, 0.1);
    for (const auto& c : sw.cases) {
      REQUIRE(c.result);
      CHECK(c.result->morse_index == 0);
    }
    CHECK(sw.stabilized_index == 0);
  }
  SUBCASE("catenoid") {
    const auto sw = morse_index_sweep([](double R) { return make_catenoid(1.0, R, {0.06, 0}); }, {1.5, 2, 3}, 0.06);
    for (const auto& c : sw.cases) CHECK(c.result->morse_index == 1);
    CHECK(sw.stabilized_index == 1);
    CHECK(sw.index_monotone);
  }
  SUBCASE("Y-catenoid, eigenvalues decrease with the domain") {
    const auto sw =
        morse_index_sweep([](double R) { return make_ycatenoid(1.0, R, {0.06, 0}); }, {2, 3, 4}, 0.06, {}, 2);
    CHECK(sw.stabilized_index == 1);
    CHECK(sw.eigenvalues_monotone);
    CHECK(sw.cases[0].result->eigenvalues[0] > sw.cases[1].result->eigenvalues[0]);
    CHECK(sw.cases[1].result->eigenvalues[0] > sw.cases[2].result->eigenvalues[0]);
  }
  SUBCASE("non-monotone index is flagged") {
    const auto sw = morse_index_sweep(
        [](double R) { return R == 2.0 ? make_catenoid(1.0, 2.0, {0.1, 0}) : make_plane(1.0, {0.1, 0}); },
        {1, 2, 3}, 0.1);
    CHECK_FALSE(sw.index_monotone);
    CHECK_FALSE(sw.diagnostics.empty());
    CHECK_FALSE(sw.stabilized_index.has_value());
  }
  SUBCASE("generator failures are recorded per case") {
    const auto sw = morse_index_sweep([](double R) { return make_ycatenoid(1.0, R, {0.1, 0}); }, {0.2, 2, 3}, 0.1);
    CHECK(sw.cases[0].status != "ok");
    CHECK_FALSE(sw.cases[0].result.has_value());
    CHECK(sw.cases[1].result.has_value());
  }
}

TEST_CASE("Fourier reduction") {
  SUBCASE("plane: every mode is positive semidefinite") {
    const auto s = make_plane(1.0, {0.05, 0});
    for (int k = 0; k <= 6; ++k) {
      const auto p = fourier_reduce(s, k);
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(p.K, p.M);
      CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
  }
  SUBCASE("flat Y-cone is not axisymmetric") {
    CHECK_THROWS_AS(fourier_reduce(make_flat_ycone(1.0, 1.0, {0.1, 0}), 0), StructuralError);
  }
  SUBCASE("catenoid and Y-catenoid: mode 0 carries the index") {
    for (const auto& s : {make_catenoid(1.0, 3.0, {0.03, 0}), make_ycatenoid(1.0, 3.0, {0.03, 0})}) {
      const auto fi = fourier_index(s);
      CHECK(fi.total_index == 1);
      CHECK(fi.modes[0].inertia.n_minus == 1);
      for (std::size_t k = 1; k < fi.modes.size(); ++k) CHECK(fi.modes[k].inertia.n_minus == 0);
      CHECK(fi.certified_from >= 1);
      CHECK_FALSE(fi.certificate.empty());
      const auto sym = symmetric_2d_eigenvalues(s, 3);
      for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(sym[i] - fi.modes[0].eigenvalues[i]) <= 0.02 * std::abs(sym[i]));
      }
    }
  }
}

TEST_CASE("spectrum CSV") {
  const auto sw = morse_index_sweep([](double R) { return make_flat_ycone(R, 1.0, {0.2, 0}); }, {1, 2}, 0.2);
  const auto rows = spectrum_rows(sw);
  CHECK(rows.size() == 2 * 5);
  std::ostringstream os;
  write_spectrum_csv(rows, os);
  const std::string text = os.str();
  CHECK(text.rfind("R,h,mode,eigenvalue_rank,eigenvalue,index,nullity,status\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 11);
}
