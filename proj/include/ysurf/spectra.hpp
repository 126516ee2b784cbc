#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ysurf/quadform.hpp"

namespace ysurf {

struct Inertia {
  int n_minus = 0;
  int n_zero = 0;
  int n_plus = 0;
  bool operator==(const Inertia&) const = default;
};

/// Thrown when a factorization or iteration fails; carries the pivot index or
/// the best residual reached.
class SpectralError : public std::runtime_error {
 public:
  SpectralError(const std::string& what, int pivot, double residual)
      : std::runtime_error(what), pivot_index(pivot), best_residual(residual) {}
  int pivot_index;
  double best_residual;
};

/// Below this dimension inertia and eigensolves use dense LAPACK/Eigen paths.
inline constexpr int kDenseLimit = 2000;

/// Eigenvalue counts of a symmetric matrix in (-inf, -tol), [-tol, tol], (tol, inf).
/// Counted from the negative pivots of LDL^T factorizations of A + tol I and A - tol I
/// (Sylvester). Dense: LAPACK Bunch-Kaufman; sparse: AMD-ordered LDL^T.
Inertia inertia(const SparseMatrix& A, double zero_tolerance);
Inertia inertia(const Eigen::MatrixXd& A, double zero_tolerance);

/// Same counts for the pencil (K, M), M positive definite: shifts are tol * M.
Inertia pencil_inertia(const SparseMatrix& K, const SparseMatrix& M, double zero_tolerance);

/// Number of negative eigenvalues of A, from one symmetric-indefinite factorization.
int negative_pivots(const SparseMatrix& A);
int negative_pivots(const Eigen::MatrixXd& A);

struct Eigenpairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // M-orthonormal columns
  std::vector<double> relative_residuals;
  std::string method;
};

struct EigenOptions {
  bool force_iterative = false;
  double residual_tolerance = 1e-8;
  int max_basis = 240;
  unsigned long long seed = 0x5eedULL;
};

/// The `count` algebraically smallest eigenpairs of K v = lambda M v.
Eigenpairs lowest_modes(const SparseMatrix& K, const SparseMatrix& M, int count,
                        const EigenOptions& options = {});

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  int morse_index = 0;
  int nullity = 0;                  // truncated nullity
  double zero_tolerance = 0.0;
  double truncation = 0.0;
  double mesh_size = 0.0;
  int dimension = 0;
  std::string method;
  double max_relative_residual = 0.0;
  bool counts_agree = true;  // inertia count vs negative eigenvalues among the computed ones
};

struct SpectrumOptions {
  int modes = 5;
  double zero_tolerance = 0.0;  // <= 0: 1e-8 * max |diag K_r|
  EigenOptions eigen;
};

double default_zero_tolerance(const SparseMatrix& K);

SpectrumResult compute_spectrum(const ReducedForm& form, const SpectrumOptions& options = {});
SpectrumResult compute_spectrum(const YSurface& surface, const SpectrumOptions& options = {});

struct SweepCase {
  double R = 0.0;
  double h = 0.0;
  std::optional<SpectrumResult> result;
  std::string status = "ok";
};

struct SweepResult {
  std::vector<SweepCase> cases;
  std::optional<int> stabilized_index;  // last three entries agree
  bool index_monotone = true;
  bool eigenvalues_monotone = true;     // lowest eigenvalue nonincreasing in R (1e-3 relative slack)
  std::vector<std::string> diagnostics;
};

using SurfaceFamily = std::function<YSurface(double R)>;

/// Spectra of Dirichlet truncations at increasing R. Cases run on `threads`
/// workers; results are placed by case index so the output is deterministic.
SweepResult morse_index_sweep(const SurfaceFamily& family, const std::vector<double>& R_list,
                              double h, const SpectrumOptions& options = {}, int threads = 1);

/// Angular mode k restriction of the index form on the generating curves.
struct FourierPencil {
  int k = 0;
  Eigen::MatrixXd K;  // reduced
  Eigen::MatrixXd M;  // reduced
  Eigen::MatrixXd T;  // full 1-D dofs -> reduced
  std::vector<int> face_offsets;  // 1-D dof offset of each face's profile
};

FourierPencil fourier_reduce(const YSurface& surface, int k);

struct ModeSummary {
  int k = 0;
  Inertia inertia;
  std::vector<double> eigenvalues;
};

struct FourierIndex {
  std::vector<ModeSummary> modes;  // k = 0 .. last solved
  int total_index = 0;             // n(0) + 2 sum n(k)
  int total_nullity = 0;
  int certified_from = -1;         // all k >= this are positive definite
  std::string certificate;         // "gershgorin" or "cholesky"
};

FourierIndex fourier_index(const YSurface& surface, int mode_cap = 10, int eigen_count = 5,
                           double zero_tolerance = 0.0);

/// Rotationally symmetric eigenvalues of the 2-D pencil: Rayleigh-Ritz on
/// ring-constant admissible fields (an invariant subspace on rotation-equivariant meshes).
std::vector<double> symmetric_2d_eigenvalues(const YSurface& surface, int count);

/// Ring-mass-weighted angular Fourier power of a stacked nodal field; entry k is
/// the share of mode k (cos and sin together), summing to one.
std::vector<double> angular_mode_power(const YSurface& surface, const Eigen::VectorXd& stacked);

struct SpectrumRow {
  double R = 0.0;
  double h = 0.0;
  std::string mode = "2d";
  int rank = 0;
  double eigenvalue = 0.0;
  int index = 0;
  int nullity = 0;
  std::string status = "ok";
};

std::vector<SpectrumRow> spectrum_rows(const SweepResult& sweep);
void write_spectrum_csv(const std::vector<SpectrumRow>& rows, std::ostream& out);

}  // namespace ysurf
