#pragma once

#include <array>
#include <iosfwd>
#include <limits>
#include <vector>

#include <Eigen/Sparse>

#include "ysurf/types.hpp"

namespace ysurf {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Piecewise-linear discretization of the second variation over the stacked
/// nodal vector of all faces (face f occupies [offset[f], offset[f] + n_f)).
/// Q(f) = f^T (stiffness - potential - junction) f.
struct IndexFormMatrices {
  SparseMatrix stiffness;  // sum_j int |grad f_j|^2
  SparseMatrix potential;  // sum_j int |A_j|^2 f_j^2, lumped
  SparseMatrix junction;   // sum_i int_Gamma (H_Gamma . tau_i) f_i^2, lumped on the shared polyline
  SparseMatrix mass;       // int f^2, lumped
  std::vector<int> face_offsets;

  SparseMatrix index_form() const { return stiffness - potential - junction; }
  int dim() const { return static_cast<int>(mass.rows()); }
};

/// Linear map from free coordinates to full nodal vectors. Dirichlet nodes are
/// zero; in each compatibility triple the eliminated entry is minus the sum of
/// the others.
struct Reducer {
  SparseMatrix map;  // full_dim x reduced_dim
  std::vector<char> dirichlet;
  std::vector<int> eliminated;  // full dofs expressed through others
  int full_dim = 0;
  int reduced_dim = 0;

  Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const { return map * reduced; }
};

/// Each triple (a, b, c) imposes f_a + f_b + f_c = 0; c is eliminated when all
/// three are free. A dof may take part in at most one triple.
Reducer build_reducer(int full_dim, std::vector<char> dirichlet,
                      const std::vector<std::array<int, 3>>& triples);

struct ReducedForm {
  SparseMatrix K;  // reducer^T (S - P - J) reducer
  SparseMatrix M;  // reducer^T M reducer
  Reducer reducer;

  int dim() const { return static_cast<int>(K.rows()); }
};

IndexFormMatrices assemble_index_form(const YSurface& surface);

/// Dirichlet conditions on `truncation` loops plus f1 + f2 + f3 = 0 at every
/// junction sample, eliminating the third incident face.
ReducedForm apply_compatibility(const IndexFormMatrices& matrices, const YSurface& surface);

/// Global dof triples (one per junction sample) and Dirichlet mask of a surface.
std::vector<std::array<int, 3>> junction_triples(const YSurface& surface);
std::vector<char> truncation_mask(const YSurface& surface);

/// Per-face nodal normal displacement amplitudes.
struct NormalField {
  std::vector<Eigen::VectorXd> values;
  bool compact_support = true;

  static NormalField zero(const YSurface& surface);
  static NormalField from_stacked(const YSurface& surface, const Eigen::VectorXd& stacked);
  Eigen::VectorXd stacked() const;
};

/// Direct elementwise quadrature of the three terms of the second variation.
/// Throws ArgumentError naming the violated constraint if the field is not
/// admissible.
double evaluate_Q(const NormalField& field, const YSurface& surface);

/// Smoothstep xi(s) = 3s^2 - 2s^3 clamped to [0, 1]; sup |xi'| = 1.5.
struct SmoothStep {
  double operator()(double s) const;
  double derivative(double s) const;
  double bound() const { return 1.5; }
};

struct CutoffProfile {
  double R = 0.0;
  double C = 0.0;
  std::vector<std::vector<double>> psi;  // per face, per node; +inf at the origin
  std::vector<std::vector<double>> phi;
  double max_gradient_ratio = 0.0;       // sup over elements of |x| |grad phi| log R
  bool bound_ok = true;                  // max_gradient_ratio <= 1.1 C
};

/// psi_R(x) = 2 - log|x| / log R and phi_R = xi(psi_R) at every node.
CutoffProfile build_log_cutoff(const YSurface& surface, double R, const SmoothStep& xi = {});

struct ConstantsProbe {
  double q_value = 0.0;
  double theta_prediction = 0.0;
  bool support_contained = true;  // phi_R vanishes on every truncation loop
  double gap() const { return q_value - theta_prediction; }
};

/// Q(phi_R * c) against sum c_i^2 theta_i, with c indexed by the incident faces
/// of the surface's single junction. The field is evaluated even when the mesh
/// is cut before |x| = R^2; `support_contained` records whether it was.
ConstantsProbe q_of_constants(const YSurface& surface, const std::array<double, 3>& c, double R);

/// Nodal quadrature of int f^2 (1 + |x|^2)^-1 (log(2 + |x|))^-2 dA, i.e. the squared L2* norm.
double l2star_norm_sq(const NormalField& field, const YSurface& surface);

/// Coordinate-format text: "row col value" per nonzero, 0-based, row-major.
void write_coo(const SparseMatrix& m, std::ostream& out);

}  // namespace ysurf
