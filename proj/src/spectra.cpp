#include "ysurf/spectra.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <lapacke.h>

namespace ysurf {

namespace {

constexpr double kPi = std::numbers::pi;

using SparseLDLT = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

double max_abs_diag(const SparseMatrix& A) {
  double m = 0.0;
  for (int i = 0; i < A.rows(); ++i) m = std::max(m, std::abs(A.coeff(i, i)));
  return m;
}

double max_row_sum(const SparseMatrix& A) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(A.rows());
  for (int c = 0; c < A.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(A, c); it; ++it) rows[it.row()] += std::abs(it.value());
  }
  return rows.size() ? rows.maxCoeff() : 0.0;
}

// Factorization of a sparse symmetric matrix that must not hit a zero pivot.
void factor_checked(SparseLDLT& ldlt, const SparseMatrix& A) {
  ldlt.compute(A);
  const double scale = std::max(max_abs_diag(A), std::numeric_limits<double>::min());
  if (ldlt.info() != Eigen::Success) {
    throw SpectralError("sparse LDL^T factorization failed", -1, std::numeric_limits<double>::quiet_NaN());
  }
  const auto& D = ldlt.vectorD();
  const auto& pinv = ldlt.permutationPinv().indices();
  for (int i = 0; i < D.size(); ++i) {
    if (!(std::abs(D[i]) > 1e-14 * scale)) {
      const int original = pinv[i];
      throw SpectralError("LDL^T breakdown: pivot " + std::to_string(i) + " (row " +
                              std::to_string(original) + ") below tolerance",
                          original, std::numeric_limits<double>::quiet_NaN());
    }
  }
}

int count_negative(const Eigen::VectorXd& d) {
  return static_cast<int>((d.array() < 0.0).count());
}

void check_square_symmetric(const SparseMatrix& A) {
  if (A.rows() != A.cols()) throw ArgumentError("matrix is not square");
  const double scale = std::max(max_abs_diag(A), 1.0);
  const SparseMatrix diff = SparseMatrix(A.transpose()) - A;
  for (int c = 0; c < diff.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(diff, c); it; ++it) {
      if (std::abs(it.value()) > 1e-10 * scale) throw ArgumentError("matrix is not symmetric");
    }
  }
}

}  // namespace

int negative_pivots(const Eigen::MatrixXd& A) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  if (n == 0) return 0;
  Eigen::MatrixXd a = A;
  std::vector<lapack_int> ipiv(n);
  const lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, a.data(), n, ipiv.data());
  if (info < 0) throw ArgumentError("dsytrf: bad argument " + std::to_string(-info));
  if (info > 0) {
    throw SpectralError("Bunch-Kaufman factorization hit an exactly zero pivot at index " +
                            std::to_string(info - 1),
                        static_cast<int>(info - 1), std::numeric_limits<double>::quiet_NaN());
  }
  int neg = 0;
  for (lapack_int k = 0; k < n;) {
    if (ipiv[k] > 0) {
      neg += a(k, k) < 0.0;
      ++k;
    } else {
      // 2x2 block of D
      const double p = a(k, k), q = a(k + 1, k), r = a(k + 1, k + 1);
      const double det = p * r - q * q;
      if (det < 0.0) {
        neg += 1;
      } else if (p + r < 0.0) {
        neg += 2;
      }
      k += 2;
    }
  }
  return neg;
}

int negative_pivots(const SparseMatrix& A) {
  if (A.rows() < kDenseLimit) return negative_pivots(Eigen::MatrixXd(A));
  SparseLDLT ldlt;
  factor_checked(ldlt, A);
  return count_negative(ldlt.vectorD());
}

Inertia inertia(const Eigen::MatrixXd& A, double zero_tolerance) {
  if (!(zero_tolerance > 0.0)) throw ArgumentError("zero tolerance must be positive");
  if (A.rows() != A.cols()) throw ArgumentError("matrix is not square");
  const int n = static_cast<int>(A.rows());
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const int below = negative_pivots(Eigen::MatrixXd(A + zero_tolerance * I));
  const int upto = negative_pivots(Eigen::MatrixXd(A - zero_tolerance * I));
  return {below, upto - below, n - upto};
}

Inertia inertia(const SparseMatrix& A, double zero_tolerance) {
  if (!(zero_tolerance > 0.0)) throw ArgumentError("zero tolerance must be positive");
  check_square_symmetric(A);
  SparseMatrix I(A.rows(), A.cols());
  I.setIdentity();
  return pencil_inertia(A, I, zero_tolerance);
}

Inertia pencil_inertia(const SparseMatrix& K, const SparseMatrix& M, double zero_tolerance) {
  if (!(zero_tolerance > 0.0)) throw ArgumentError("zero tolerance must be positive");
  const int n = static_cast<int>(K.rows());
  const int below = negative_pivots(SparseMatrix(K + zero_tolerance * M));
  const int upto = negative_pivots(SparseMatrix(K - zero_tolerance * M));
  return {below, upto - below, n - upto};
}

namespace {

std::vector<double> residuals(const SparseMatrix& K, const SparseMatrix& M, const Eigen::VectorXd& vals,
                              const Eigen::MatrixXd& vecs) {
  std::vector<double> out;
  for (int i = 0; i < vals.size(); ++i) {
    const Eigen::VectorXd kv = K * vecs.col(i);
    const Eigen::VectorXd r = kv - vals[i] * (M * vecs.col(i));
    const double denom = std::max(kv.norm(), std::numeric_limits<double>::min());
    out.push_back(r.norm() / denom);
  }
  return out;
}

Eigenpairs dense_modes(const SparseMatrix& K, const SparseMatrix& M, int count) {
  const Eigen::MatrixXd Kd(K), Md(M);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kd, Md);
  if (es.info() != Eigen::Success) {
    throw SpectralError("dense generalized eigensolver failed (mass matrix not positive definite?)", -1,
                        std::numeric_limits<double>::quiet_NaN());
  }
  Eigenpairs out;
  out.values = es.eigenvalues().head(count);
  out.vectors = es.eigenvectors().leftCols(count);
  out.method = "dense";
  out.relative_residuals = residuals(K, M, out.values, out.vectors);
  return out;
}

// Shift-invert Lanczos on (K - sigma M)^-1 M in the M inner product, with full
// reorthogonalization, locking of converged pairs and restarts from fresh
// random vectors until a Sylvester count confirms no eigenvalue was skipped.
Eigenpairs lanczos_modes(const SparseMatrix& K, const SparseMatrix& M, int count, const EigenOptions& opt) {
  const int n = static_cast<int>(K.rows());
  const double nan = std::numeric_limits<double>::quiet_NaN();

  double sigma = -1e-4 * max_row_sum(K) / std::max(max_row_sum(M), std::numeric_limits<double>::min());
  if (sigma == 0.0) sigma = -1.0;
  SparseLDLT ldlt;
  for (int tries = 0;; ++tries) {
    if (tries > 80) throw SpectralError("no shift below the spectrum found", -1, nan);
    try {
      factor_checked(ldlt, SparseMatrix(K - sigma * M));
      if (count_negative(ldlt.vectorD()) == 0) break;
    } catch (const SpectralError&) {
      // singular at this shift: move on
    }
    sigma *= 2.0;
  }

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd locked(n, 0);
  std::vector<double> locked_vals, locked_res;
  double best_residual = std::numeric_limits<double>::infinity();

  auto m_orthogonalize = [&](Eigen::VectorXd& w, const Eigen::MatrixXd& Q, int cols) {
    for (int pass = 0; pass < 2; ++pass) {
      if (locked.cols() > 0) {
        const Eigen::VectorXd Mw = M * w;
        w -= locked * (locked.transpose() * Mw);
      }
      if (cols > 0) {
        const Eigen::VectorXd Mw = M * w;
        w -= Q.leftCols(cols) * (Q.leftCols(cols).transpose() * Mw);
      }
    }
  };

  const int max_runs = 3 * count + 6;
  for (int run = 0; run < max_runs; ++run) {
    const int need = count - static_cast<int>(locked_vals.size());
    const int avail = n - static_cast<int>(locked.cols());
    if (avail <= 0) break;
    const int cap = std::min(avail, std::max(opt.max_basis, 2 * std::max(need, 1) + 20));

    Eigen::MatrixXd Q(n, cap);
    std::vector<double> alpha, beta;
    Eigen::VectorXd q(n);
    for (int i = 0; i < n; ++i) q[i] = gauss(rng);
    m_orthogonalize(q, Q, 0);
    q /= std::sqrt(q.dot(M * q));

    std::vector<std::pair<double, Eigen::VectorXd>> found;
    int steps = 0;
    while (steps < cap) {
      Q.col(steps) = q;
      Eigen::VectorXd w = ldlt.solve(M * q);
      const double a = q.dot(M * w);
      alpha.push_back(a);
      ++steps;
      m_orthogonalize(w, Q, steps);
      const double b = std::sqrt(std::max(w.dot(M * w), 0.0));
      const bool last = steps == cap || b <= 1e-13 * std::abs(a);

      const int target = std::max(need, 1);
      if (last || (steps >= target + 8 && steps % 8 == 0)) {
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
        for (int i = 0; i < steps; ++i) T(i, i) = alpha[i];
        for (int i = 0; i + 1 < steps; ++i) T(i, i + 1) = T(i + 1, i) = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(T);
        found.clear();
        int examined = 0;
        bool top_ok = true;
        // theta descending = lambda ascending
        for (int c = steps - 1; c >= 0 && examined < target + 2; --c) {
          const double theta = tes.eigenvalues()[c];
          if (!(theta > 0.0)) break;
          Eigen::VectorXd y = Q.leftCols(steps) * tes.eigenvectors().col(c);
          y /= std::sqrt(y.dot(M * y));
          const double lam = sigma + 1.0 / theta;
          const Eigen::VectorXd ky = K * y;
          const double res = (ky - lam * (M * y)).norm() / std::max(ky.norm(), std::numeric_limits<double>::min());
          best_residual = std::min(best_residual, res);
          ++examined;
          if (res <= opt.residual_tolerance) {
            found.emplace_back(lam, y);
          } else if (examined <= target) {
            top_ok = false;
          }
        }
        if ((top_ok && examined >= target) || last) break;
      }
      q = w / b;
      beta.push_back(b);
    }

    if (found.empty()) {
      throw SpectralError("Lanczos did not converge; best relative residual " + std::to_string(best_residual),
                          -1, best_residual);
    }
    for (auto& [lam, y] : found) {
      // Lock with an explicit M-orthogonalization against earlier locks.
      Eigen::VectorXd v = y;
      if (locked.cols() > 0) v -= locked * (locked.transpose() * (M * v));
      const double nv = std::sqrt(std::max(v.dot(M * v), 0.0));
      if (nv < 1e-6) continue;
      v /= nv;
      locked.conservativeResize(n, locked.cols() + 1);
      locked.col(locked.cols() - 1) = v;
      locked_vals.push_back(lam);
    }

    if (static_cast<int>(locked_vals.size()) >= count) {
      std::vector<double> sorted = locked_vals;
      std::sort(sorted.begin(), sorted.end());
      const double top = sorted[count - 1];
      const double mu = top + 1e-7 * std::max(std::abs(top), 1e-3);
      int below_mu = 0;
      for (double v : sorted) below_mu += v <= mu;
      try {
        const int sylvester = negative_pivots(SparseMatrix(K - mu * M));
        if (sylvester <= below_mu) break;
      } catch (const SpectralError&) {
        break;  // mu sits on an eigenvalue: the count check is inconclusive, accept
      }
    }
  }
  if (static_cast<int>(locked_vals.size()) < count) {
    throw SpectralError("Lanczos located only " + std::to_string(locked_vals.size()) + " of " +
                            std::to_string(count) + " eigenpairs; best residual " + std::to_string(best_residual),
                        -1, best_residual);
  }

  std::vector<int> idx(locked_vals.size());
  for (int i = 0; i < static_cast<int>(idx.size()); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return locked_vals[a] < locked_vals[b]; });
  Eigenpairs out;
  out.values.resize(count);
  out.vectors.resize(n, count);
  for (int i = 0; i < count; ++i) {
    out.values[i] = locked_vals[idx[i]];
    out.vectors.col(i) = locked.col(idx[i]);
  }
  out.method = "shift-invert-lanczos";
  out.relative_residuals = residuals(K, M, out.values, out.vectors);
  return out;
}

}  // namespace

Eigenpairs lowest_modes(const SparseMatrix& K, const SparseMatrix& M, int count, const EigenOptions& options) {
  if (K.rows() != K.cols() || M.rows() != K.rows() || M.cols() != K.cols()) {
    throw ArgumentError("K and M must be square of equal size");
  }
  if (count < 0 || count > K.rows()) throw ArgumentError("count must lie in [0, dimension]");
  if (count == 0) {
    Eigenpairs e;
    e.values.resize(0);
    e.vectors.resize(K.rows(), 0);
    e.method = "none";
    return e;
  }
  if (K.rows() < kDenseLimit && !options.force_iterative) return dense_modes(K, M, count);
  return lanczos_modes(K, M, count, options);
}

double default_zero_tolerance(const SparseMatrix& K) {
  const double d = max_abs_diag(K);
  return d > 0.0 ? 1e-8 * d : 1e-12;
}

SpectrumResult compute_spectrum(const ReducedForm& form, const SpectrumOptions& options) {
  SpectrumResult r;
  r.dimension = form.dim();
  r.zero_tolerance = options.zero_tolerance > 0.0 ? options.zero_tolerance : default_zero_tolerance(form.K);
  const Inertia in = pencil_inertia(form.K, form.M, r.zero_tolerance);
  r.morse_index = in.n_minus;
  r.nullity = in.n_zero;
  const int count = std::min(options.modes, r.dimension);
  const Eigenpairs ep = lowest_modes(form.K, form.M, count, options.eigen);
  r.method = ep.method;
  r.eigenvalues.assign(ep.values.data(), ep.values.data() + ep.values.size());
  for (double res : ep.relative_residuals) r.max_relative_residual = std::max(r.max_relative_residual, res);
  int neg = 0;
  for (double v : r.eigenvalues) neg += v < -r.zero_tolerance;
  r.counts_agree = neg == std::min(r.morse_index, count);
  return r;
}

SpectrumResult compute_spectrum(const YSurface& surface, const SpectrumOptions& options) {
  const auto mats = assemble_index_form(surface);
  return compute_spectrum(apply_compatibility(mats, surface), options);
}

namespace {

template <class F>
void parallel_for(int n, int threads, F&& body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

SweepResult morse_index_sweep(const SurfaceFamily& family, const std::vector<double>& R_list, double h,
                              const SpectrumOptions& options, int threads) {
  if (R_list.empty()) throw ArgumentError("sweep needs at least one truncation");
  for (std::size_t i = 1; i < R_list.size(); ++i) {
    if (!(R_list[i] > R_list[i - 1])) throw ArgumentError("truncation list must be strictly increasing");
  }
  SweepResult out;
  out.cases.resize(R_list.size());
  parallel_for(static_cast<int>(R_list.size()), threads, [&](int i) {
    auto& c = out.cases[i];
    c.R = R_list[i];
    c.h = h;
    try {
      c.result = compute_spectrum(family(R_list[i]), options);
      c.result->truncation = R_list[i];
      c.result->mesh_size = h;
      if (!c.result->counts_agree) c.status = "inertia/eigensolver count mismatch";
    } catch (const std::exception& e) {
      c.status = std::string("error: ") + e.what();
    }
  });

  const SweepCase* prev = nullptr;
  for (const auto& c : out.cases) {
    if (!c.result) {
      out.diagnostics.push_back("R=" + std::to_string(c.R) + ": " + c.status);
      continue;
    }
    if (prev) {
      if (c.result->morse_index < prev->result->morse_index) {
        out.index_monotone = false;
        out.diagnostics.push_back("index decreased from " + std::to_string(prev->result->morse_index) + " to " +
                                  std::to_string(c.result->morse_index) + " at R=" + std::to_string(c.R) +
                                  " (discretization error)");
      }
      const auto& a = prev->result->eigenvalues;
      const auto& b = c.result->eigenvalues;
      for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
        if (b[k] > a[k] + 1e-3 * std::max(std::abs(a[k]), 1e-12)) {
          out.eigenvalues_monotone = false;
          std::ostringstream os;
          os << "eigenvalue " << k + 1 << " rose from " << a[k] << " to " << b[k] << " at R=" << c.R;
          out.diagnostics.push_back(os.str());
        }
      }
    }
    prev = &c;
  }
  if (out.cases.size() >= 3) {
    const auto n = out.cases.size();
    const auto& x = out.cases[n - 3].result;
    const auto& y = out.cases[n - 2].result;
    const auto& z = out.cases[n - 1].result;
    if (x && y && z && x->morse_index == y->morse_index && y->morse_index == z->morse_index) {
      out.stabilized_index = z->morse_index;
    }
  }
  return out;
}

namespace {

void require_axisymmetric(const YSurface& surface) {
  for (int f = 0; f < surface.num_faces(); ++f) {
    if (!surface.faces[f].profile) {
      throw StructuralError("face " + std::to_string(f) + " is not a surface of revolution");
    }
  }
  if (surface.junctions.size() > 1) throw StructuralError("Fourier reduction supports at most one junction");
  for (const auto& j : surface.junctions) {
    if (!j.closed) throw StructuralError("junction is not a closed coaxial circle");
    const double r0 = j.samples.front().head<2>().norm();
    const double z0 = j.samples.front().z();
    for (const auto& p : j.samples) {
      if (std::abs(p.head<2>().norm() - r0) > 1e-9 * std::max(1.0, r0) || std::abs(p.z() - z0) > 1e-9 * std::max(1.0, r0)) {
        throw StructuralError("junction is not a coaxial circle");
      }
    }
  }
}

int junction_end(const ProfileCurve& p) {
  if (p.start_kind == ProfileEnd::Junction) return 0;
  if (p.end_kind == ProfileEnd::Junction) return static_cast<int>(p.samples.size()) - 1;
  throw StructuralError("incident face profile has no junction end");
}

}  // namespace

FourierPencil fourier_reduce(const YSurface& surface, int k) {
  if (k < 0) throw ArgumentError("Fourier mode must be nonnegative");
  require_axisymmetric(surface);
  FourierPencil fp;
  fp.k = k;
  int n = 0;
  for (const auto& f : surface.faces) {
    fp.face_offsets.push_back(n);
    n += static_cast<int>(f.profile->samples.size());
  }
  const double ck = k == 0 ? 2.0 * kPi : kPi;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n), M = Eigen::MatrixXd::Zero(n, n);
  std::vector<char> dirichlet(n, 0);

  for (int f = 0; f < surface.num_faces(); ++f) {
    const auto& p = *surface.faces[f].profile;
    const int o = fp.face_offsets[f];
    const int ns = static_cast<int>(p.samples.size());
    for (int j = 0; j + 1 < ns; ++j) {
      const auto& s0 = p.samples[j];
      const auto& s1 = p.samples[j + 1];
      const double ds = s1.s - s0.s;
      if (!(ds > 0.0)) throw StructuralError("profile arclength must increase");
      const int a = o + j, b = a + 1;
      const double stiff = ck * 0.5 * (s0.r + s1.r) / ds;
      K(a, a) += stiff;
      K(b, b) += stiff;
      K(a, b) -= stiff;
      K(b, a) -= stiff;
      const double wa = ck * ds * (2.0 * s0.r + s1.r) / 6.0;
      const double wb = ck * ds * (2.0 * s1.r + s0.r) / 6.0;
      M(a, a) += wa;
      M(b, b) += wb;
      K(a, a) -= s0.a_norm_sq * wa;
      K(b, b) -= s1.a_norm_sq * wb;
      if (k > 0) {
        if (s0.r > 0.0) K(a, a) += ck * k * k / s0.r * ds / 2.0;
        if (s1.r > 0.0) K(b, b) += ck * k * k / s1.r * ds / 2.0;
      }
    }
    auto pin = [&](ProfileEnd kind, int idx) {
      if (kind == ProfileEnd::Truncation || (kind == ProfileEnd::Axis && k > 0)) dirichlet[o + idx] = 1;
    };
    pin(p.start_kind, 0);
    pin(p.end_kind, ns - 1);
  }

  std::vector<std::array<int, 3>> triples;
  for (const auto& j : surface.junctions) {
    if (j.incident_faces.size() != 3) throw StructuralError("junction must have exactly 3 incident faces");
    const double r0 = j.samples.front().head<2>().norm();
    std::array<int, 3> t{};
    for (int i = 0; i < 3; ++i) {
      const int f = j.incident_faces[i];
      double htau = 0.0;
      for (int s = 0; s < j.num_samples(); ++s) htau += j.curvature_vector[s].dot(j.conormals[i][s]);
      htau /= j.num_samples();
      const int e = fp.face_offsets[f] + junction_end(*surface.faces[f].profile);
      K(e, e) -= ck * r0 * htau;
      t[i] = e;
    }
    triples.push_back(t);
  }

  const Reducer red = build_reducer(n, dirichlet, triples);
  fp.T = Eigen::MatrixXd(red.map);
  fp.K = fp.T.transpose() * K * fp.T;
  fp.M = fp.T.transpose() * M * fp.T;
  fp.K = 0.5 * (fp.K + fp.K.transpose()).eval();
  fp.M = 0.5 * (fp.M + fp.M.transpose()).eval();
  return fp;
}

namespace {

bool gershgorin_positive(const Eigen::MatrixXd& K) {
  for (int i = 0; i < K.rows(); ++i) {
    double off = 0.0;
    for (int j = 0; j < K.cols(); ++j) {
      if (j != i) off += std::abs(K(i, j));
    }
    if (!(K(i, i) - off > 0.0)) return false;
  }
  return true;
}

bool cholesky_positive(const Eigen::MatrixXd& K) {
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  return llt.info() == Eigen::Success;
}

}  // namespace

FourierIndex fourier_index(const YSurface& surface, int mode_cap, int eigen_count, double zero_tolerance) {
  if (mode_cap < 0) throw ArgumentError("mode cap must be nonnegative");
  FourierIndex out;
  auto solve_mode = [&](const FourierPencil& fp) {
    ModeSummary ms;
    ms.k = fp.k;
    if (fp.K.rows() == 0) {
      out.modes.push_back(ms);
      return;
    }
    double tol = zero_tolerance;
    if (!(tol > 0.0)) tol = std::max(1e-8 * fp.K.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    const int below = negative_pivots(Eigen::MatrixXd(fp.K + tol * fp.M));
    const int upto = negative_pivots(Eigen::MatrixXd(fp.K - tol * fp.M));
    ms.inertia = {below, upto - below, static_cast<int>(fp.K.rows()) - upto};
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(fp.K, fp.M, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw SpectralError("1-D eigensolve failed", -1, std::numeric_limits<double>::quiet_NaN());
    const int c = std::min<int>(eigen_count, static_cast<int>(fp.K.rows()));
    for (int i = 0; i < c; ++i) ms.eigenvalues.push_back(es.eigenvalues()[i]);
    const int weight = fp.k == 0 ? 1 : 2;
    out.total_index += weight * ms.inertia.n_minus;
    out.total_nullity += weight * ms.inertia.n_zero;
    out.modes.push_back(ms);
  };

  for (int k = 0; k <= mode_cap; ++k) solve_mode(fourier_reduce(surface, k));
  // K_k grows with k by a positive semidefinite term, so positivity at one k
  // certifies every higher mode.
  for (int k = mode_cap + 1; k <= mode_cap + 64; ++k) {
    const FourierPencil fp = fourier_reduce(surface, k);
    if (fp.K.rows() == 0 || gershgorin_positive(fp.K)) {
      out.certified_from = k;
      out.certificate = "gershgorin";
      return out;
    }
    if (cholesky_positive(fp.K)) {
      out.certified_from = k;
      out.certificate = "cholesky";
      return out;
    }
    solve_mode(fp);
  }
  throw SpectralError("no positivity certificate for high Fourier modes", -1, std::numeric_limits<double>::quiet_NaN());
}

std::vector<double> symmetric_2d_eigenvalues(const YSurface& surface, int count) {
  require_axisymmetric(surface);
  const auto mats = assemble_index_form(surface);
  const auto off = surface.face_offsets();
  std::vector<int> ring_off;
  int rings = 0;
  for (const auto& f : surface.faces) {
    ring_off.push_back(rings);
    rings += static_cast<int>(f.profile->samples.size());
  }
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<char> dirichlet(rings, 0);
  for (int f = 0; f < surface.num_faces(); ++f) {
    const auto& p = *surface.faces[f].profile;
    const int ns = static_cast<int>(p.samples.size());
    for (int j = 0; j < ns; ++j) {
      for (int v = p.ring_start[j]; v < p.ring_start[j] + p.ring_size[j]; ++v) {
        trip.emplace_back(off[f] + v, ring_off[f] + j, 1.0);
      }
    }
    if (p.start_kind == ProfileEnd::Truncation) dirichlet[ring_off[f]] = 1;
    if (p.end_kind == ProfileEnd::Truncation) dirichlet[ring_off[f] + ns - 1] = 1;
  }
  SparseMatrix B(mats.dim(), rings);
  B.setFromTriplets(trip.begin(), trip.end());
  std::vector<std::array<int, 3>> triples;
  for (const auto& j : surface.junctions) {
    std::array<int, 3> t{};
    for (int i = 0; i < 3; ++i) {
      const int f = j.incident_faces.at(i);
      t[i] = ring_off[f] + junction_end(*surface.faces[f].profile);
    }
    triples.push_back(t);
  }
  const Reducer red = build_reducer(rings, dirichlet, triples);
  const SparseMatrix P = B * red.map;
  const SparseMatrix K = P.transpose() * mats.index_form() * P;
  const SparseMatrix M = P.transpose() * mats.mass * P;
  Eigen::MatrixXd Kd(K), Md(M);
  Kd = 0.5 * (Kd + Kd.transpose()).eval();
  Md = 0.5 * (Md + Md.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kd, Md, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SpectralError("symmetric eigensolve failed", -1, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> out;
  for (int i = 0; i < std::min<int>(count, static_cast<int>(Kd.rows())); ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

std::vector<double> angular_mode_power(const YSurface& surface, const Eigen::VectorXd& stacked) {
  require_axisymmetric(surface);
  if (stacked.size() != surface.total_nodes()) throw ArgumentError("field size does not match the surface");
  const auto off = surface.face_offsets();
  int max_ring = 1;
  for (const auto& f : surface.faces) {
    for (int sz : f.profile->ring_size) max_ring = std::max(max_ring, sz);
  }
  std::vector<double> power(max_ring / 2 + 1, 0.0);
  for (int f = 0; f < surface.num_faces(); ++f) {
    const auto& face = surface.faces[f];
    const auto& p = *face.profile;
    for (std::size_t j = 0; j < p.samples.size(); ++j) {
      const int n = p.ring_size[j], s = p.ring_start[j];
      double w = 0.0;
      for (int v = s; v < s + n; ++v) w += face.area_weights[v];
      w /= n;
      if (n == 1) {
        power[0] += w * stacked[off[f] + s] * stacked[off[f] + s];
        continue;
      }
      for (int m = 0; m <= n / 2; ++m) {
        std::complex<double> c = 0.0;
        for (int v = 0; v < n; ++v) c += stacked[off[f] + s + v] * std::polar(1.0, -2.0 * kPi * m * v / n);
        // |c_m|^2 / n, with the mirrored index n - m folded in
        const double fold = (m == 0 || 2 * m == n) ? 1.0 : 2.0;
        power[std::min<int>(m, static_cast<int>(power.size()) - 1)] += w * fold * std::norm(c) / n;
      }
    }
  }
  double total = 0.0;
  for (double v : power) total += v;
  if (total > 0.0) {
    for (double& v : power) v /= total;
  }
  return power;
}

std::vector<SpectrumRow> spectrum_rows(const SweepResult& sweep) {
  std::vector<SpectrumRow> rows;
  for (const auto& c : sweep.cases) {
    if (!c.result) {
      SpectrumRow r;
      r.R = c.R;
      r.h = c.h;
      r.eigenvalue = std::numeric_limits<double>::quiet_NaN();
      r.index = -1;
      r.nullity = -1;
      r.status = c.status;
      rows.push_back(r);
      continue;
    }
    const auto& res = *c.result;
    for (std::size_t k = 0; k < res.eigenvalues.size(); ++k) {
      rows.push_back({c.R, c.h, "2d", static_cast<int>(k) + 1, res.eigenvalues[k], res.morse_index, res.nullity,
                      c.status});
    }
  }
  return rows;
}

void write_spectrum_csv(const std::vector<SpectrumRow>& rows, std::ostream& out) {
  out << "R,h,mode,eigenvalue_rank,eigenvalue,index,nullity,status\n";
  char buf[512];
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%d,%.17g,%d,%d,", r.R, r.h, r.mode.c_str(), r.rank, r.eigenvalue,
                  r.index, r.nullity);
    out << buf << status << "\n";
  }
}

}  // namespace ysurf
