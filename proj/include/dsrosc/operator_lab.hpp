#ifndef DSROSC_OPERATOR_LAB_HPP
#define DSROSC_OPERATOR_LAB_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dsrosc/errors.hpp"
#include "dsrosc/params.hpp"
#include "dsrosc/special_functions.hpp"

namespace dsrosc {

using Matrix = Eigen::MatrixXcd;

/// Operator in the truncated oscillator number basis |0>, ..., |N-1>.
struct OperatorMatrix {
  Matrix entries;
  ModelParams params;

  static constexpr std::string_view basis = "oscillator-number";

  Eigen::Index dim() const { return entries.rows(); }
};

struct SpectrumReport {
  std::vector<cplx> eigenvalues;  // sorted by real part, then imaginary part
  double max_imag = 0.0;
  std::size_t matched_levels = 0;
  bool triangular_shortcut = false;
};

namespace detail {

inline void require_dim(Eigen::Index n) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "basis dimension must be >= 2");
}

inline Eigen::Index interior_size(Eigen::Index n, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    fail(ErrorKind::InvalidArgument, "interior fraction must lie in (0, 1]");
  }
  return std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::floor(fraction * n)));
}

}  // namespace detail

/// max |A_ij| over the leading k x k block.
inline double interior_max_abs(const Matrix& a, Eigen::Index k) {
  return a.topLeftCorner(k, k).cwiseAbs().maxCoeff();
}

/// a|n> = sqrt(n)|n-1>, and its adjoint.
inline std::pair<OperatorMatrix, OperatorMatrix> ladder_matrices(Eigen::Index N, const ModelParams& params) {
  detail::require_dim(N);
  Matrix a = Matrix::Zero(N, N);
  for (Eigen::Index n = 1; n < N; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  Matrix adag = a.adjoint();
  return {OperatorMatrix{std::move(a), params}, OperatorMatrix{std::move(adag), params}};
}

/// x = (a + a^+)/sqrt(2 m omega),  p = i sqrt(m omega / 2) (a^+ - a).
inline std::pair<OperatorMatrix, OperatorMatrix> xp_matrices(Eigen::Index N, const ModelParams& params) {
  const auto [a, adag] = ladder_matrices(N, params);
  const double mw = params.m_omega();
  Matrix x = (a.entries + adag.entries) / std::sqrt(2.0 * mw);
  Matrix p = cplx(0.0, std::sqrt(0.5 * mw)) * (adag.entries - a.entries);
  return {OperatorMatrix{std::move(x), params}, OperatorMatrix{std::move(p), params}};
}

/// (p + i m omega x)(p - i m omega x) = 2 m omega a^+ a, exactly diagonal.
inline OperatorMatrix reverted_product(Eigen::Index N, const ModelParams& params) {
  detail::require_dim(N);
  Matrix m = Matrix::Zero(N, N);
  for (Eigen::Index n = 0; n < N; ++n) m(n, n) = 2.0 * params.m_omega() * static_cast<double>(n);
  return {std::move(m), params};
}

/// The same operator assembled as the literal product of truncated x and p.
inline OperatorMatrix reverted_product_from_xp(Eigen::Index N, const ModelParams& params) {
  const auto [x, p] = xp_matrices(N, params);
  const cplx imw(0.0, params.m_omega());
  Matrix m = (p.entries + imw * x.entries) * (p.entries - imw * x.entries);
  return {std::move(m), params};
}

/// p + i m omega x = i sqrt(2 m omega) a^+.
///
/// With a = (m omega x + i p)/sqrt(2 m omega) the linear term is a pure
/// raising operator: strictly lower triangular in the number basis. Building
/// it from the ladder entries keeps the structural zeros exact.
inline OperatorMatrix linear_term(Eigen::Index N, const ModelParams& params) {
  const auto [a, adag] = ladder_matrices(N, params);
  Matrix m = cplx(0.0, std::sqrt(2.0 * params.m_omega())) * adag.entries;
  return {std::move(m), params};
}

/// Spatial operator whose eigenvalue is E^2 (SR, spacelike) or E^2 + m^2 E / E_p
/// (lightlike): P_rev^2 + m^2 - (m^2/E_p)(p + i m omega x).
inline OperatorMatrix hamiltonian_sq(GeometryKind geometry, Eigen::Index N, const ModelParams& params) {
  if (geometry != GeometryKind::SR && geometry != GeometryKind::Spacelike &&
      geometry != GeometryKind::Lightlike) {
    fail(ErrorKind::WrongGeometry,
         std::string(name(geometry)) + " reduces to a per-level quadratic, not a matrix problem");
  }
  OperatorMatrix h = reverted_product(N, params);
  h.entries.diagonal().array() += 1.0;
  if (geometry != GeometryKind::SR && !params.undeformed()) {
    h.entries -= params.eps() * linear_term(N, params).entries;
  }
  return h;
}

/// (p - kappa)^2 + m^2 omega^2 (x - i delta)^2 + m^2 - m omega with truncated x, p.
inline OperatorMatrix shifted_variable_form(Eigen::Index N, const ModelParams& params) {
  const auto [x, p] = xp_matrices(N, params);
  const DeformationShifts s = deformation_shifts(params);
  const double mw = params.m_omega();
  const Matrix id = Matrix::Identity(N, N);
  const Matrix ps = p.entries - s.kappa * id;
  const Matrix xs = x.entries - cplx(0.0, s.delta) * id;
  Matrix m = ps * ps + (mw * mw) * (xs * xs) + (1.0 - mw) * id;
  return {std::move(m), params};
}

namespace detail {

/// Roots of a e^2 + b e - c = 0 with a, c > 0 by bisection on each sign, then
/// one guarded Newton polish.
inline std::pair<double, double> bracketed_quadratic_roots(double a, double b, double c) {
  const auto f = [=](double e) { return (a * e + b) * e - c; };
  const double bound = 1.0 + std::max(std::abs(b), std::abs(c)) / a;

  auto solve = [&](double lo, double hi) {
    double flo = f(lo);
    for (int iter = 0; iter < 2000; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double fmid = f(mid);
      if (fmid == 0.0) return mid;
      if ((fmid < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
      }
    }
    double root = 0.5 * (lo + hi);
    const double deriv = 2.0 * a * root + b;
    if (deriv != 0.0) {
      const double polished = root - f(root) / deriv;
      if (polished >= lo && polished <= hi && std::abs(f(polished)) <= std::abs(f(root))) root = polished;
    }
    return root;
  };
  return {solve(0.0, bound), solve(-bound, 0.0)};
}

}  // namespace detail

/// Branch energies from the per-level quadratic of the operator reduction,
/// found numerically (independent of the closed forms in spectra.hpp).
inline std::pair<double, double> timelike_quadratic_eigen(GeometryKind geometry, std::uint64_t n,
                                                          const ModelParams& params) {
  const double eps = params.eps();
  const double c = 1.0 + 2.0 * params.m_omega() * static_cast<double>(n);
  switch (geometry) {
    case GeometryKind::SR:
    case GeometryKind::Spacelike:
      return detail::bracketed_quadratic_roots(1.0, 0.0, c);
    case GeometryKind::Timelike:
    case GeometryKind::Lightlike:
      return detail::bracketed_quadratic_roots(1.0, eps, c);
    case GeometryKind::MagueijoSmolin:
      params.require_ms_valid();
      return detail::bracketed_quadratic_roots(1.0 - eps * eps, 2.0 * eps, c);
  }
  return {0.0, 0.0};
}

/// exp(scale * A) for Hermitian A via its eigendecomposition.
inline Matrix expm_hermitian(const Matrix& A, cplx scale) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(A);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::ConvergenceFailure, "Hermitian eigendecomposition did not converge");
  }
  const Eigen::VectorXcd f =
      (scale * solver.eigenvalues().cast<cplx>()).array().exp().matrix();
  return solver.eigenvectors() * f.asDiagonal() * solver.eigenvectors().adjoint();
}

/// S = exp(-delta p) exp(-i kappa x).
inline OperatorMatrix similarity_matrix(Eigen::Index N, const ModelParams& params) {
  const auto [x, p] = xp_matrices(N, params);
  const DeformationShifts s = deformation_shifts(params);
  if (params.undeformed()) return {Matrix::Identity(N, N), params};
  Matrix m = expm_hermitian(p.entries, -s.delta) * expm_hermitian(x.entries, cplx(0.0, -s.kappa));
  return {std::move(m), params};
}

/// S^{-1} = exp(i kappa x) exp(delta p), from the same truncated generators.
inline OperatorMatrix similarity_inverse(Eigen::Index N, const ModelParams& params) {
  const auto [x, p] = xp_matrices(N, params);
  const DeformationShifts s = deformation_shifts(params);
  if (params.undeformed()) return {Matrix::Identity(N, N), params};
  Matrix m = expm_hermitian(x.entries, cplx(0.0, s.kappa)) * expm_hermitian(p.entries, s.delta);
  return {std::move(m), params};
}

/// eta = S^+ S.
inline OperatorMatrix metric_matrix(Eigen::Index N, const ModelParams& params) {
  const OperatorMatrix S = similarity_matrix(N, params);
  Matrix eta = S.entries.adjoint() * S.entries;
  return {std::move(eta), params};
}

/// exp(2 delta kappa) exp(-2 delta p): conjugating p by exp(-i kappa x) shifts it by -kappa.
inline OperatorMatrix metric_reduced(Eigen::Index N, const ModelParams& params) {
  const auto [x, p] = xp_matrices(N, params);
  const DeformationShifts s = deformation_shifts(params);
  Matrix eta = std::exp(2.0 * s.delta * s.kappa) * expm_hermitian(p.entries, -2.0 * s.delta);
  return {std::move(eta), params};
}

/// max |H^+ eta - eta H| on the leading interior block.
inline double pseudo_hermiticity_residual(const OperatorMatrix& H, const OperatorMatrix& eta,
                                          double interior_fraction = 0.5) {
  if (H.dim() != eta.dim()) fail(ErrorKind::InvalidArgument, "H and eta dimensions differ");
  Eigen::LLT<Matrix> chol(eta.entries);
  if (chol.info() != Eigen::Success) fail(ErrorKind::SingularMatrix, "eta is not positive definite");
  const Matrix defect = H.entries.adjoint() * eta.entries - eta.entries * H.entries;
  return interior_max_abs(defect, detail::interior_size(H.dim(), interior_fraction));
}

struct EtaGram {
  Matrix gram;           // (psi_m, psi_n)_eta
  Matrix biorthonormal;  // <chi_m | psi_n>, chi = eta psi
};

/// eta-Gram matrix of the leading M states psi_n = S^{-1}|n>.
inline EtaGram eta_gram(Eigen::Index M, Eigen::Index N, const ModelParams& params) {
  if (M < 1 || 2 * M > N) fail(ErrorKind::InvalidArgument, "eta_gram needs 1 <= M <= N/2");
  const OperatorMatrix S = similarity_matrix(N, params);
  const OperatorMatrix Sinv = similarity_inverse(N, params);
  const double defect = (S.entries * Sinv.entries - Matrix::Identity(N, N)).cwiseAbs().maxCoeff();
  if (!(defect < 1e-6)) {
    fail(ErrorKind::SingularMatrix, "S S^{-1} deviates from identity by " + std::to_string(defect));
  }
  const Matrix eta = S.entries.adjoint() * S.entries;
  const Matrix psi = Sinv.entries.leftCols(M);
  const Matrix chi = eta * psi;
  return {psi.adjoint() * eta * psi, chi.adjoint() * psi};
}

enum class EigenMethod { Auto, Dense };

namespace detail {

inline bool is_triangular(const Matrix& m) {
  const Eigen::Index n = m.rows();
  bool lower = true, upper = true;
  for (Eigen::Index j = 0; j < n && (lower || upper); ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i < j && m(i, j) != cplx(0.0)) lower = false;
      if (i > j && m(i, j) != cplx(0.0)) upper = false;
    }
  }
  return lower || upper;
}

}  // namespace detail

/// All eigenvalues of a dense square matrix. Triangular inputs (exact zeros)
/// read the diagonal unless Dense is requested.
inline SpectrumReport eigenvalues(const OperatorMatrix& H, EigenMethod method = EigenMethod::Auto) {
  const Matrix& m = H.entries;
  if (m.rows() != m.cols()) fail(ErrorKind::InvalidArgument, "matrix is not square");
  detail::require_dim(m.rows());

  SpectrumReport report;
  if (method == EigenMethod::Auto && detail::is_triangular(m)) {
    report.triangular_shortcut = true;
    report.eigenvalues.resize(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index k = 0; k < m.rows(); ++k) report.eigenvalues[static_cast<std::size_t>(k)] = m(k, k);
  } else {
    Eigen::ComplexEigenSolver<Matrix> solver;
    solver.compute(m, false);
    if (solver.info() != Eigen::Success) {
      fail(ErrorKind::ConvergenceFailure,
           "complex Schur iteration did not converge (dim " + std::to_string(m.rows()) +
               ", iteration budget " + std::to_string(solver.getMaxIterations()) + ")");
    }
    const auto& ev = solver.eigenvalues();
    report.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  }
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  for (const cplx& z : report.eigenvalues) report.max_imag = std::max(report.max_imag, std::abs(z.imag()));
  return report;
}

/// Counts leading eigenvalues matching `predicted` (in order) to relative `tol`,
/// stores it in the report, and returns the worst relative deviation seen.
inline double match_levels(SpectrumReport& report, std::span<const double> predicted, double tol) {
  report.matched_levels = 0;
  double worst = 0.0;
  const std::size_t count = std::min(predicted.size(), report.eigenvalues.size());
  for (std::size_t k = 0; k < count; ++k) {
    const double scale = std::max(1.0, std::abs(predicted[k]));
    const double dev = std::abs(report.eigenvalues[k] - predicted[k]) / scale;
    worst = std::max(worst, dev);
    if (dev <= tol) ++report.matched_levels;
  }
  return worst;
}

}  // namespace dsrosc

#endif
