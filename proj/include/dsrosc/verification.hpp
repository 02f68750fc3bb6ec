#ifndef DSROSC_VERIFICATION_HPP
#define DSROSC_VERIFICATION_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dsrosc/errors.hpp"
#include "dsrosc/operator_lab.hpp"
#include "dsrosc/params.hpp"
#include "dsrosc/spectra.hpp"
#include "dsrosc/special_functions.hpp"

namespace dsrosc {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

/// Outcome of one oracle suite. A suite fails iff some check's residual
/// exceeds its tolerance; worst_residual/tolerance come from the check with
/// the largest residual-to-tolerance ratio.
struct SuiteReport {
  std::string name;
  bool passed = true;
  double worst_residual = 0.0;
  double tolerance = 0.0;
  std::string parameters;
  double runtime_seconds = 0.0;
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, double>> metrics;

  void add_check(std::string check_name, double residual, double tol) {
    const bool ok = residual <= tol;  // NaN fails
    checks.push_back({std::move(check_name), residual, tol, ok});
  }

  void add_metric(std::string metric_name, double value) {
    metrics.emplace_back(std::move(metric_name), value);
  }

  void finalize() {
    passed = true;
    double worst_ratio = -1.0;
    for (const auto& c : checks) {
      passed = passed && c.passed;
      double ratio;
      if (!c.passed) {
        ratio = std::numeric_limits<double>::infinity();
      } else if (c.tolerance > 0.0) {
        ratio = c.residual / c.tolerance;
      } else {
        ratio = 0.0;
      }
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst_residual = c.residual;
        tolerance = c.tolerance;
      }
    }
  }
};

namespace detail {

class SuiteTimer {
 public:
  explicit SuiteTimer(SuiteReport& report) : report_(report), start_(std::chrono::steady_clock::now()) {}
  ~SuiteTimer() {
    report_.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  SuiteTimer(const SuiteTimer&) = delete;
  SuiteTimer& operator=(const SuiteTimer&) = delete;

 private:
  SuiteReport& report_;
  std::chrono::steady_clock::time_point start_;
};

inline std::string describe(const ModelParams& params) {
  std::ostringstream os;
  os.precision(9);
  os << "Omega=" << params.Omega() << " eps=" << params.eps();
  return os.str();
}

inline double max_abs_deviation_from_identity(const Matrix& m) {
  return (m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

}  // namespace detail

// --- isospectrality ---------------------------------------------------------

inline SuiteReport suite_isospectral(const ModelParams& params, Eigen::Index N = 128,
                                     Eigen::Index n_check = 25, double tol = 1e-8) {
  if (2 * n_check > N) fail(ErrorKind::InvalidArgument, "isospectral suite needs n_check <= N/2");
  SuiteReport report;
  report.name = "isospectral";
  {
    detail::SuiteTimer timer(report);
    report.parameters = detail::describe(params) + " N=" + std::to_string(N) +
                        " n_check=" + std::to_string(n_check);
    const OperatorMatrix H = hamiltonian_sq(GeometryKind::Spacelike, N, params);

    std::vector<double> predicted;
    for (Eigen::Index n = 0; n <= n_check; ++n) {
      predicted.push_back(1.0 + oscillator_eigenvalue(static_cast<std::uint64_t>(n), params));
    }

    SpectrumReport shortcut = eigenvalues(H);
    report.add_check("triangular-structure", shortcut.triangular_shortcut ? 0.0 : 1.0, 0.0);
    report.add_check("diagonal-levels", match_levels(shortcut, predicted, tol), tol);

    // The general dense solver on the same matrix is the nontrivial oracle.
    SpectrumReport dense = eigenvalues(H, EigenMethod::Dense);
    const double dense_dev = match_levels(dense, predicted, tol);
    double low_imag = 0.0;
    for (std::size_t k = 0; k < predicted.size(); ++k) {
      low_imag = std::max(low_imag, std::abs(dense.eigenvalues[k].imag()));
    }
    report.add_check("dense-real-levels", dense_dev, tol);
    report.add_check("dense-imag-levels", low_imag, tol);
    report.add_metric("dense_max_imag_all", dense.max_imag);
    report.add_metric("matched_levels", static_cast<double>(dense.matched_levels));
  }
  report.finalize();
  return report;
}

// --- pointwise eigenfunction residual ---------------------------------------

/// Relative L-infinity residual of H psi - lambda psi on the middle 60% of a
/// uniform grid, derivatives by 4th-order central differences.
inline double eigenfunction_grid_residual(GeometryKind geometry, std::uint32_t n, const ModelParams& params,
                                          double x_min, double x_max, std::size_t points) {
  if (geometry != GeometryKind::Spacelike && geometry != GeometryKind::Lightlike) {
    fail(ErrorKind::WrongGeometry, "grid residual applies to spacelike/lightlike eigenfunctions");
  }
  if (points < 201) fail(ErrorKind::InvalidArgument, "grid residual needs at least 201 points");
  if (n > 10) fail(ErrorKind::InvalidArgument, "grid residual supports n <= 10");
  if (!(x_max > x_min)) fail(ErrorKind::InvalidArgument, "empty grid range");

  const double h = (x_max - x_min) / static_cast<double>(points - 1);
  std::vector<cplx> f(points);
  for (std::size_t i = 0; i < points; ++i) {
    f[i] = psi_shifted(geometry, n, x_min + h * static_cast<double>(i), params);
  }

  // E^2 for spacelike, E^2 + eps E for lightlike: the eigenvalue of the spatial operator.
  const BranchPair b = energy_branches(geometry, n, params);
  const double lambda = geometry == GeometryKind::Spacelike ? b.e_plus * b.e_plus
                                                            : b.e_plus * b.e_plus + params.eps() * b.e_plus;
  const double eps = params.eps();
  const double W = params.m_omega();

  const std::size_t lo = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(0.2 * (points - 1))));
  const std::size_t hi = std::min(points - 3, static_cast<std::size_t>(std::floor(0.8 * (points - 1))));
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double x = x_min + h * static_cast<double>(i);
    const cplx d2 = (-f[i + 2] + 16.0 * f[i + 1] - 30.0 * f[i] + 16.0 * f[i - 1] - f[i - 2]) / (12.0 * h * h);
    const cplx d1 = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
    // p^2 - eps p + W^2 x^2 - i eps W x + 1 - W, with p = -i d/dx.
    const cplx Hf = -d2 + cplx(0.0, eps) * d1 + (W * W * x * x) * f[i] - cplx(0.0, eps * W * x) * f[i] +
                    (1.0 - W) * f[i];
    worst = std::max(worst, std::abs(Hf - lambda * f[i]));
    scale = std::max(scale, std::abs(lambda * f[i]));
  }
  return worst / scale;
}

/// Residuals on successively halved grids, starting from `coarse_points`.
inline std::vector<double> grid_convergence(GeometryKind geometry, std::uint32_t n, const ModelParams& params,
                                            double x_min, double x_max, std::size_t coarse_points,
                                            int levels) {
  std::vector<double> out;
  std::size_t points = coarse_points;
  for (int k = 0; k < levels; ++k) {
    out.push_back(eigenfunction_grid_residual(geometry, n, params, x_min, x_max, points));
    points = 2 * points - 1;
  }
  return out;
}

inline double default_grid_half_width(const ModelParams& params) {
  return 8.0 / std::sqrt(params.m_omega());
}

inline SuiteReport suite_grid_residual(GeometryKind geometry, std::uint32_t n, const ModelParams& params,
                                       double x_min, double x_max, std::size_t points, double tol = 1e-5) {
  SuiteReport report;
  report.name = "grid";
  {
    detail::SuiteTimer timer(report);
    std::ostringstream os;
    os.precision(9);
    os << detail::describe(params) << " geometry=" << token(geometry) << " n=" << n << " x=[" << x_min
       << "," << x_max << "] points=" << points;
    report.parameters = os.str();
    report.add_check(std::string(token(geometry)) + "-n" + std::to_string(n),
                     eigenfunction_grid_residual(geometry, n, params, x_min, x_max, points), tol);
  }
  report.finalize();
  return report;
}

/// Grid suite over several levels and geometries, merged into one report.
inline SuiteReport suite_grid_levels(std::span<const GeometryKind> geometries, std::uint32_t n_max,
                                     const ModelParams& params, std::size_t points, double tol = 1e-5) {
  SuiteReport report;
  report.name = "grid";
  {
    detail::SuiteTimer timer(report);
    const double L = default_grid_half_width(params);
    report.parameters = detail::describe(params) + " n<=" + std::to_string(n_max) +
                        " points=" + std::to_string(points);
    for (auto g : geometries) {
      for (std::uint32_t n = 0; n <= n_max; ++n) {
        report.add_check(std::string(token(g)) + "-n" + std::to_string(n),
                         eigenfunction_grid_residual(g, n, params, -L, L, points), tol);
      }
    }
  }
  report.finalize();
  return report;
}

// --- branch identities --------------------------------------------------------

inline SuiteReport suite_branch_identities(const ModelParams& params, std::uint64_t n_max) {
  SuiteReport report;
  report.name = "branches";
  {
    detail::SuiteTimer timer(report);
    report.parameters = detail::describe(params) + " n_max=" + std::to_string(n_max);
    constexpr double kIdentityTol = 1e-12;
    constexpr double kOracleTol = 1e-10;

    for (auto g : kAllGeometries) {
      if (g == GeometryKind::MagueijoSmolin && !(params.eps() < 1.0)) {
        report.add_metric("ms_skipped_eps_ge_1", 1.0);
        continue;
      }
      const double expected = expected_branch_sum(g, params);
      double sum_dev = 0.0, spread = 0.0, oracle_dev = 0.0, quad_res = 0.0, reparam_dev = 0.0;
      double sum_min = std::numeric_limits<double>::infinity(), sum_max = -sum_min;
      const double eps = params.eps();
      for (std::uint64_t n = 0; n <= n_max; ++n) {
        const BranchPair b = energy_branches(g, n, params);
        const double s = b.e_plus + b.e_minus;
        sum_dev = std::max(sum_dev, std::abs(s - expected));
        sum_min = std::min(sum_min, s);
        sum_max = std::max(sum_max, s);

        const auto [root_plus, root_minus] = timelike_quadratic_eigen(g, n, params);
        oracle_dev = std::max({oracle_dev, std::abs(root_plus - b.e_plus), std::abs(root_minus - b.e_minus)});

        const double c = 1.0 + oscillator_eigenvalue(n, params);
        double qa = 1.0, qb = 0.0;
        if (g == GeometryKind::Timelike || g == GeometryKind::Lightlike) qb = eps;
        if (g == GeometryKind::MagueijoSmolin) {
          qa = 1.0 - eps * eps;
          qb = 2.0 * eps;
        }
        for (double e : {b.e_plus, b.e_minus}) {
          quad_res = std::max(quad_res, std::abs((qa * e + qb) * e - c) / c);
        }

        if (g == GeometryKind::Timelike || g == GeometryKind::Lightlike) {
          const auto [tp, tm] = reparametrized_branches(g, n, params);
          reparam_dev = std::max({reparam_dev, std::abs(tp + tm), std::abs(tp - (b.e_plus + 0.5 * eps)),
                                  std::abs(tm - (b.e_minus + 0.5 * eps))});
        }
      }
      spread = sum_max - sum_min;
      const std::string t(token(g));
      report.add_check(t + "-branch-sum", sum_dev, kIdentityTol);
      report.add_check(t + "-sum-n-independence", spread, kIdentityTol);
      report.add_check(t + "-quadratic-residual", quad_res, kIdentityTol);
      report.add_check(t + "-root-oracle", oracle_dev, kOracleTol);
      if (g == GeometryKind::Timelike || g == GeometryKind::Lightlike) {
        report.add_check(t + "-reparametrized-symmetry", reparam_dev, kIdentityTol);
      }
    }
  }
  report.finalize();
  return report;
}

// --- MS vs first-power displacement ratio -------------------------------------

/// Delta e^MS_{0,+} / Delta e^TL_{0,+} at the given eps.
inline double ms_shift_ratio(double eps, double Omega, std::uint64_t n = 0) {
  const ModelParams p = ModelParams::dimensionless(Omega, eps);
  return positive_shift(GeometryKind::MagueijoSmolin, n, p) / positive_shift(GeometryKind::Timelike, n, p);
}

inline constexpr double kMsRatioSlopeBound = 2.0;

inline SuiteReport suite_ms_ratio(std::span<const double> eps_list, const ModelParams& params) {
  SuiteReport report;
  report.name = "msratio";
  {
    detail::SuiteTimer timer(report);
    if (eps_list.empty()) fail(ErrorKind::InvalidArgument, "msratio needs at least one eps");
    std::vector<double> eps_sorted(eps_list.begin(), eps_list.end());
    for (double e : eps_sorted) {
      if (!(e > 0.0 && e < 0.5)) fail(ErrorKind::InvalidArgument, "msratio eps values must lie in (0, 0.5)");
    }
    std::sort(eps_sorted.begin(), eps_sorted.end(), std::greater<>());
    std::ostringstream os;
    os.precision(9);
    os << "Omega=" << params.Omega() << " n=0 eps_list=";
    for (std::size_t i = 0; i < eps_sorted.size(); ++i) os << (i ? "," : "") << eps_sorted[i];
    report.parameters = os.str();

    double slope = 0.0, monotone_violation = 0.0;
    double prev_dev = std::numeric_limits<double>::infinity();
    for (double e : eps_sorted) {
      const double ratio = ms_shift_ratio(e, params.Omega());
      const double dev = std::abs(ratio - 2.0);
      std::ostringstream key;
      key.precision(9);
      key << "ratio@eps=" << e;
      report.add_metric(key.str(), ratio);
      slope = std::max(slope, dev / e);
      monotone_violation = std::max(monotone_violation, dev - prev_dev);
      prev_dev = dev;
    }
    report.add_metric("fitted_C", slope);
    report.add_check("deviation-slope", slope, kMsRatioSlopeBound);
    report.add_check("monotone-approach", std::max(0.0, monotone_violation), 0.0);
  }
  report.finalize();
  return report;
}

// --- eta structure -----------------------------------------------------------

/// Position-space action of S = exp(-delta p) exp(-i kappa x) on the shifted
/// eigenfunction: exp(kappa delta) exp(-i kappa x) psi_n(x + i delta).
inline cplx similarity_applied_position(std::uint32_t n, double x, const ModelParams& params) {
  const DeformationShifts s = deformation_shifts(params);
  return std::exp(s.kappa * s.delta) * std::exp(cplx(0.0, -s.kappa * x)) *
         shifted_eigenfunction(n, cplx(x, s.delta), params);
}

/// <S psi_m, S psi_n> by Gauss-Hermite quadrature in position space.
inline Matrix position_space_eta_gram(std::uint32_t count, const ModelParams& params, std::uint32_t order = 100) {
  const QuadratureRule rule = gauss_hermite(order);
  const double root = std::sqrt(params.m_omega());
  Matrix g = Matrix::Zero(count, count);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = rule.nodes[i];
    const double x = y / root;
    const double w = rule.weights[i] * std::exp(y * y) / root;
    std::vector<cplx> v(count);
    for (std::uint32_t k = 0; k < count; ++k) v[k] = similarity_applied_position(k, x, params);
    for (std::uint32_t a = 0; a < count; ++a) {
      for (std::uint32_t b = 0; b < count; ++b) g(a, b) += w * std::conj(v[a]) * v[b];
    }
  }
  return g;
}

/// u N max|H| max|eta|: the scale of round-off in the products H^+ eta, eta H.
inline double pseudo_hermiticity_noise(const OperatorMatrix& H, const OperatorMatrix& eta) {
  return std::numeric_limits<double>::epsilon() * static_cast<double>(H.dim()) *
         H.entries.cwiseAbs().maxCoeff() * eta.entries.cwiseAbs().maxCoeff();
}

struct ResidualSweepPoint {
  Eigen::Index N = 0;
  double residual = 0.0;
  double noise = 0.0;
};

inline std::vector<ResidualSweepPoint> pseudo_hermiticity_sweep(const ModelParams& params,
                                                                std::span<const Eigen::Index> dims,
                                                                double interior_fraction = 0.5) {
  std::vector<ResidualSweepPoint> out;
  for (Eigen::Index N : dims) {
    const OperatorMatrix H = hamiltonian_sq(GeometryKind::Spacelike, N, params);
    const OperatorMatrix eta = metric_matrix(N, params);
    out.push_back({N, pseudo_hermiticity_residual(H, eta, interior_fraction), pseudo_hermiticity_noise(H, eta)});
  }
  return out;
}

/// Largest amount by which a residual grows under N-doubling beyond its noise floor.
inline double sweep_monotonicity_violation(std::span<const ResidualSweepPoint> sweep) {
  double violation = 0.0;
  for (std::size_t k = 1; k < sweep.size(); ++k) {
    const double allowed = std::max(sweep[k - 1].residual, sweep[k].noise);
    violation = std::max(violation, sweep[k].residual - allowed);
  }
  return violation;
}

inline SuiteReport suite_eta_structure(const ModelParams& params, Eigen::Index N = 128, Eigen::Index M = 8,
                                       double tol = 1e-8, double pseudo_tol = 1e-6, double quad_tol = 1e-7) {
  SuiteReport report;
  report.name = "eta";
  {
    detail::SuiteTimer timer(report);
    report.parameters = detail::describe(params) + " N=" + std::to_string(N) + " M=" + std::to_string(M);

    const EtaGram g = eta_gram(M, N, params);
    report.add_check("eta-gram-identity", detail::max_abs_deviation_from_identity(g.gram), tol);
    report.add_check("biorthonormality", detail::max_abs_deviation_from_identity(g.biorthonormal), tol);

    const OperatorMatrix H = hamiltonian_sq(GeometryKind::Spacelike, N, params);
    const OperatorMatrix eta = metric_matrix(N, params);
    report.add_check("pseudo-hermiticity", pseudo_hermiticity_residual(H, eta, 0.5), pseudo_tol);

    const Eigen::Index k = detail::interior_size(N, 0.5);
    Eigen::SelfAdjointEigenSolver<Matrix> block(eta.entries.topLeftCorner(k, k), Eigen::EigenvaluesOnly);
    const double lambda_min = block.eigenvalues().minCoeff();
    report.add_metric("eta_interior_min_eigenvalue", lambda_min);
    report.add_check("eta-positivity", lambda_min > 0.0 ? 0.0 : 1.0, 0.0);

    std::vector<Eigen::Index> dims;
    for (Eigen::Index d = std::max<Eigen::Index>(8, N / 8); d <= N; d *= 2) dims.push_back(d);
    const auto sweep = pseudo_hermiticity_sweep(params, dims, 0.5);
    for (const auto& pt : sweep) report.add_metric("pseudo_residual@N=" + std::to_string(pt.N), pt.residual);
    report.add_check("pseudo-hermiticity-doubling", sweep_monotonicity_violation(sweep), 0.0);

    const auto count = static_cast<std::uint32_t>(std::min<Eigen::Index>(5, M));
    const Matrix quad = position_space_eta_gram(count, params, 100);
    const Matrix block_gram = g.gram.topLeftCorner(count, count);
    report.add_check("quadrature-vs-matrix", (quad - block_gram).cwiseAbs().maxCoeff(), quad_tol);
  }
  report.finalize();
  return report;
}

}  // namespace dsrosc

#endif
