#ifndef DSROSC_SPECIAL_FUNCTIONS_HPP
#define DSROSC_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dsrosc/errors.hpp"
#include "dsrosc/params.hpp"

namespace dsrosc {

using cplx = std::complex<double>;

inline constexpr std::uint32_t kMaxHermiteDegree = 512;

namespace detail {

template <typename T>
bool finite(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return std::isfinite(v);
  } else {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  }
}

}  // namespace detail

/// Physicists' Hermite polynomial H_n(z) by forward recurrence.
/// T is double or std::complex<double>.
template <typename T>
T hermite(std::uint32_t n, const T& z) {
  if (n > kMaxHermiteDegree) {
    fail(ErrorKind::Range, "Hermite degree " + std::to_string(n) + " exceeds cap");
  }
  T prev = T(1.0);
  if (n == 0) return prev;
  T cur = T(2.0) * z;
  for (std::uint32_t k = 1; k < n; ++k) {
    T next = T(2.0) * z * cur - T(2.0 * k) * prev;
    prev = cur;
    cur = next;
  }
  if (!detail::finite(cur)) fail(ErrorKind::Range, "H_" + std::to_string(n) + " overflowed");
  return cur;
}

/// (m omega / pi)^{1/4} / sqrt(2^n n!), accumulated in log space.
inline double norm_const(std::uint32_t n, double m_omega) {
  const double log_n = 0.25 * std::log(m_omega / std::numbers::pi) -
                       0.5 * (n * std::numbers::ln2 + std::lgamma(n + 1.0));
  return std::exp(log_n);
}

/// Normalized oscillator eigenfunction at a complex argument,
/// N_n exp(-m omega z^2 / 2) H_n(sqrt(m omega) z).
///
/// Evaluated by the three-term recurrence of the normalized functions so that
/// neither 2^n n! nor H_n is formed explicitly.
inline cplx hermite_function(std::uint32_t n, cplx z, double m_omega) {
  if (n > kMaxHermiteDegree) {
    fail(ErrorKind::Range, "Hermite degree " + std::to_string(n) + " exceeds cap");
  }
  const cplx y = std::sqrt(m_omega) * z;
  cplx prev = std::pow(m_omega / std::numbers::pi, 0.25) * std::exp(-0.5 * y * y);
  if (n == 0) return prev;
  cplx cur = std::numbers::sqrt2 * y * prev;
  for (std::uint32_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    cplx next = std::sqrt(2.0 / (kk + 1.0)) * y * cur - std::sqrt(kk / (kk + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  if (!detail::finite(cur)) fail(ErrorKind::Range, "phi_" + std::to_string(n) + " overflowed");
  return cur;
}

/// phi_n(x), x in units of 1/m.
inline double phi(std::uint32_t n, double x, const ModelParams& params) {
  return hermite_function(n, cplx(x, 0.0), params.m_omega()).real();
}

/// Momentum and position shifts of the spacelike/lightlike similarity map.
struct DeformationShifts {
  double kappa = 0.0;  // m^2 / (2 E_p), units of m
  double delta = 0.0;  // m / (2 omega E_p), units of 1/m
};

inline DeformationShifts deformation_shifts(const ModelParams& params) {
  return {0.5 * params.eps(), params.eps() / (2.0 * params.Omega())};
}

/// e^{i kappa z} phi_n(z - i delta) continued to complex z.
inline cplx shifted_eigenfunction(std::uint32_t n, cplx z, const ModelParams& params) {
  const DeformationShifts s = deformation_shifts(params);
  return std::exp(cplx(0.0, s.kappa) * z) *
         hermite_function(n, z - cplx(0.0, s.delta), params.m_omega());
}

inline cplx psi_shifted(GeometryKind geometry, std::uint32_t n, double x, const ModelParams& params) {
  if (geometry != GeometryKind::Spacelike && geometry != GeometryKind::Lightlike) {
    fail(ErrorKind::WrongGeometry,
         std::string(name(geometry)) + " eigenfunctions are the unshifted phi_n");
  }
  return shifted_eigenfunction(n, cplx(x, 0.0), params);
}

struct WavefunctionSample {
  double x = 0.0;
  cplx value;
};

/// Stationary eigenfunction for a geometry: phi_n for SR/timelike, the complex
/// translate for spacelike/lightlike. MS has no wavefunction here.
inline cplx eigenfunction(GeometryKind geometry, std::uint32_t n, double x, const ModelParams& params) {
  switch (geometry) {
    case GeometryKind::SR:
    case GeometryKind::Timelike:
      return {phi(n, x, params), 0.0};
    case GeometryKind::Spacelike:
    case GeometryKind::Lightlike:
      return psi_shifted(geometry, n, x, params);
    case GeometryKind::MagueijoSmolin:
      break;
  }
  fail(ErrorKind::WrongGeometry, "no eigenfunction sampling for MagueijoSmolin");
}

inline std::vector<WavefunctionSample> sample_wavefunction(GeometryKind geometry, std::uint32_t n,
                                                           std::span<const double> xs,
                                                           const ModelParams& params) {
  std::vector<WavefunctionSample> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back({x, eigenfunction(geometry, n, x, params)});
  return out;
}

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline constexpr std::uint32_t kMaxGaussHermiteOrder = 256;

/// Gauss-Hermite rule for the weight exp(-y^2): Golub-Welsch start, Newton
/// polish on the normalized recurrence, Christoffel-sum weights.
inline QuadratureRule gauss_hermite(std::uint32_t order) {
  if (order < 1) fail(ErrorKind::InvalidArgument, "Gauss-Hermite order must be >= 1");
  if (order > kMaxGaussHermiteOrder) {
    fail(ErrorKind::Range, "Gauss-Hermite order " + std::to_string(order) + " exceeds cap");
  }
  const std::size_t n = order;
  std::vector<double> x(n, 0.0);
  if (n > 1) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 1; k < n; ++k) {
      jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * static_cast<double>(k));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      fail(ErrorKind::ConvergenceFailure, "Jacobi matrix eigenvalues did not converge");
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
  }

  // psi_k(y) = p_k(y) exp(-y^2/2) with p_k orthonormal for exp(-y^2).
  auto sweep = [n](double y, double& last, double& before_last, double& sum_sq) {
    double prev = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * y * y);
    double cur = 0.0;
    sum_sq = prev * prev;
    before_last = 0.0;
    if (n == 1) {
      last = std::numbers::sqrt2 * y * prev;
      before_last = prev;
      return;
    }
    cur = std::numbers::sqrt2 * y * prev;
    for (std::size_t k = 1; k < n; ++k) {
      sum_sq += cur * cur;
      const double kk = static_cast<double>(k);
      const double next = std::sqrt(2.0 / (kk + 1.0)) * y * cur - std::sqrt(kk / (kk + 1.0)) * prev;
      prev = cur;
      cur = next;
    }
    last = cur;
    before_last = prev;
  };

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double y = x[i];
    bool converged = false;
    double pn = 0.0, pn1 = 0.0, sum_sq = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      sweep(y, pn, pn1, sum_sq);
      const double step = pn / (std::sqrt(2.0 * static_cast<double>(n)) * pn1);
      y -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(y))) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      fail(ErrorKind::ConvergenceFailure,
           "Newton polish of Gauss-Hermite node " + std::to_string(i) + " did not converge");
    }
    sweep(y, pn, pn1, sum_sq);
    rule.nodes[i] = y;
    rule.weights[i] = std::exp(-y * y) / sum_sq;
  }

  // Symmetrize.
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double node = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double weight = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -node;
    rule.nodes[j] = node;
    rule.weights[i] = rule.weights[j] = weight;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace dsrosc

#endif
