#ifndef DSROSC_SPECTRA_HPP
#define DSROSC_SPECTRA_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dsrosc/errors.hpp"
#include "dsrosc/params.hpp"

namespace dsrosc {

/// Both energy branches of level n, in units of the mass.
struct BranchPair {
  std::uint64_t n = 0;
  double e_plus = 0.0;
  double e_minus = 0.0;
  bool admissible = true;
  GeometryKind geometry = GeometryKind::SR;
};

struct ShiftReport {
  std::uint64_t n = 0;
  double delta_e_plus = 0.0;  // e_plus - e_plus^SR
  double leading = 0.0;       // analytic leading-order shift
  GeometryKind geometry = GeometryKind::SR;
};

/// Eigenvalue of the reverted-product operator on level n: 2 n m omega, in units of m^2.
inline double oscillator_eigenvalue(std::uint64_t n, const ModelParams& params) {
  return 2.0 * static_cast<double>(n) * params.Omega();
}

namespace detail {

inline double level_constant(std::uint64_t n, const ModelParams& params) {
  return 1.0 + oscillator_eigenvalue(n, params);
}

inline bool first_power(GeometryKind g) {
  return g == GeometryKind::Timelike || g == GeometryKind::Lightlike;
}

}  // namespace detail

/// Closed-form branches. Every branch here is a sum of terms of like sign
/// within the physical domain (1 + 2n Omega >= 1 > eps), so the direct form
/// does not cancel; the cancelling quantity is the shift, see `positive_shift`.
inline BranchPair energy_branches(GeometryKind geometry, std::uint64_t n, const ModelParams& params) {
  const double A = detail::level_constant(n, params);
  const double eps = params.eps();
  BranchPair out;
  out.n = n;
  out.geometry = geometry;
  switch (geometry) {
    case GeometryKind::SR:
    case GeometryKind::Spacelike: {
      const double r = std::sqrt(A);
      out.e_plus = r;
      out.e_minus = -r;
      break;
    }
    case GeometryKind::Timelike:
    case GeometryKind::Lightlike: {
      const double r = std::sqrt(A + 0.25 * eps * eps);
      out.e_plus = -0.5 * eps + r;
      out.e_minus = -0.5 * eps - r;
      break;
    }
    case GeometryKind::MagueijoSmolin: {
      params.require_ms_valid();
      const double lead = 1.0 - eps * eps;
      const double radicand = 1.0 + oscillator_eigenvalue(n, params) * lead;
      if (radicand < 0.0) fail(ErrorKind::NegativeDiscriminant, "MS radicand < 0");
      const double s = std::sqrt(radicand);
      out.e_plus = (-eps + s) / lead;
      out.e_minus = (-eps - s) / lead;
      break;
    }
  }
  // Below-pole criterion e_+ < 1/eps; only the E-dependent denominators have a pole.
  if (detail::first_power(geometry) || geometry == GeometryKind::MagueijoSmolin) {
    out.admissible = eps == 0.0 || out.e_plus * eps < 1.0;
  }
  return out;
}

inline double branch_sum(GeometryKind geometry, std::uint64_t n, const ModelParams& params) {
  const BranchPair b = energy_branches(geometry, n, params);
  return b.e_plus + b.e_minus;
}

/// The n-independent value branch_sum must take.
inline double expected_branch_sum(GeometryKind geometry, const ModelParams& params) {
  const double eps = params.eps();
  switch (geometry) {
    case GeometryKind::SR:
    case GeometryKind::Spacelike: return 0.0;
    case GeometryKind::Timelike:
    case GeometryKind::Lightlike: return -eps;
    case GeometryKind::MagueijoSmolin:
      params.require_ms_valid();
      return -2.0 * eps / (1.0 - eps * eps);
  }
  return 0.0;
}

/// Branches measured from the shifted origin E + m^2/(2 E_p); symmetric by construction.
inline std::pair<double, double> reparametrized_branches(GeometryKind geometry, std::uint64_t n,
                                                         const ModelParams& params) {
  if (!detail::first_power(geometry)) {
    fail(ErrorKind::WrongGeometry, "energy reparametrization applies to timelike/lightlike only");
  }
  const double eps = params.eps();
  const double r = std::sqrt(detail::level_constant(n, params) + 0.25 * eps * eps);
  return {r, -r};
}

/// Largest level below the pole at leading order, (1/eps^2 - 1) / (2 Omega).
/// nullopt means unbounded.
inline std::optional<std::uint64_t> admissible_nmax(GeometryKind geometry, const ModelParams& params) {
  if (geometry == GeometryKind::SR || geometry == GeometryKind::Spacelike || params.undeformed()) {
    return std::nullopt;
  }
  const double eps = params.eps();
  const double bound = (1.0 - eps * eps) / (2.0 * params.Omega() * eps * eps);
  if (!(bound > 0.0)) return 0;
  // Exact integers such as 120 come out as 119.99999999999997; absorb the round-off.
  return static_cast<std::uint64_t>(std::floor(bound * (1.0 + 1e-12)));
}

inline double leading_shift(GeometryKind geometry, const ModelParams& params) {
  switch (geometry) {
    case GeometryKind::SR:
    case GeometryKind::Spacelike: return 0.0;
    case GeometryKind::Timelike:
    case GeometryKind::Lightlike: return -0.5 * params.eps();
    case GeometryKind::MagueijoSmolin: return -params.eps();
  }
  return 0.0;
}

/// e_{n,+} - e_{n,+}^SR, evaluated without the cancellation of the naive difference.
inline double positive_shift(GeometryKind geometry, std::uint64_t n, const ModelParams& params) {
  const double eps = params.eps();
  const double A = detail::level_constant(n, params);
  const double r = std::sqrt(A);
  switch (geometry) {
    case GeometryKind::SR:
    case GeometryKind::Spacelike: return 0.0;
    case GeometryKind::Timelike:
    case GeometryKind::Lightlike: {
      const double q = 0.25 * eps * eps;
      return -0.5 * eps + q / (std::sqrt(A + q) + r);
    }
    case GeometryKind::MagueijoSmolin: {
      params.require_ms_valid();
      const double lead = 1.0 - eps * eps;
      const double lam = oscillator_eigenvalue(n, params);
      const double s = std::sqrt(1.0 + lam * lead);
      return (-eps + eps * eps * r - lam * eps * eps / (s + r)) / lead;
    }
  }
  return 0.0;
}

inline std::vector<ShiftReport> shift_table(const ModelParams& params, std::uint64_t n_max,
                                            std::span<const GeometryKind> geometries) {
  std::vector<ShiftReport> rows;
  rows.reserve((n_max + 1) * geometries.size());
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    for (auto g : geometries) {
      rows.push_back({n, positive_shift(g, n, params), leading_shift(g, params), g});
    }
  }
  return rows;
}

inline std::vector<ShiftReport> shift_table(const ModelParams& params, std::uint64_t n_max) {
  return shift_table(params, n_max, kAllGeometries);
}

/// |Delta e_{n,+}| / e_{n,+}^SR; falls off as n^{-1/2} at large n.
inline double relative_correction(GeometryKind geometry, std::uint64_t n, const ModelParams& params) {
  if (geometry == GeometryKind::SR || geometry == GeometryKind::Spacelike) {
    fail(ErrorKind::WrongGeometry, std::string(name(geometry)) + " has no spectral shift");
  }
  if (n < 1) fail(ErrorKind::InvalidArgument, "relative_correction needs n >= 1");
  return std::abs(positive_shift(geometry, n, params)) /
         std::sqrt(detail::level_constant(n, params));
}

}  // namespace dsrosc

#endif
