#ifndef DSROSC_KINEMATICS_HPP
#define DSROSC_KINEMATICS_HPP

#include <algorithm>
#include <cmath>
#include <string>

#include "dsrosc/errors.hpp"
#include "dsrosc/params.hpp"

namespace dsrosc {

/// (E, p) in units of the mass.
struct TwoMomentum {
  double E = 0.0;
  double p = 0.0;
};

enum class CausalClass { Timelike, Spacelike, Lightlike };

/// Constant covector a_mu selecting the deformation direction.
struct Covector {
  double a0 = 0.0;
  double a1 = 0.0;

  /// Sign of -a0^2 + a1^2 under diag(-1, +1). The zero covector has no class.
  CausalClass classify() const {
    if (a0 == 0.0 && a1 == 0.0) fail(ErrorKind::InvalidArgument, "null covector has no causal class");
    const double norm = -a0 * a0 + a1 * a1;
    if (norm < 0.0) return CausalClass::Timelike;
    if (norm > 0.0) return CausalClass::Spacelike;
    return CausalClass::Lightlike;
  }

  /// The representative of this covector's class: (-1,0), (0,-1) or (-1,-1).
  Covector canonical() const {
    switch (classify()) {
      case CausalClass::Timelike: return {-1.0, 0.0};
      case CausalClass::Spacelike: return {0.0, -1.0};
      case CausalClass::Lightlike: return {-1.0, -1.0};
    }
    return {};
  }

  /// a.p for the canonical representatives: -E, -p, -(E+p).
  double contract(const TwoMomentum& q) const { return a0 * q.E + a1 * q.p; }
};

inline Covector covector_for(GeometryKind g) {
  switch (g) {
    case GeometryKind::Timelike: return {-1.0, 0.0};
    case GeometryKind::Spacelike: return {0.0, -1.0};
    case GeometryKind::Lightlike: return {-1.0, -1.0};
    default:
      fail(ErrorKind::WrongGeometry,
           std::string(name(g)) + " is not a first-power covector geometry");
  }
}

/// 1 + l_p a.p for the canonical representative of `a`.
inline double map_denominator(const TwoMomentum& q, const Covector& a, const ModelParams& params) {
  return 1.0 + params.eps() * a.canonical().contract(q);
}

/// pi^mu = p^mu / sqrt(1 + l_p a.p).
inline TwoMomentum deformed_map(const TwoMomentum& q, const Covector& a, const ModelParams& params) {
  const double denom = map_denominator(q, a, params);
  if (!(denom > 0.0)) {
    fail(ErrorKind::DomainViolation,
         "1 + l_p a.p = " + std::to_string(denom) + " leaves the physical domain");
  }
  if (params.undeformed()) return q;
  const double s = 1.0 / std::sqrt(denom);
  return {q.E * s, q.p * s};
}

/// Denominator of the mass-shell condition for `geometry`, squared for MS.
inline double casimir_denominator(const TwoMomentum& q, GeometryKind geometry,
                                  const ModelParams& params) {
  switch (geometry) {
    case GeometryKind::SR: return 1.0;
    case GeometryKind::Timelike:
    case GeometryKind::Spacelike:
    case GeometryKind::Lightlike:
      return map_denominator(q, covector_for(geometry), params);
    case GeometryKind::MagueijoSmolin: {
      const double d = 1.0 - params.eps() * q.E;
      return d * d;
    }
  }
  return 1.0;
}

/// (E^2 - p^2) / denominator - m^2, in units of m^2. Zero on the deformed shell.
inline double casimir_residual(const TwoMomentum& q, GeometryKind geometry, const ModelParams& params) {
  const double invariant = q.E * q.E - q.p * q.p;
  switch (geometry) {
    case GeometryKind::SR:
      return invariant - 1.0;
    case GeometryKind::Timelike:
    case GeometryKind::Spacelike:
    case GeometryKind::Lightlike: {
      const double denom = casimir_denominator(q, geometry, params);
      if (!(denom > 0.0)) {
        fail(ErrorKind::DomainViolation,
             std::string(name(geometry)) + " denominator " + std::to_string(denom) + " <= 0");
      }
      return invariant / denom - 1.0;
    }
    case GeometryKind::MagueijoSmolin: {
      const double d = 1.0 - params.eps() * q.E;
      if (d == 0.0) fail(ErrorKind::MSPole, "E = E_p");
      return invariant / (d * d) - 1.0;
    }
  }
  return 0.0;
}

/// max component of |pi - p (1 - l_p a.p / 2)|; O(eps^2) at fixed p.
inline double map_expansion_defect(const TwoMomentum& q, const Covector& a, const ModelParams& params) {
  const TwoMomentum pi = deformed_map(q, a, params);
  const double factor = 1.0 - 0.5 * params.eps() * a.canonical().contract(q);
  return std::max(std::abs(pi.E - q.E * factor), std::abs(pi.p - q.p * factor));
}

}  // namespace dsrosc

#endif
