#ifndef DSROSC_PARAMS_HPP
#define DSROSC_PARAMS_HPP

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "dsrosc/errors.hpp"

namespace dsrosc {

/// Which mass-shell condition is in force. Enumerator order is the canonical
/// output order used by the CLI.
enum class GeometryKind { SR, Timelike, Spacelike, Lightlike, MagueijoSmolin };

inline constexpr std::array<GeometryKind, 5> kAllGeometries = {
    GeometryKind::SR, GeometryKind::Timelike, GeometryKind::Spacelike,
    GeometryKind::Lightlike, GeometryKind::MagueijoSmolin};

/// Short token used on the command line and in CSV output.
inline std::string_view token(GeometryKind g) {
  switch (g) {
    case GeometryKind::SR: return "sr";
    case GeometryKind::Timelike: return "tl";
    case GeometryKind::Spacelike: return "sl";
    case GeometryKind::Lightlike: return "ll";
    case GeometryKind::MagueijoSmolin: return "ms";
  }
  return "?";
}

inline std::string_view name(GeometryKind g) {
  switch (g) {
    case GeometryKind::SR: return "SR";
    case GeometryKind::Timelike: return "Timelike";
    case GeometryKind::Spacelike: return "Spacelike";
    case GeometryKind::Lightlike: return "Lightlike";
    case GeometryKind::MagueijoSmolin: return "MagueijoSmolin";
  }
  return "?";
}

inline std::optional<GeometryKind> parse_geometry(std::string_view s) {
  for (auto g : kAllGeometries) {
    if (s == token(g) || s == name(g)) return g;
  }
  return std::nullopt;
}

/// Oscillator parameters. Everything downstream works in units where the mass
/// is 1: energies are E/m, lengths are in 1/m, and the oscillator enters only
/// through Omega = omega/m and eps = m/E_p. `mass` is kept for converting back.
class ModelParams {
 public:
  static ModelParams dimensionless(double Omega, double eps, double mass = 1.0) {
    return ModelParams(Omega, eps, mass);
  }

  /// E_p = +inf selects the undeformed (SR) limit.
  static ModelParams physical(double m, double omega, double Ep) {
    if (!(m > 0.0) || !std::isfinite(m)) fail(ErrorKind::InvalidArgument, "mass must be positive");
    if (!(Ep > 0.0)) fail(ErrorKind::InvalidArgument, "E_p must be positive");
    const double eps = std::isinf(Ep) ? 0.0 : m / Ep;
    return ModelParams(omega / m, eps, m);
  }

  double Omega() const noexcept { return Omega_; }
  double eps() const noexcept { return eps_; }
  double mass() const noexcept { return mass_; }

  double omega() const noexcept { return Omega_ * mass_; }
  double planck_energy() const noexcept {
    return eps_ == 0.0 ? std::numeric_limits<double>::infinity() : mass_ / eps_;
  }

  /// m*omega in units of m^2.
  double m_omega() const noexcept { return Omega_; }

  bool undeformed() const noexcept { return eps_ == 0.0; }

  /// The squared-denominator invariant needs 1 - eps^2 > 0.
  void require_ms_valid() const {
    if (!(eps_ < 1.0)) {
      fail(ErrorKind::MSDegenerate,
           "Magueijo-Smolin branches need eps < 1 (1 - eps^2 = " +
               std::to_string(1.0 - eps_ * eps_) + ")");
    }
  }

 private:
  ModelParams(double Omega, double eps, double mass) : Omega_(Omega), eps_(eps), mass_(mass) {
    if (!(Omega > 0.0) || !std::isfinite(Omega))
      fail(ErrorKind::InvalidArgument, "Omega must be positive and finite");
    if (!(eps >= 0.0) || !std::isfinite(eps))
      fail(ErrorKind::InvalidArgument, "eps must be non-negative and finite");
    if (!(mass > 0.0) || !std::isfinite(mass))
      fail(ErrorKind::InvalidArgument, "mass must be positive and finite");
  }

  double Omega_;
  double eps_;
  double mass_;
};

}  // namespace dsrosc

#endif
