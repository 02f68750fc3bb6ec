#ifndef DSROSC_ERRORS_HPP
#define DSROSC_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace dsrosc {

enum class ErrorKind {
  DomainViolation,      // 1 + l_p a.p <= 0
  MSPole,               // 1 - E/E_p == 0 in the squared-denominator invariant
  MSDegenerate,         // eps >= 1, the MS quadratic loses its leading coefficient
  NegativeDiscriminant,
  WrongGeometry,
  InvalidArgument,
  Range,                // overflow / degree cap in special functions
  ConvergenceFailure,
  SingularMatrix,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::MSPole: return "MSPoleError";
    case ErrorKind::MSDegenerate: return "MSDegenerate";
    case ErrorKind::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorKind::WrongGeometry: return "WrongGeometry";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Range: return "RangeError";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Errors that signal an invalid physical model rather than a bad invocation.
  bool is_model_error() const noexcept {
    return kind_ != ErrorKind::InvalidArgument;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace dsrosc

#endif
