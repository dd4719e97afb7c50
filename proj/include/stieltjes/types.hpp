#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace smp {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Failure categories shared by the library and the command line front end.
/// The CLI maps each kind onto its exit code.
enum class ErrorKind {
  Schema,
  NotHermitian,
  OrderTooHigh,
  OrderTooLow,
  NotPSD,
  InconsistentTruncation,
  PropertyViolated,
  BadPoint,
  CompletionInfeasible,
  NotIndeterminate,
  WeylLimitDivergent,
  NotStieltjesClass,
  ParameterDegenerate,
  PoleHit,
  NoConvergence,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Raised by the non-negativity checks; carries the offending vector.
class PropertyViolation : public Error {
public:
  PropertyViolation(const std::string& what, Vec witness)
      : Error(ErrorKind::PropertyViolated, what), witness_(std::move(witness)) {}

  const Vec& witness() const noexcept { return witness_; }

private:
  Vec witness_;
};

}  // namespace smp
