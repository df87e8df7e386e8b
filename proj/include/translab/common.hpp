#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace translab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Numerical tolerances shared by every module.
///
/// `geometric` governs exact-geometry predicates (unit length, orthogonality,
/// canonical forms). `feasibility` is the band around zero depth inside which
/// a direction counts as tangent. `angular` is the cone extent (radians) below
/// which a cone of directions is treated as a single direction.
struct Tolerance {
  double geometric = 1e-10;
  double feasibility = 1e-8;
  double angular = 1e-5;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical solver failed to converge on its input.
class SolverIncident : public std::runtime_error {
 public:
  SolverIncident(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A combinatorial or sampling budget ran out before the answer was known.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace translab
