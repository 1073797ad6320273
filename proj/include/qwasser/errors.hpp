#pragma once

#include <stdexcept>
#include <string>

namespace qwasser {

// Numerical failure (non-convergence, residual blow-up). Carries the residual
// that triggered it and, for solver failures, the best primal value reached.
class numeric_error : public std::runtime_error {
 public:
  numeric_error(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  numeric_error(const std::string& what, double residual, double best_value,
                double primal_residual, double dual_residual, int iterations)
      : std::runtime_error(what),
        residual_(residual),
        best_value_(best_value),
        primal_residual_(primal_residual),
        dual_residual_(dual_residual),
        iterations_(iterations) {}

  double residual() const { return residual_; }
  double best_value() const { return best_value_; }
  double primal_residual() const { return primal_residual_; }
  double dual_residual() const { return dual_residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_ = 0;
  double best_value_ = 0;
  double primal_residual_ = 0;
  double dual_residual_ = 0;
  int iterations_ = 0;
};

}  // namespace qwasser
