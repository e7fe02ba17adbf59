#pragma once

// Limited-memory BFGS with a strong-Wolfe line search.

#include <functional>
#include <span>
#include <vector>

namespace iqcc {

struct OptimizationConfig {
  double gradient_tolerance = 1e-8;  // infinity norm
  int max_evaluations = 200;
  int memory_depth = 10;
};

struct OptimizationResult {
  std::vector<double> t_opt;
  double energy = 0.0;  // objective at t_opt, as last evaluated there
  int evaluations = 0;
  bool converged = false;
  /// Objective value at t0 followed by each accepted iterate.
  std::vector<double> accepted_energies;
};

/// Writes the gradient into its second argument and returns the value.
using ObjectiveWithGradient = std::function<double(std::span<const double>, std::span<double>)>;

/// Minimizes from t0. Converged iff the gradient infinity norm reaches
/// cfg.gradient_tolerance. The returned energy never exceeds the value at
/// t0. Throws NumericError (naming the point) on a non-finite value or
/// gradient, InvalidArgumentError on a non-positive configuration field.
OptimizationResult minimize(const ObjectiveWithGradient& objective, std::span<const double> t0,
                            const OptimizationConfig& cfg = {});

OptimizationResult minimize(const std::function<double(std::span<const double>)>& objective,
                            const std::function<std::vector<double>(std::span<const double>)>& gradient,
                            std::span<const double> t0, const OptimizationConfig& cfg = {});

}  // namespace iqcc
