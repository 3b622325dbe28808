#pragma once

#include <functional>
#include <stdexcept>

#include "ddmpc/num/types.hpp"

namespace ddmpc::num {

struct OptimizerOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-6;
  int memory_pairs = 20;         // L-BFGS history length
  double sufficient_decrease = 1e-4;  // Wolfe c1
  double curvature = 0.9;             // Wolfe c2
  int max_line_search_steps = 50;

  void validate() const;
};

enum class StopReason {
  gradient_tolerance,
  max_iterations,
  line_search_failed,
};

struct MinimizeResult {
  Vec x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  StopReason reason = StopReason::max_iterations;
  bool line_search_failed = false;
};

/// Thrown when the objective or its gradient turns non-finite during the
/// search; `iterate` carries the point where it happened.
struct NonFiniteError : std::runtime_error {
  NonFiniteError(const std::string& msg, Vec where)
      : std::runtime_error(msg), iterate(std::move(where)) {}
  Vec iterate;
};

/// Objective contract: fills `grad` (resized by the callee if needed) and
/// returns the function value at x.
using Objective = std::function<double(const Vec& x, Vec& grad)>;

/// Limited-memory BFGS with a strong-Wolfe line search. Deterministic:
/// identical inputs give bit-identical results. Guarantees f(x*) <= f(x0);
/// on line-search breakdown returns the best iterate found, flagged.
MinimizeResult lbfgs_minimize(const Objective& objective, Vec x0,
                              const OptimizerOptions& opts = {});

}  // namespace ddmpc::num
