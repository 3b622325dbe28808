#pragma once

#include <functional>

#include "ddmpc/num/types.hpp"

namespace ddmpc::num {

/// Central-difference gradient of a scalar function. The step is scaled
/// per coordinate by max(1, |x_i|). Throws if any evaluation is non-finite,
/// naming the offending coordinate.
Vec finite_diff_grad(const std::function<double(const Vec&)>& f, const Vec& x,
                     double h = 1e-5);

}  // namespace ddmpc::num
