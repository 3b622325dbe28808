#include "ddmpc/num/finite_diff.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ddmpc::num {

Vec finite_diff_grad(const std::function<double(const Vec&)>& f, const Vec& x,
                     double h) {
  if (!(h > 0)) throw std::invalid_argument("finite_diff_grad: h must be > 0");
  Vec g(x.size());
  Vec xp = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double hi = h * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + hi;
    const double fp = f(xp);
    xp[i] = x[i] - hi;
    const double fm = f(xp);
    xp[i] = x[i];
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw std::runtime_error("finite_diff_grad: non-finite evaluation at coordinate " +
                               std::to_string(i));
    }
    g[i] = (fp - fm) / (2.0 * hi);
  }
  return g;
}

}  // namespace ddmpc::num
