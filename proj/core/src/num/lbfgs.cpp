#include "ddmpc/num/lbfgs.hpp"

#include <cmath>
#include <deque>

namespace ddmpc::num {

void OptimizerOptions::validate() const {
  if (!(gradient_tolerance > 0)) {
    throw std::invalid_argument("OptimizerOptions: gradient_tolerance must be > 0");
  }
  if (memory_pairs < 1) {
    throw std::invalid_argument("OptimizerOptions: memory_pairs must be >= 1");
  }
  if (!(0 < sufficient_decrease && sufficient_decrease < curvature && curvature < 1)) {
    throw std::invalid_argument(
        "OptimizerOptions: need 0 < sufficient_decrease < curvature < 1");
  }
  if (max_iterations < 0 || max_line_search_steps < 1) {
    throw std::invalid_argument("OptimizerOptions: invalid iteration limits");
  }
}

namespace {

struct Pair {
  Vec s, y;
  double rho;
};

struct LineEval {
  double f;
  double slope;  // directional derivative along d
};

class LineSearch {
 public:
  LineSearch(const Objective& obj, const Vec& x0, const Vec& d, double f0,
             double slope0, Vec& x_out, Vec& g_out)
      : obj_(obj), x0_(x0), d_(d), f0_(f0), slope0_(slope0), x_(x_out), g_(g_out) {}

  LineEval eval(double t) {
    x_ = x0_ + t * d_;
    const double f = obj_(x_, g_);
    if (!std::isfinite(f) || !g_.allFinite()) {
      throw NonFiniteError("lbfgs_minimize: non-finite objective or gradient in line search",
                           x_);
    }
    return {f, g_.dot(d_)};
  }

  double f0() const { return f0_; }
  double slope0() const { return slope0_; }

 private:
  const Objective& obj_;
  const Vec& x0_;
  const Vec& d_;
  double f0_, slope0_;
  Vec& x_;
  Vec& g_;
};

// Strong-Wolfe line search (bracket + zoom). Returns the accepted step, or
// 0 on failure. The secant step on the derivative is exact for quadratics,
// which makes the search an exact line search in that case.
double strong_wolfe(LineSearch& ls, double t_init, double c1, double c2, int max_steps,
                    LineEval& accepted) {
  const double f0 = ls.f0();
  const double s0 = ls.slope0();

  auto armijo_ok = [&](double t, double f) { return f <= f0 + c1 * t * s0; };
  auto curvature_ok = [&](double slope) { return std::abs(slope) <= -c2 * s0; };

  auto zoom = [&](double lo, double f_lo, double s_lo, double hi, double f_hi,
                  double s_hi) -> double {
    for (int i = 0; i < max_steps; ++i) {
      const double a = std::min(lo, hi);
      const double b = std::max(lo, hi);
      const double width = b - a;
      if (!(width > 1e-16 * std::max(1.0, b))) break;

      // secant on the derivative, with bisection safeguard
      double t = hi - s_hi * (hi - lo) / (s_hi - s_lo);
      if (!std::isfinite(t) || t <= a + 0.05 * width || t >= b - 0.05 * width) {
        t = 0.5 * (lo + hi);
      }

      const LineEval e = ls.eval(t);
      if (!armijo_ok(t, e.f) || e.f >= f_lo) {
        hi = t;
        f_hi = e.f;
        s_hi = e.slope;
      } else {
        if (curvature_ok(e.slope)) {
          accepted = e;
          return t;
        }
        if (e.slope * (hi - lo) >= 0) {
          hi = lo;
          f_hi = f_lo;
          s_hi = s_lo;
        }
        lo = t;
        f_lo = e.f;
        s_lo = e.slope;
      }
    }
    // Bracket exhausted: settle for the best sufficient-decrease point if any.
    if (armijo_ok(lo, f_lo)) {
      accepted = ls.eval(lo);
      return lo;
    }
    return 0.0;
  };

  double t_prev = 0.0;
  double f_prev = f0;
  double s_prev = s0;
  double t = t_init;
  for (int i = 0; i < max_steps; ++i) {
    const LineEval e = ls.eval(t);
    if (!armijo_ok(t, e.f) || (i > 0 && e.f >= f_prev)) {
      return zoom(t_prev, f_prev, s_prev, t, e.f, e.slope);
    }
    if (curvature_ok(e.slope)) {
      accepted = e;
      return t;
    }
    if (e.slope >= 0) {
      return zoom(t, e.f, e.slope, t_prev, f_prev, s_prev);
    }
    t_prev = t;
    f_prev = e.f;
    s_prev = e.slope;
    t = std::min(2.0 * t, 1e10);
  }
  return 0.0;
}

}  // namespace

MinimizeResult lbfgs_minimize(const Objective& objective, Vec x0,
                              const OptimizerOptions& opts) {
  opts.validate();
  const Index n = x0.size();

  Vec g(n);
  double f = objective(x0, g);
  if (!std::isfinite(f) || !g.allFinite()) {
    throw NonFiniteError("lbfgs_minimize: non-finite objective or gradient at x0", x0);
  }

  MinimizeResult res;
  res.x = x0;
  res.f = f;
  res.grad_norm = g.norm();
  res.reason = StopReason::max_iterations;

  std::deque<Pair> history;
  Vec x = std::move(x0);
  Vec x_trial(n), g_trial(n);
  double gamma = 1.0;  // initial Hessian scale

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    if (g.norm() <= opts.gradient_tolerance) {
      res.reason = StopReason::gradient_tolerance;
      break;
    }

    // two-loop recursion: d = -H * g
    Vec d = -g;
    std::vector<double> alpha(history.size());
    for (std::size_t i = history.size(); i-- > 0;) {
      alpha[i] = history[i].rho * history[i].s.dot(d);
      d -= alpha[i] * history[i].y;
    }
    d *= gamma;
    for (std::size_t i = 0; i < history.size(); ++i) {
      const double beta = history[i].rho * history[i].y.dot(d);
      d += (alpha[i] - beta) * history[i].s;
    }

    double slope = d.dot(g);
    if (!(slope < 0)) {
      history.clear();
      d = -g;
      slope = -g.squaredNorm();
    }

    const double t_init = history.empty() ? std::min(1.0, 1.0 / g.norm()) : 1.0;
    LineSearch ls(objective, x, d, f, slope, x_trial, g_trial);
    LineEval accepted{};
    const double t = strong_wolfe(ls, t_init, opts.sufficient_decrease, opts.curvature,
                                  opts.max_line_search_steps, accepted);
    if (t == 0.0) {
      res.reason = StopReason::line_search_failed;
      res.line_search_failed = true;
      break;
    }

    const Vec s = t * d;
    const Vec y = g_trial - g;
    const double sy = s.dot(y);
    if (sy > 1e-10 * s.norm() * y.norm()) {
      history.push_back({s, y, 1.0 / sy});
      if (static_cast<int>(history.size()) > opts.memory_pairs) history.pop_front();
      gamma = sy / y.squaredNorm();
    }

    // Armijo acceptance means f decreases monotonically across iterates.
    x = x_trial;
    g = g_trial;
    f = accepted.f;
    res.iterations = iter + 1;
    res.x = x;
    res.f = f;
    res.grad_norm = g.norm();
  }

  if (res.reason == StopReason::max_iterations && res.grad_norm <= opts.gradient_tolerance) {
    res.reason = StopReason::gradient_tolerance;
  }
  return res;
}

}  // namespace ddmpc::num
