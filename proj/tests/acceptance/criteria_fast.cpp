// Fast numeric acceptance criteria: gradient exactness, PCA equivalence of
// the initialized auto-encoder, planner optimality on scalar systems,
// exploration statistics, and success-rate arithmetic.

#include <cmath>
#include <functional>
#include <sstream>

#include "ddmpc/experiment/stats.hpp"
#include "ddmpc/mpc/controller.hpp"
#include "ddmpc/num/finite_diff.hpp"
#include "ddmpc/train/init.hpp"
#include "ddmpc/train/objective.hpp"
#include "harness.hpp"

using namespace ddmpc;
using model::Activation;
using model::DdmParams;
using model::HistoryState;
using num::Index;
using num::Mat;
using num::Rng;
using num::Vec;

namespace {

void randomize(model::MlpParams& mlp, Rng& rng, double scale) {
  for (auto& l : mlp.layers) {
    for (Index r = 0; r < l.weight.rows(); ++r) {
      for (Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = rng.uniform(-scale, scale);
    }
    for (Index i = 0; i < l.bias.size(); ++i) l.bias[i] = rng.uniform(-scale, scale);
  }
}

DdmParams random_model(Rng& rng, double scale = 0.6) {
  DdmParams p = model::make_ddm({8, 4, 2}, {6, 4, 2}, 2, 1);
  randomize(p.encoder, rng, scale);
  randomize(p.decoder, rng, scale);
  randomize(p.predictor, rng, scale);
  return p;
}

bool grads_close(const Vec& analytic, const Vec& numeric, double rel, double abs_floor,
                 double* worst) {
  bool ok = true;
  for (Index i = 0; i < analytic.size(); ++i) {
    const double tol =
        std::max(abs_floor, rel * std::max(std::abs(analytic[i]), std::abs(numeric[i])));
    const double err = std::abs(analytic[i] - numeric[i]);
    if (worst) *worst = std::max(*worst, err / tol);
    ok = ok && (err <= tol);
  }
  return ok;
}

// 1. analytic gradients of the training and planning objectives vs central
//    finite differences across >= 200 random configurations
acceptance::Criterion gradient_criterion() {
  acceptance::Criterion c{"criterion 1: gradient correctness (joint cost and MPC cost)"};
  Rng rng(101);
  int checked = 0;
  double worst = 0.0;
  bool ok = true;

  for (int trial = 0; trial < 110 && ok; ++trial) {
    const DdmParams p = random_model(rng);
    train::Trajectory t;
    const int frames = 12 + static_cast<int>(rng.uniform(0.0, 18.0));
    t.observations.resize(8, frames);
    t.controls.resize(1, frames - 1);
    for (Index col = 0; col < t.observations.cols(); ++col) {
      t.observations.col(col) = rng.uniform_vec(8, -1.0, 1.0);
    }
    for (Index col = 0; col < t.controls.cols(); ++col) {
      t.controls.col(col) = rng.uniform_vec(1, -1.0, 1.0);
    }
    train::Dataset d;
    d.trajectories.push_back(std::move(t));

    train::JointObjective obj(p, d);
    Vec analytic;
    obj.evaluate(obj.initial_flat(), analytic);
    train::JointObjective fd_obj(p, d);
    const Vec numeric = num::finite_diff_grad(
        [&fd_obj](const Vec& x) {
          Vec g;
          return fd_obj.evaluate(x, g);
        },
        obj.initial_flat(), 1e-5);
    ok = grads_close(analytic, numeric, 1e-5, 1e-8, &worst);
    ++checked;
  }

  for (int trial = 0; trial < 110 && ok; ++trial) {
    const DdmParams p = random_model(rng);
    HistoryState s;
    s.features = {rng.uniform_vec(2, -0.6, 0.6), rng.uniform_vec(2, -0.6, 0.6)};
    s.controls = {rng.uniform_vec(1, -1.0, 1.0)};
    const Vec z_ref = rng.uniform_vec(2, -0.8, 0.8);
    const int horizon = 1 + static_cast<int>(rng.uniform(0.0, 15.0));
    const double lambda = trial % 3 == 0 ? 0.0 : 0.01;

    const Vec flat = rng.uniform_vec(horizon, -1.5, 1.5);
    std::vector<Vec> controls;
    for (int k = 0; k < horizon; ++k) controls.push_back(flat.segment(k, 1));
    const auto cost = mpc::mpc_cost(p, s, z_ref, controls, lambda);
    Vec analytic(horizon);
    for (int k = 0; k < horizon; ++k) {
      analytic[k] = cost.control_grads[static_cast<std::size_t>(k)][0];
    }
    const Vec numeric = num::finite_diff_grad(
        [&](const Vec& x) {
          std::vector<Vec> cs;
          for (int k = 0; k < horizon; ++k) cs.push_back(x.segment(k, 1));
          return mpc::mpc_cost(p, s, z_ref, cs, lambda).cost;
        },
        flat, 1e-5);
    ok = grads_close(analytic, numeric, 1e-5, 1e-8, &worst);
    ++checked;
  }

  std::ostringstream detail;
  detail << checked << " configurations, worst error " << worst << "x tolerance";
  c.pass = ok && checked >= 200;
  c.detail = detail.str();
  return c;
}

// 2. with affine activations the PCA-based initialization reproduces the
//    PCA-optimal reconstruction error
acceptance::Criterion pca_equivalence_criterion() {
  acceptance::Criterion c{"criterion 2: PCA / linear auto-encoder equivalence"};
  Rng rng(202);
  double worst_gap = 0.0;
  bool ok = true;

  const auto check_arch = [&](const std::vector<Index>& sizes, Index code) {
    Mat data(sizes.front(), 80);
    for (Index col = 0; col < data.cols(); ++col) {
      data.col(col) = rng.uniform_vec(sizes.front(), -1.0, 1.0);
    }
    Rng init_rng(7);
    const DdmParams p = train::pca_init(sizes, {code + 1, code}, 1, 1, data, init_rng,
                                        Activation::affine, Activation::affine);
    double v_r = 0.0;
    for (Index col = 0; col < data.cols(); ++col) {
      v_r += model::reconstruction_error(p, data.col(col)).squaredNorm();
    }
    const train::PcaProjection pca = train::pca_fit(data, code);
    const Mat recon = train::pca_invert(pca, train::pca_apply(pca, data));
    const double optimal = (recon - data).squaredNorm();
    worst_gap = std::max(worst_gap, std::abs(v_r - optimal));
    ok = ok && std::abs(v_r - optimal) <= 1e-9;
  };

  for (int rep = 0; rep < 5; ++rep) {
    check_arch({10, 4}, 4);     // one layer pair
    check_arch({10, 6, 3}, 3);  // two layer pairs
  }

  std::ostringstream detail;
  detail << "worst |V_R - PCA optimum| = " << worst_gap;
  c.pass = ok;
  c.detail = detail.str();
  return c;
}

DdmParams integrator_model() {
  DdmParams p = model::make_ddm({2, 1}, {2, 1}, 1, 1);
  p.predictor.activations[0] = Activation::affine;
  p.predictor.layers[0].weight << 1.0, 1.0;
  return p;
}

// 3. scalar linear systems: analytic K=1 optima and a K<=3 grid oracle
acceptance::Criterion planner_criterion() {
  acceptance::Criterion c{"criterion 3: planner optimality on scalar systems"};
  const DdmParams p = integrator_model();
  HistoryState s0;
  s0.features.push_back(Vec::Zero(1));
  const Vec z_ref = Vec::Constant(1, 1.0);

  mpc::MpcConfig cfg;
  cfg.u_min = Vec::Constant(1, -2.0);
  cfg.u_max = Vec::Constant(1, 2.0);
  cfg.planner.max_iterations = 300;
  cfg.planner.gradient_tolerance = 1e-13;

  bool ok = true;
  std::ostringstream detail;

  cfg.horizon = 1;
  cfg.control_penalty = 0.0;
  const double u_a = mpc::plan(p, s0, z_ref, cfg).controls[0][0];
  ok = ok && std::abs(u_a - 1.0) <= 1e-8;

  cfg.control_penalty = 1.0;
  const double u_b = mpc::plan(p, s0, z_ref, cfg).controls[0][0];
  ok = ok && std::abs(u_b - 0.5) <= 1e-8;
  detail << "K=1 errors " << std::abs(u_a - 1.0) << ", " << std::abs(u_b - 0.5);

  for (int horizon = 2; horizon <= 3; ++horizon) {
    cfg.horizon = horizon;
    cfg.control_penalty = 0.01;
    const auto plan = mpc::plan(p, s0, z_ref, cfg);

    // multi-resolution exhaustive grid search down to 1e-3 per axis
    std::vector<double> lo(static_cast<std::size_t>(horizon), -2.0);
    std::vector<double> hi(static_cast<std::size_t>(horizon), 2.0);
    std::vector<double> best_u(static_cast<std::size_t>(horizon), 0.0);
    double best = std::numeric_limits<double>::infinity();
    double step = 0.1;
    for (int level = 0; level < 3; ++level) {
      best = std::numeric_limits<double>::infinity();
      std::vector<double> u(static_cast<std::size_t>(horizon), 0.0);
      const std::function<void(int)> sweep = [&](int k) {
        if (k == horizon) {
          std::vector<Vec> cs;
          for (const double v : u) cs.push_back(Vec::Constant(1, v));
          const double cost = mpc::mpc_cost(p, s0, z_ref, cs, cfg.control_penalty).cost;
          if (cost < best) {
            best = cost;
            best_u = u;
          }
          return;
        }
        for (double v = lo[static_cast<std::size_t>(k)];
             v <= hi[static_cast<std::size_t>(k)] + 1e-12; v += step) {
          u[static_cast<std::size_t>(k)] = v;
          sweep(k + 1);
        }
      };
      sweep(0);
      for (int k = 0; k < horizon; ++k) {
        lo[static_cast<std::size_t>(k)] =
            std::max(-2.0, best_u[static_cast<std::size_t>(k)] - step);
        hi[static_cast<std::size_t>(k)] =
            std::min(2.0, best_u[static_cast<std::size_t>(k)] + step);
      }
      step /= 10.0;
    }
    ok = ok && std::abs(plan.cost - best) <= 1e-3;
    detail << "; K=" << horizon << " |plan-grid| = " << std::abs(plan.cost - best);
  }

  c.pass = ok;
  c.detail = detail.str();
  return c;
}

// 6. epsilon-greedy statistics at epsilon = 0.2
acceptance::Criterion exploration_criterion() {
  acceptance::Criterion c{"criterion 6: exploration statistics at epsilon 0.2"};
  const DdmParams p = integrator_model();
  HistoryState s0;
  s0.features.push_back(Vec::Zero(1));
  mpc::MpcConfig cfg;
  cfg.horizon = 1;
  cfg.epsilon = 0.2;
  const mpc::Plan plan = mpc::plan(p, s0, Vec::Constant(1, 1.0), cfg);
  Rng rng(606);
  int random_count = 0;
  const int draws = 10'000;
  for (int i = 0; i < draws; ++i) {
    if (mpc::epsilon_greedy_action(plan, cfg, rng).was_random) ++random_count;
  }
  const double fraction = static_cast<double>(random_count) / draws;
  c.pass = std::abs(fraction - 0.2) <= 0.02;
  std::ostringstream detail;
  detail << "random fraction " << fraction << " over " << draws << " draws";
  c.detail = detail.str();
  return c;
}

// 8. success-rate mean and standard error reproduce the published pairs
acceptance::Criterion stats_criterion() {
  acceptance::Criterion c{"criterion 8: success-rate arithmetic"};
  auto curves_for = [](int successes, int n) {
    std::vector<experiment::LearningCurve> curves;
    for (int s = 0; s < n; ++s) {
      experiment::LearningCurve curve;
      curve.seed = static_cast<std::uint64_t>(s);
      experiment::TrialRecord r;
      r.success = s < successes;
      curve.records.push_back(r);
      curves.push_back(std::move(curve));
    }
    return curves;
  };
  auto round4 = [](double v) { return std::round(v * 1e4) / 1e4; };

  const auto a = experiment::success_rate(curves_for(43, 50), 0);
  const auto b = experiment::success_rate(curves_for(25, 50), 0);
  const bool ok = round4(a.mean) == 0.86 && round4(a.se) == 0.0496 &&
                  round4(b.mean) == 0.5 && round4(b.se) == 0.0714;
  std::ostringstream detail;
  detail << "43/50 -> (" << a.mean << ", " << a.se << "), 25/50 -> (" << b.mean << ", "
         << b.se << ")";
  c.pass = ok;
  c.detail = detail.str();
  return c;
}

}  // namespace

int run_fast_criteria() {
  return acceptance::report({
      gradient_criterion(),
      pca_equivalence_criterion(),
      planner_criterion(),
      exploration_criterion(),
      stats_criterion(),
  });
}
