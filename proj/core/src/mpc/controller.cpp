#include "ddmpc/mpc/controller.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "ddmpc/io/format.hpp"

namespace ddmpc::mpc {

using model::DdmParams;
using model::HistoryState;
using model::MlpCache;

void MpcConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("MpcConfig: horizon must be >= 1");
  if (!(control_penalty >= 0)) throw std::invalid_argument("MpcConfig: lambda must be >= 0");
  if (u_min.size() != u_max.size()) {
    throw std::invalid_argument("MpcConfig: bound dimension mismatch");
  }
  if (((u_max - u_min).array() < 0).any()) {
    throw std::invalid_argument("MpcConfig: need u_min <= u_max");
  }
  if (!(epsilon >= 0 && epsilon <= 1)) {
    throw std::invalid_argument("MpcConfig: epsilon must lie in [0, 1]");
  }
  planner.validate();
}

HistoryState make_state(const DdmParams& params,
                        const std::vector<num::Vec>& recent_observations,
                        const std::vector<num::Vec>& recent_controls) {
  if (static_cast<int>(recent_observations.size()) != params.history_order) {
    throw std::invalid_argument("make_state: need exactly n observations");
  }
  if (static_cast<int>(recent_controls.size()) != params.history_order - 1) {
    throw std::invalid_argument("make_state: need exactly n-1 controls");
  }
  HistoryState state;
  state.features.reserve(recent_observations.size());
  for (const auto& y : recent_observations) state.features.push_back(model::encode(params, y));
  for (const auto& u : recent_controls) {
    num::require_dim(u, params.control_dim, "make_state control");
    state.controls.push_back(u);
  }
  return state;
}

num::Vec encode_reference(const DdmParams& params, const num::Vec& y_ref) {
  return model::encode(params, y_ref);
}

MpcCost mpc_cost(const DdmParams& params, const HistoryState& state0, const num::Vec& z_ref,
                 const std::vector<num::Vec>& controls, double lambda) {
  const int n = params.history_order;
  const num::Index m = params.feature_dim();
  const num::Index fdim = params.control_dim;
  state0.validate(n, m, fdim);
  num::require_dim(z_ref, m, "mpc_cost reference feature");
  const int horizon = static_cast<int>(controls.size());
  if (horizon < 1) throw std::invalid_argument("mpc_cost: need at least one control");
  for (const auto& u : controls) num::require_dim(u, fdim, "mpc_cost control");

  // forward rollout, caching every predictor pass
  std::vector<MlpCache> caches(static_cast<std::size_t>(horizon));
  std::vector<num::Vec> features(static_cast<std::size_t>(horizon));
  HistoryState state = state0;
  double cost = 0.0;
  for (int k = 0; k < horizon; ++k) {
    const num::Vec input = model::predictor_input(params, state, controls[k]);
    num::Vec z = model::mlp_forward(params.predictor, input, &caches[k]);
    if (!z.allFinite()) {
      throw std::runtime_error("mpc_cost: non-finite prediction at step " + std::to_string(k));
    }
    cost += (z - z_ref).squaredNorm() + lambda * controls[k].squaredNorm();
    features[k] = z;
    state.advance(std::move(z), controls[k]);
  }

  // reverse pass: adjoints of the predicted features, newest step first
  std::vector<num::Vec> feature_adj(static_cast<std::size_t>(horizon));
  for (int k = 0; k < horizon; ++k) feature_adj[k] = 2.0 * (features[k] - z_ref);
  MpcCost out;
  out.cost = cost;
  out.control_grads.assign(static_cast<std::size_t>(horizon), num::Vec::Zero(fdim));

  for (int k = horizon - 1; k >= 0; --k) {
    const num::Vec dv =
        model::mlp_backward(params.predictor, caches[k], feature_adj[k], nullptr);
    for (int i = 0; i < n; ++i) {
      const num::Index off = static_cast<num::Index>(i) * (m + fdim);
      const int feat_step = k - 1 - i;  // index into `features`, <0 means fixed history
      if (feat_step >= 0) feature_adj[feat_step] += dv.segment(off, m);
      const int ctrl_step = k - i;
      if (ctrl_step >= 0) out.control_grads[ctrl_step] += dv.segment(off + m, fdim);
    }
  }
  for (int k = 0; k < horizon; ++k) {
    out.control_grads[k] += 2.0 * lambda * controls[k];
  }
  return out;
}

namespace {

struct BoxReparam {
  num::Vec center, half;  // u = center + half .* tanh(w)

  explicit BoxReparam(const MpcConfig& cfg)
      : center(0.5 * (cfg.u_max + cfg.u_min)), half(0.5 * (cfg.u_max - cfg.u_min)) {}

  num::Vec to_control(const num::Vec& w) const {
    return center + half.cwiseProduct(w.array().tanh().matrix());
  }

  num::Vec to_latent(const num::Vec& u) const {
    num::Vec w(u.size());
    for (num::Index i = 0; i < u.size(); ++i) {
      if (half[i] <= 0) {
        w[i] = 0.0;
        continue;
      }
      const double ratio = std::clamp((u[i] - center[i]) / half[i], -1.0 + 1e-12, 1.0 - 1e-12);
      w[i] = std::atanh(ratio);
    }
    return w;
  }

  // d u / d w, elementwise
  num::Vec slope(const num::Vec& w) const {
    return half.cwiseProduct((1.0 - w.array().tanh().square()).matrix());
  }
};

}  // namespace

Plan plan(const DdmParams& params, const HistoryState& state0, const num::Vec& z_ref,
          const MpcConfig& cfg, const Plan* warm_start, num::Rng* init_rng) {
  cfg.validate();
  const num::Index fdim = params.control_dim;
  if (cfg.u_min.size() != fdim) {
    throw std::invalid_argument("plan: bound dimension does not match the control dim");
  }
  const int horizon = cfg.horizon;
  const BoxReparam box(cfg);

  // initial latent controls: shifted warm start, tiny random, or zero
  num::Vec w0 = num::Vec::Zero(static_cast<num::Index>(horizon) * fdim);
  if (warm_start && !warm_start->controls.empty()) {
    const auto& prev = *warm_start;
    const int prev_len = static_cast<int>(prev.controls.size());
    const bool have_latent = static_cast<int>(prev.planner_state.size()) == prev_len;
    for (int k = 0; k < horizon; ++k) {
      const int src = std::min(k + 1, prev_len - 1);
      const num::Vec wk = have_latent ? prev.planner_state[static_cast<std::size_t>(src)]
                                      : box.to_latent(prev.controls[static_cast<std::size_t>(src)]);
      w0.segment(static_cast<num::Index>(k) * fdim, fdim) = wk;
    }
  } else if (init_rng) {
    for (num::Index i = 0; i < w0.size(); ++i) w0[i] = init_rng->uniform(-0.01, 0.01);
  }

  std::vector<num::Vec> controls(static_cast<std::size_t>(horizon), num::Vec::Zero(fdim));
  auto objective = [&](const num::Vec& w, num::Vec& grad) {
    for (int k = 0; k < horizon; ++k) {
      controls[static_cast<std::size_t>(k)] =
          box.to_control(w.segment(static_cast<num::Index>(k) * fdim, fdim));
    }
    const MpcCost c = mpc_cost(params, state0, z_ref, controls, cfg.control_penalty);
    grad.resize(w.size());
    for (int k = 0; k < horizon; ++k) {
      const num::Index off = static_cast<num::Index>(k) * fdim;
      grad.segment(off, fdim) = c.control_grads[static_cast<std::size_t>(k)]
                                    .cwiseProduct(box.slope(w.segment(off, fdim)));
    }
    return c.cost;
  };

  const auto result = num::lbfgs_minimize(objective, w0, cfg.planner);

  Plan out;
  out.flagged = result.line_search_failed;
  out.cost = result.f;
  out.controls.resize(static_cast<std::size_t>(horizon));
  out.planner_state.resize(static_cast<std::size_t>(horizon));
  for (int k = 0; k < horizon; ++k) {
    const num::Index off = static_cast<num::Index>(k) * fdim;
    out.planner_state[static_cast<std::size_t>(k)] = result.x.segment(off, fdim);
    out.controls[static_cast<std::size_t>(k)] = box.to_control(result.x.segment(off, fdim));
  }
  out.features = model::rollout_features(params, state0, out.controls);
  out.step_costs.resize(out.controls.size());
  double running = 0.0;
  for (std::size_t k = 0; k < out.controls.size(); ++k) {
    running += (out.features[k] - z_ref).squaredNorm() +
               cfg.control_penalty * out.controls[k].squaredNorm();
    out.step_costs[k] = running;
  }
  return out;
}

Action epsilon_greedy_action(const Plan& plan, const MpcConfig& cfg, num::Rng& rng) {
  if (plan.controls.empty()) {
    throw std::invalid_argument("epsilon_greedy_action: empty plan");
  }
  const double draw = rng.uniform01();
  if (draw < cfg.epsilon) {
    num::Vec u(cfg.u_min.size());
    for (num::Index i = 0; i < u.size(); ++i) u[i] = rng.uniform(cfg.u_min[i], cfg.u_max[i]);
    return {std::move(u), true};
  }
  return {plan.controls.front(), false};
}

void write_plan_csv(const std::filesystem::path& path, const Plan& plan) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_plan_csv: cannot open " + path.string());
  const num::Index fdim = plan.controls.empty() ? 0 : plan.controls.front().size();
  const num::Index m = plan.features.empty() ? 0 : plan.features.front().size();
  out << "step";
  for (num::Index i = 0; i < fdim; ++i) out << ",u" << i;
  for (num::Index i = 0; i < m; ++i) out << ",zhat" << i;
  out << ",running_cost\n";
  for (std::size_t k = 0; k < plan.controls.size(); ++k) {
    out << k;
    for (num::Index i = 0; i < fdim; ++i) out << "," << io::format_g17(plan.controls[k][i]);
    for (num::Index i = 0; i < m; ++i) out << "," << io::format_g17(plan.features[k][i]);
    const double running = k < plan.step_costs.size() ? plan.step_costs[k] : 0.0;
    out << "," << io::format_g17(running) << "\n";
  }
}

}  // namespace ddmpc::mpc
