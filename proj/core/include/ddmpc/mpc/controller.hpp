#pragma once

#include <filesystem>
#include <optional>

#include "ddmpc/model/forward.hpp"
#include "ddmpc/num/lbfgs.hpp"
#include "ddmpc/num/rng.hpp"

namespace ddmpc::mpc {

struct MpcConfig {
  int horizon = 15;               // K
  double control_penalty = 0.01;  // lambda
  num::Vec u_min = num::Vec::Constant(1, -5.0);
  num::Vec u_max = num::Vec::Constant(1, 5.0);
  double epsilon = 0.2;
  num::OptimizerOptions planner{
      .max_iterations = 80,
      .gradient_tolerance = 1e-7,
      .memory_pairs = 10,
  };

  void validate() const;
};

struct Plan {
  std::vector<num::Vec> controls;       // K control vectors
  std::vector<num::Vec> features;       // predicted features, K entries
  double cost = 0.0;                    // mpc_cost of `controls`
  bool flagged = false;                 // planner hit a line-search failure
  std::vector<num::Vec> planner_state;  // internal reparameterized iterate
  std::vector<double> step_costs;       // cumulative cost per step
};

/// Encode recent observations (newest first) into the MPC state of n
/// features and n-1 controls (newest first).
model::HistoryState make_state(const model::DdmParams& params,
                               const std::vector<num::Vec>& recent_observations,
                               const std::vector<num::Vec>& recent_controls);

num::Vec encode_reference(const model::DdmParams& params, const num::Vec& y_ref);

struct MpcCost {
  double cost = 0.0;
  std::vector<num::Vec> control_grads;  // exact gradient w.r.t. every control
};

/// K-step cost sum ||z_hat_t - z_ref||^2 + lambda ||u_t||^2 over the open-loop
/// rollout, with the analytic gradient back-propagated through the entire
/// rollout (each u_t influences all later features).
MpcCost mpc_cost(const model::DdmParams& params, const model::HistoryState& state0,
                 const num::Vec& z_ref, const std::vector<num::Vec>& controls,
                 double lambda);

/// Receding-horizon planning: minimizes mpc_cost over K bounded controls via
/// L-BFGS in a tanh box reparameterization. A warm start is shifted one step
/// with the last entry repeated; the result never costs more than the warm
/// start. `init_rng`, when given, draws a tiny random initial plan so that
/// planning from an exactly symmetric rest state does not start on the
/// saddle between the two swing directions.
Plan plan(const model::DdmParams& params, const model::HistoryState& state0,
          const num::Vec& z_ref, const MpcConfig& cfg,
          const Plan* warm_start = nullptr, num::Rng* init_rng = nullptr);

struct Action {
  num::Vec control;
  bool was_random = false;
};

/// With probability 1-epsilon the plan's first control, otherwise uniform in
/// the control box.
Action epsilon_greedy_action(const Plan& plan, const MpcConfig& cfg, num::Rng& rng);

/// Debug dump: step, u[0..F-1], zhat[0..m-1], running cost.
void write_plan_csv(const std::filesystem::path& path, const Plan& plan);

}  // namespace ddmpc::mpc
