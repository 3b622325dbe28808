#include "ddmpc/train/trainer.hpp"

#include <chrono>

namespace ddmpc::train {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void fill_final_losses(const model::DdmParams& params, const Dataset& data,
                       double prediction_weight, TrainReport& report) {
  JointObjective probe(params, data, TrainingMode::joint, prediction_weight);
  num::Vec unused;
  probe.evaluate(probe.initial_flat(), unused);
  report.reconstruction_loss = probe.last_reconstruction();
  report.prediction_loss = probe.last_prediction();
}

}  // namespace

std::pair<model::DdmParams, TrainReport> train_joint(const model::DdmParams& params0,
                                                     const Dataset& data,
                                                     const TrainOptions& opts) {
  const auto start = Clock::now();
  JointObjective obj(params0, data, TrainingMode::joint, opts.prediction_weight);
  const auto result = num::lbfgs_minimize(
      [&obj](const num::Vec& x, num::Vec& g) { return obj.evaluate(x, g); },
      obj.initial_flat(), opts.optimizer);

  TrainReport report;
  report.iterations = result.iterations;
  report.gradient_norm = result.grad_norm;
  report.line_search_failed = result.line_search_failed;
  model::DdmParams params = obj.params_with(result.x);
  fill_final_losses(params, data, opts.prediction_weight, report);
  report.seconds = seconds_since(start);
  return {std::move(params), report};
}

std::pair<model::DdmParams, TrainReport> train_sequential(const model::DdmParams& params0,
                                                          const Dataset& data,
                                                          const TrainOptions& opts) {
  const auto start = Clock::now();

  JointObjective stage1(params0, data, TrainingMode::autoencoder_only, opts.prediction_weight);
  const auto res1 = num::lbfgs_minimize(
      [&stage1](const num::Vec& x, num::Vec& g) { return stage1.evaluate(x, g); },
      stage1.initial_flat(), opts.optimizer);
  const model::DdmParams after_ae = stage1.params_with(res1.x);

  JointObjective stage2(after_ae, data, TrainingMode::predictor_only, opts.prediction_weight);
  const auto res2 = num::lbfgs_minimize(
      [&stage2](const num::Vec& x, num::Vec& g) { return stage2.evaluate(x, g); },
      stage2.initial_flat(), opts.optimizer);

  TrainReport report;
  report.iterations = res1.iterations + res2.iterations;
  report.gradient_norm = res2.grad_norm;
  report.line_search_failed = res1.line_search_failed || res2.line_search_failed;
  model::DdmParams params = stage2.params_with(res2.x);
  fill_final_losses(params, data, opts.prediction_weight, report);
  report.seconds = seconds_since(start);
  return {std::move(params), report};
}

}  // namespace ddmpc::train
