#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ddmpc/experiment/experiment.hpp"
#include "ddmpc/experiment/stats.hpp"

using namespace ddmpc;
using namespace ddmpc::experiment;
using num::Rng;
using num::Vec;

TEST_SUITE_BEGIN("experiment");

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

// small, fast configuration for loop-level tests
ExperimentConfig tiny_config(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.seed = seed;
  cfg.trials = 1;
  cfg.frames_per_trial = 25;
  cfg.pca_dim = 12;
  cfg.encoder_sizes = {12, 6, 2};
  cfg.predictor_sizes = {6, 4, 2};
  cfg.training.optimizer.max_iterations = 30;
  cfg.mpc.horizon = 5;
  cfg.mpc.planner.max_iterations = 10;
  return cfg;
}

LearningCurve curve_with(std::uint64_t seed, const std::vector<bool>& successes) {
  LearningCurve c;
  c.seed = seed;
  for (std::size_t i = 0; i < successes.size(); ++i) {
    TrialRecord r;
    r.trial = static_cast<int>(i);
    r.frames_seen = static_cast<long>(i) * 100;
    r.success = successes[i];
    c.records.push_back(r);
  }
  return c;
}

}  // namespace

TEST_CASE("stabilized_at_upright: ten final steps exactly at pi succeed") {
  std::vector<double> angles(100, 0.0);
  for (int i = 90; i < 100; ++i) angles[static_cast<std::size_t>(i)] = kPi;
  CHECK(stabilized_at_upright(angles));
}

TEST_CASE("stabilized_at_upright: touching the target once is not enough") {
  std::vector<double> angles(100, 0.0);
  angles[50] = kPi;
  CHECK(!stabilized_at_upright(angles));
  // reaching upright late but falling off in the last steps also fails
  for (int i = 88; i < 96; ++i) angles[static_cast<std::size_t>(i)] = kPi;
  CHECK(!stabilized_at_upright(angles));
}

TEST_CASE("stabilized_at_upright: 10.0 degree offset passes, 10.1 fails") {
  std::vector<double> pass(100, kPi - 10.0 * kDeg);
  CHECK(stabilized_at_upright(pass));
  std::vector<double> fail(100, kPi - 10.1 * kDeg);
  CHECK(!stabilized_at_upright(fail));
  // the wrap makes -pi side equivalent
  std::vector<double> negative(100, -(kPi - 10.0 * kDeg));
  CHECK(stabilized_at_upright(negative));
}

TEST_CASE("success_rate: unanimous successes") {
  std::vector<LearningCurve> curves;
  for (int s = 0; s < 8; ++s) curves.push_back(curve_with(s, {true, true}));
  const auto r = success_rate(curves, 1);
  CHECK(r.mean == 1.0);
  CHECK(r.se == 0.0);
}

TEST_CASE("success_rate: published error-bar pairs reproduce to 4 decimals") {
  std::vector<LearningCurve> curves;
  for (int s = 0; s < 50; ++s) curves.push_back(curve_with(s, {s < 43}));
  auto r = success_rate(curves, 0);
  CHECK(std::abs(r.mean - 0.86) < 5e-5);
  CHECK(std::abs(r.se - 0.0496) < 5e-5);

  curves.clear();
  for (int s = 0; s < 50; ++s) curves.push_back(curve_with(s, {s < 25}));
  r = success_rate(curves, 0);
  CHECK(std::abs(r.mean - 0.5) < 5e-5);
  CHECK(std::abs(r.se - 0.0714) < 5e-5);
}

TEST_CASE("success_rate: single curve has zero standard error") {
  const std::vector<LearningCurve> curves{curve_with(1, {true})};
  const auto r = success_rate(curves, 0);
  CHECK(r.mean == 1.0);
  CHECK(r.se == 0.0);
}

TEST_CASE("success_rate: errors") {
  CHECK_THROWS_AS(success_rate({}, 0), std::invalid_argument);
  const std::vector<LearningCurve> curves{curve_with(1, {true})};
  CHECK_THROWS_AS(success_rate(curves, 3), std::invalid_argument);
}

TEST_CASE("run_random_trial: single frame means no controls") {
  ExperimentConfig cfg = tiny_config(1);
  cfg.frames_per_trial = 1;
  Rng rng(0);
  const auto t = run_random_trial(cfg, rng);
  CHECK(t.frames() == 1);
  CHECK(t.controls.cols() == 0);
}

TEST_CASE("run_random_trial: deterministic and inside torque bounds") {
  ExperimentConfig cfg = tiny_config(2);
  cfg.frames_per_trial = 60;
  Rng a(7), b(7);
  const auto t1 = run_random_trial(cfg, a);
  const auto t2 = run_random_trial(cfg, b);
  CHECK(t1.observations == t2.observations);
  CHECK(t1.controls == t2.controls);
  double mean = 0.0;
  for (num::Index c = 0; c < t1.controls.cols(); ++c) {
    const double u = t1.controls(0, c);
    CHECK(u >= -cfg.pendulum.torque_limit);
    CHECK(u < cfg.pendulum.torque_limit);
    mean += u;
  }
  mean /= static_cast<double>(t1.controls.cols());
  CHECK(std::abs(mean) < 1.5);  // loose sanity for a uniform sample of 59
}

TEST_CASE("run_learning_experiment: trials=0 leaves only the random-trial record") {
  ExperimentConfig cfg = tiny_config(3);
  cfg.trials = 0;
  const auto res = run_learning_experiment(cfg);
  CHECK(res.curve.records.size() == 1);
  CHECK(!res.trained);
  CHECK(res.curve.records[0].frames_seen == 0);
  CHECK(std::isnan(res.curve.records[0].v_r));
}

TEST_CASE("run_learning_experiment: data growth, record layout, determinism") {
  ExperimentConfig cfg = tiny_config(4);
  const auto res = run_learning_experiment(cfg);

  // one random trial plus one mpc trial, greedy evals never appended
  REQUIRE(res.curve.records.size() == 2);
  REQUIRE(res.data.trajectories.size() == 2);
  for (const auto& t : res.data.trajectories) CHECK(t.frames() == cfg.frames_per_trial);
  CHECK(res.curve.records[1].frames_seen == cfg.frames_per_trial);
  CHECK(res.trained);
  CHECK(res.curve.records[1].v_r > 0.0);

  const auto res2 = run_learning_experiment(cfg);
  CHECK(model::flatten(res2.model) == model::flatten(res.model));
  REQUIRE(res2.curve.records.size() == res.curve.records.size());
  for (std::size_t i = 0; i < res.curve.records.size(); ++i) {
    CHECK(res2.curve.records[i].success == res.curve.records[i].success);
    CHECK(res2.curve.records[i].final_angle == res.curve.records[i].final_angle);
    CHECK(res2.curve.records[i].angles == res.curve.records[i].angles);
  }
}

TEST_CASE("evaluate_greedy: deterministic and isolated") {
  ExperimentConfig cfg = tiny_config(5);
  const auto res = run_learning_experiment(cfg);
  REQUIRE(res.trained);
  const auto e1 = evaluate_greedy(res.model, res.pca, cfg, Rng(11));
  const auto e2 = evaluate_greedy(res.model, res.pca, cfg, Rng(11));
  CHECK(e1.angles == e2.angles);
  CHECK(e1.success == e2.success);
  CHECK(e1.angles.size() == static_cast<std::size_t>(cfg.frames_per_trial));
}

TEST_CASE("adapt_model_to_projection: model is invariant on the shared subspace") {
  // two projections spanning the same subspace but with rotated bases and
  // shifted means; the adapted model must compute identical features from
  // the same raw observations
  num::Rng rng(42);
  num::Mat data(20, 120);
  for (num::Index c = 0; c < data.cols(); ++c) data.col(c) = rng.uniform_vec(20, -1.0, 1.0);
  const auto pca_a = train::pca_fit(data, 6);
  // different sample set, same distribution: related but rotated projection
  num::Mat data2(20, 120);
  for (num::Index c = 0; c < data2.cols(); ++c) {
    data2.col(c) = data.col(c) + 0.05 * rng.uniform_vec(20, -1.0, 1.0);
  }
  const auto pca_b = train::pca_fit(data2, 6);

  model::DdmParams m = model::make_ddm({6, 4, 2}, {6, 4, 2}, 2, 1);
  num::Rng wrng(7);
  for (auto* mlp : {&m.encoder, &m.decoder, &m.predictor}) {
    for (auto& l : mlp->layers) {
      for (num::Index r = 0; r < l.weight.rows(); ++r) {
        for (num::Index c2 = 0; c2 < l.weight.cols(); ++c2) {
          l.weight(r, c2) = wrng.uniform(-0.5, 0.5);
        }
      }
    }
  }

  model::DdmParams adapted = m;
  adapt_model_to_projection(adapted, pca_a, pca_b);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const num::Vec y = data.col(i);
    const num::Vec z_old = model::encode(m, train::pca_apply(pca_a, y));
    const num::Vec z_new = model::encode(adapted, train::pca_apply(pca_b, y));
    worst = std::max(worst, (z_old - z_new).norm());
  }
  // subspaces differ slightly (different fits), so equality is approximate
  CHECK(worst < 0.05);
}

TEST_CASE("reference frame: upright screenshot") {
  const ExperimentConfig cfg = tiny_config(6);
  const Vec ref = reference_frame_pixels(cfg);
  CHECK(ref.size() == sim::kImageSize * sim::kImageSize);
  // ink should sit above the image center for the upright pose
  double top_ink = 0.0, bottom_ink = 0.0;
  for (int r = 0; r < sim::kImageSize; ++r) {
    for (int c = 0; c < sim::kImageSize; ++c) {
      const double d = 1.0 - ref[r * sim::kImageSize + c];
      if (r < 25) top_ink += d;
      if (r > 25) bottom_ink += d;
    }
  }
  CHECK(top_ink > 10.0);
  CHECK(bottom_ink == 0.0);
}

TEST_SUITE_END();
