// Command-line front end: tile prediction study, pendulum policy learning,
// model rendering, and greedy evaluation of saved models.

#include <CLI11.hpp>

#include <atomic>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

#include "ddmpc/experiment/experiment.hpp"
#include "ddmpc/experiment/stats.hpp"
#include "ddmpc/experiment/tile_study.hpp"
#include "ddmpc/io/format.hpp"
#include "ddmpc/io/manifest.hpp"
#include "ddmpc/model/serialize.hpp"

namespace fs = std::filesystem;
using namespace ddmpc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

io::ConfigFile load_config(const std::string& path) {
  if (path.empty()) return {};
  if (!fs::exists(path)) throw UsageError("config file not found: " + path);
  try {
    return io::ConfigFile::parse_file(path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

void ensure_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + dir.string());
}

struct SeedList {
  std::vector<std::uint64_t> seeds;
};

int run_tile(const std::string& config_path, const std::string& out_dir,
             std::uint64_t seed_override, bool have_seed, bool save_data) {
  io::ConfigFile file = load_config(config_path);
  if (have_seed) file.set_u64("tile.seed", seed_override);
  experiment::TileStudyConfig cfg = experiment::tile_config_from(file);
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const fs::path out(out_dir);
  ensure_out_dir(out);

  const auto res = experiment::run_tile_study(cfg);

  io::RunManifest manifest;
  manifest.command = "tile";
  manifest.seeds = {cfg.seed};
  experiment::tile_config_to(cfg, manifest.config);

  experiment::write_tile_report_csv(out / "report.csv", res);
  manifest.artifacts.push_back("report.csv");

  model::save_ddm(out / "model_joint.ddm", res.joint_model);
  model::save_ddm(out / "model_sequential.ddm", res.sequential_model);
  train::save_pca(out / "pca.pca", res.pca);
  manifest.artifacts.insert(manifest.artifacts.end(),
                            {"model_joint.ddm", "model_sequential.ddm", "pca.pca"});

  sim::write_pgm(out / "feature_grid_joint.pgm",
                 experiment::feature_grid_image(res.joint_model, res.pca, 9));
  sim::write_pgm(out / "feature_grid_sequential.pgm",
                 experiment::feature_grid_image(res.sequential_model, res.pca, 9));
  manifest.artifacts.insert(manifest.artifacts.end(),
                            {"feature_grid_joint.pgm", "feature_grid_sequential.pgm"});

  for (int w = 0; w < 3; ++w) {
    const auto strip =
        experiment::tile_prediction_strip(res, res.joint_model, w * 20, cfg.eval_horizon);
    const std::string truth_name = "strip_truth_" + std::to_string(w) + ".pgm";
    const std::string pred_name = "strip_predicted_" + std::to_string(w) + ".pgm";
    sim::write_pgm(out / truth_name, strip.truth);
    sim::write_pgm(out / pred_name, strip.predicted);
    manifest.artifacts.push_back(truth_name);
    manifest.artifacts.push_back(pred_name);
  }

  if (save_data) {
    train::Dataset ds;
    ds.trajectories.push_back(res.raw);
    train::save_dataset(out / "tile_dataset.dds", ds);
    manifest.artifacts.push_back("tile_dataset.dds");
  }

  manifest.write(out / "manifest.txt");

  for (const auto& row : res.rows) {
    std::cout << "k=" << row.k << " rmse_joint=" << io::format_g17(row.rmse_joint)
              << " rmse_sequential=" << io::format_g17(row.rmse_sequential)
              << " within2px_joint=" << io::format_g17(row.frac_within_2px_joint) << "\n";
  }
  return kExitOk;
}

int run_pendulum(const std::string& config_path, const std::string& out_dir, int seeds,
                 std::uint64_t base_seed, bool have_seed, int jobs, int dump_traces,
                 bool save_data, const std::map<std::string, std::string>& overrides) {
  io::ConfigFile file = load_config(config_path);
  if (have_seed) file.set_u64("experiment.seed", base_seed);
  for (const auto& [k, v] : overrides) file.set(k, v);
  experiment::ExperimentConfig base = experiment::experiment_config_from(file);
  try {
    base.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (seeds < 1) throw UsageError("--seeds must be >= 1");
  if (jobs < 1) jobs = 1;

  const fs::path out(out_dir);
  ensure_out_dir(out);

  std::vector<std::uint64_t> seed_list(static_cast<std::size_t>(seeds));
  for (int i = 0; i < seeds; ++i) seed_list[static_cast<std::size_t>(i)] = base.seed + i;

  std::vector<experiment::ExperimentResult> results(seed_list.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= seed_list.size()) return;
      try {
        experiment::ExperimentConfig cfg = base;
        cfg.seed = seed_list[i];
        results[i] = experiment::run_learning_experiment(cfg);
        std::lock_guard lock(log_mutex);
        int successes = 0;
        for (const auto& r : results[i].curve.records) successes += r.success ? 1 : 0;
        std::cerr << "seed " << seed_list[i] << ": "
                  << (results[i].curve.records.back().success ? "success" : "failure")
                  << " at final trial (" << successes << "/"
                  << results[i].curve.records.size() << " trial evals successful)\n";
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(seed_list.size());
        return;
      }
    }
  };

  {
    std::vector<std::thread> pool;
    const int thread_count = std::min<int>(jobs, seeds);
    pool.reserve(static_cast<std::size_t>(thread_count));
    for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  io::RunManifest manifest;
  manifest.command = "pendulum";
  manifest.seeds = seed_list;
  experiment_config_to(base, manifest.config);
  manifest.config.set_int("run.seeds", seeds);
  manifest.config.set_int("run.jobs", jobs);

  std::vector<experiment::LearningCurve> curves;
  curves.reserve(results.size());
  for (const auto& r : results) curves.push_back(r.curve);

  experiment::write_curves_csv(out / "curves.csv", curves);
  experiment::write_aggregate_csv(out / "aggregate.csv", curves);
  manifest.artifacts.push_back("curves.csv");
  manifest.artifacts.push_back("aggregate.csv");

  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].trained) continue;
    const std::string model_name = "model_seed" + std::to_string(seed_list[i]) + ".ddm";
    const std::string pca_name = "pca_seed" + std::to_string(seed_list[i]) + ".pca";
    model::save_ddm(out / model_name, results[i].model);
    train::save_pca(out / pca_name, results[i].pca);
    manifest.artifacts.push_back(model_name);
    manifest.artifacts.push_back(pca_name);
    if (save_data) {
      const std::string data_name = "dataset_seed" + std::to_string(seed_list[i]) + ".dds";
      train::save_dataset(out / data_name, results[i].data);
      manifest.artifacts.push_back(data_name);
    }
  }

  for (std::size_t i = 0; i < results.size() && static_cast<int>(i) < dump_traces; ++i) {
    for (const auto& rec : results[i].curve.records) {
      const std::string name = "trace_seed" + std::to_string(seed_list[i]) + "_trial" +
                               std::to_string(rec.trial) + ".csv";
      experiment::write_trace_csv(out / name, rec.angles);
      manifest.artifacts.push_back(name);
    }
  }

  manifest.write(out / "manifest.txt");

  if (!curves.empty()) {
    const auto last = experiment::success_rate(curves, static_cast<int>(curves.front().records.size()) - 1);
    std::cout << "final success rate: " << io::format_g17(last.mean) << " +- "
              << io::format_g17(last.se) << " over " << seeds << " seed(s)\n";
  }
  return kExitOk;
}

int run_render(const std::string& model_path, const std::string& pca_path,
               const std::string& out_dir, int grid_n, const std::vector<double>& phi,
               const std::vector<double>& tile_xy) {
  if (!fs::exists(model_path)) throw UsageError("model file not found: " + model_path);
  if (!fs::exists(pca_path)) throw UsageError("pca file not found: " + pca_path);
  const fs::path out(out_dir);
  ensure_out_dir(out);

  const model::DdmParams params = model::load_ddm(model_path);
  const train::PcaProjection pca = train::load_pca(pca_path);
  if (params.feature_dim() != 2) {
    throw UsageError("render: feature grid requires a model with feature dimension 2");
  }

  io::RunManifest manifest;
  manifest.command = "render";
  manifest.config.set("render.model", model_path);
  manifest.config.set("render.pca", pca_path);
  manifest.config.set_int("render.grid", grid_n);

  for (int gy = 0; gy < grid_n; ++gy) {
    for (int gx = 0; gx < grid_n; ++gx) {
      num::Vec z(2);
      z[0] = grid_n == 1 ? 0.0 : -1.0 + 2.0 * gx / (grid_n - 1);
      z[1] = grid_n == 1 ? 0.0 : 1.0 - 2.0 * gy / (grid_n - 1);
      num::Vec raw = train::pca_invert(pca, model::decode(params, z));
      sim::ImageFrame f;
      f.width = sim::kImageSize;
      f.height = sim::kImageSize;
      f.pixels = raw.cwiseMax(0.0).cwiseMin(1.0);
      const std::string name =
          "feature_" + std::to_string(gy) + "_" + std::to_string(gx) + ".pgm";
      sim::write_pgm(out / name, f);
      manifest.artifacts.push_back(name);
    }
  }
  sim::write_pgm(out / "feature_grid.pgm", experiment::feature_grid_image(params, pca, grid_n));
  manifest.artifacts.push_back("feature_grid.pgm");

  if (!phi.empty()) {
    sim::PendulumConfig pcfg;
    const double omega = phi.size() > 1 ? phi[1] : 0.0;
    sim::write_pgm(out / "pendulum_state.pgm",
                   sim::render_pendulum({sim::wrap_angle(phi[0]), omega}, pcfg));
    manifest.config.set_double("render.phi", phi[0]);
    manifest.config.set_double("render.omega", omega);
    manifest.artifacts.push_back("pendulum_state.pgm");
  }
  if (!tile_xy.empty()) {
    const double ty = tile_xy.size() > 1 ? tile_xy[1] : tile_xy[0];
    sim::write_pgm(out / "tile_state.pgm", sim::render_tile({tile_xy[0], ty}));
    manifest.artifacts.push_back("tile_state.pgm");
  }

  manifest.write(out / "manifest.txt");
  std::cout << "wrote " << manifest.artifacts.size() << " image(s) to " << out.string() << "\n";
  return kExitOk;
}

int run_eval(const std::string& model_path, const std::string& pca_path,
             const std::string& config_path, const std::string& out_dir,
             std::uint64_t seed, const std::map<std::string, std::string>& overrides) {
  if (!fs::exists(model_path)) throw UsageError("model file not found: " + model_path);
  if (!fs::exists(pca_path)) throw UsageError("pca file not found: " + pca_path);
  io::ConfigFile file = load_config(config_path);
  for (const auto& [k, v] : overrides) file.set(k, v);
  experiment::ExperimentConfig cfg = experiment::experiment_config_from(file);
  const fs::path out(out_dir);
  ensure_out_dir(out);

  const model::DdmParams params = model::load_ddm(model_path);
  const train::PcaProjection pca = train::load_pca(pca_path);

  const auto outcome =
      experiment::evaluate_greedy(params, pca, cfg, num::Rng(seed).split(1001));

  experiment::write_trace_csv(out / "trace.csv", outcome.angles);

  io::RunManifest manifest;
  manifest.command = "eval";
  manifest.seeds = {seed};
  experiment_config_to(cfg, manifest.config);
  manifest.config.set("eval.model", model_path);
  manifest.config.set("eval.pca", pca_path);
  manifest.artifacts.push_back("trace.csv");
  manifest.write(out / "manifest.txt");

  std::cout << "success=" << (outcome.success ? 1 : 0)
            << " final_angle_rad=" << io::format_g17(outcome.final_angle)
            << " mean_tail_error_rad=" << io::format_g17(outcome.mean_tail_error) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep dynamical model learning and latent-space MPC"};
  app.set_version_flag("--version", DDMPC_VERSION);
  app.require_subcommand(1);

  std::string config_path, out_dir, model_path, pca_path;
  std::uint64_t seed = 0;
  bool have_seed = false;
  int seeds = 1, jobs = 1, grid_n = 9, dump_traces = 0;
  bool save_data = false;
  std::vector<double> phi, tile_xy;
  std::map<std::string, std::string> overrides;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { seed = s; have_seed = true; },
        "root random seed");
  };

  CLI::App* tile = app.add_subcommand("tile", "moving-tile prediction study");
  tile->add_option("--config", config_path, "configuration file");
  tile->add_option("--out", out_dir, "output directory")->default_val("runs/tile");
  tile->add_flag("--save-data", save_data, "also write the dataset (DDS1)");
  add_seed(tile);

  CLI::App* pend = app.add_subcommand("pendulum", "pixels-to-torques pendulum experiment");
  pend->add_option("--config", config_path, "configuration file");
  pend->add_option("--out", out_dir, "output directory")->default_val("runs/pendulum");
  pend->add_option("--seeds", seeds, "number of independent seeds");
  pend->add_option("--jobs", jobs, "parallel worker threads");
  pend->add_option("--dump-traces", dump_traces, "write greedy-eval traces for this many seeds");
  pend->add_flag("--save-data", save_data, "also write per-seed datasets (DDS1)");
  add_seed(pend);
  pend->add_option_function<int>(
      "--trials", [&](const int& v) { overrides["experiment.trials"] = std::to_string(v); },
      "learning trials after the random trial");
  pend->add_option_function<double>(
      "--epsilon", [&](const double& v) { overrides["mpc.epsilon"] = io::format_g17(v); },
      "exploration probability");
  pend->add_option_function<int>(
      "--horizon", [&](const int& v) { overrides["mpc.horizon"] = std::to_string(v); },
      "planning horizon");
  pend->add_option_function<double>(
      "--lambda", [&](const double& v) { overrides["mpc.lambda"] = io::format_g17(v); },
      "control penalty");

  CLI::App* render = app.add_subcommand("render", "decode a model over a feature grid");
  render->add_option("model", model_path, "model file (DDM1)")->required();
  render->add_option("--pca", pca_path, "projection file (PCA1)")->required();
  render->add_option("--out", out_dir, "output directory")->default_val("runs/render");
  render->add_option("--grid", grid_n, "grid resolution per axis");
  render->add_option("--phi", phi, "also render the pendulum at this angle (and velocity)")
      ->expected(1, 2);
  render->add_option("--tile", tile_xy, "also render the tile at this position")->expected(1, 2);

  CLI::App* eval = app.add_subcommand("eval", "greedy evaluation of a saved model");
  eval->add_option("--model", model_path, "model file (DDM1)")->required();
  eval->add_option("--pca", pca_path, "projection file (PCA1)")->required();
  eval->add_option("--config", config_path, "configuration file");
  eval->add_option("--out", out_dir, "output directory")->default_val("runs/eval");
  add_seed(eval);
  eval->add_option_function<int>(
      "--horizon", [&](const int& v) { overrides["mpc.horizon"] = std::to_string(v); },
      "planning horizon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(tile)) {
      return run_tile(config_path, out_dir, seed, have_seed, save_data);
    }
    if (app.got_subcommand(pend)) {
      return run_pendulum(config_path, out_dir, seeds, seed, have_seed, jobs, dump_traces,
                          save_data, overrides);
    }
    if (app.got_subcommand(render)) {
      return run_render(model_path, pca_path, out_dir, grid_n, phi, tile_xy);
    }
    if (app.got_subcommand(eval)) {
      return run_eval(model_path, pca_path, config_path, out_dir, seed, overrides);
    }
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
