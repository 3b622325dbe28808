#pragma once

#include <filesystem>
#include <vector>

#include "ddmpc/num/types.hpp"

namespace ddmpc::train {

/// One trial: time-aligned observations y_1..y_T (columns) and controls
/// u_1..u_{T-1}, where u_t acts between y_t and y_{t+1}.
struct Trajectory {
  num::Mat observations;  // obs_dim x T
  num::Mat controls;      // control_dim x (T-1)

  num::Index frames() const { return observations.cols(); }
  num::Index obs_dim() const { return observations.rows(); }
  num::Index control_dim() const { return controls.rows(); }

  void validate() const;
};

/// Training data: trajectories plus reference frames that enter the
/// reconstruction loss as standalone samples (never the prediction loss).
struct Dataset {
  std::vector<Trajectory> trajectories;
  std::vector<num::Vec> reference_frames;

  num::Index obs_dim() const;
  num::Index control_dim() const;
  num::Index total_frames() const;  // trajectory frames + reference frames

  void validate() const;
};

void save_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace ddmpc::train
