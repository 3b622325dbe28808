#pragma once

#include <filesystem>
#include <vector>

#include "ddmpc/num/types.hpp"

namespace ddmpc::train {

struct PcaProjection {
  num::Vec mean;   // input dimension M
  num::Mat basis;  // M x d, orthonormal columns, decreasing variance
  /// Per-component variances from the fit (covariance normalized by the
  /// sample count). Not serialized; empty on a loaded projection.
  num::Vec variances;

  num::Index input_dim() const { return mean.size(); }
  num::Index reduced_dim() const { return basis.cols(); }
  void validate() const;  // orthonormality within 1e-10
};

/// Top-d principal directions of the mean-centered samples (columns of
/// `data`), with a deterministic sign convention: the largest-magnitude
/// component of each basis vector is positive. Throws if d exceeds
/// min(sample count, dimension) or the data is degenerate.
PcaProjection pca_fit(const num::Mat& data, num::Index d);
PcaProjection pca_fit(const std::vector<num::Vec>& data, num::Index d);

num::Vec pca_apply(const PcaProjection& p, const num::Vec& y);
num::Mat pca_apply(const PcaProjection& p, const num::Mat& ys);
num::Vec pca_invert(const PcaProjection& p, const num::Vec& v);
num::Mat pca_invert(const PcaProjection& p, const num::Mat& vs);

/// Binary projection file, magic "PCA1": header (M, d), then mean and basis
/// (row-major) as float64 little-endian.
void save_pca(const std::filesystem::path& path, const PcaProjection& p);
PcaProjection load_pca(const std::filesystem::path& path);

}  // namespace ddmpc::train
