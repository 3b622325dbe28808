#include "ddmpc/train/pca.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "pca serialization assumes a little-endian host");

namespace ddmpc::train {

namespace {

// Largest-magnitude component positive; first index wins ties.
void fix_signs(num::Mat& basis) {
  for (num::Index c = 0; c < basis.cols(); ++c) {
    num::Index imax = 0;
    basis.col(c).cwiseAbs().maxCoeff(&imax);
    if (basis(imax, c) < 0) basis.col(c) = -basis.col(c);
  }
}

}  // namespace

void PcaProjection::validate() const {
  if (basis.rows() != mean.size()) {
    throw std::invalid_argument("PcaProjection: basis/mean dimension mismatch");
  }
  const num::Mat gram = basis.transpose() * basis;
  const double err =
      (gram - num::Mat::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
  if (!(err <= 1e-10)) {
    throw std::invalid_argument("PcaProjection: basis columns not orthonormal");
  }
}

PcaProjection pca_fit(const num::Mat& data, num::Index d) {
  const num::Index dim = data.rows();
  const num::Index count = data.cols();
  if (d < 1 || d > std::min(dim, count)) {
    throw std::invalid_argument("pca_fit: d must be in [1, min(samples, dim)]");
  }
  if (!data.allFinite()) throw std::invalid_argument("pca_fit: non-finite data");

  PcaProjection p;
  p.mean = data.rowwise().mean();
  const num::Mat centered = data.colwise() - p.mean;

  const double total_var = centered.squaredNorm() / static_cast<double>(count);
  if (!(total_var > 0)) {
    throw std::invalid_argument("pca_fit: degenerate data (all samples identical)");
  }

  if (dim <= count) {
    // covariance route
    const num::Mat cov = centered * centered.transpose() / static_cast<double>(count);
    Eigen::SelfAdjointEigenSolver<num::Mat> eig(cov);
    if (eig.info() != Eigen::Success) throw std::runtime_error("pca_fit: eigensolver failed");
    // eigenvalues come out ascending
    p.basis.resize(dim, d);
    p.variances.resize(d);
    for (num::Index i = 0; i < d; ++i) {
      p.basis.col(i) = eig.eigenvectors().col(dim - 1 - i);
      p.variances[i] = std::max(0.0, eig.eigenvalues()[dim - 1 - i]);
    }
  } else {
    // Gram route for tall data (dim > count): eigenvectors of X^T X map back
    // to principal directions as X w / sqrt(count * lambda).
    const num::Mat gram = centered.transpose() * centered / static_cast<double>(count);
    Eigen::SelfAdjointEigenSolver<num::Mat> eig(gram);
    if (eig.info() != Eigen::Success) throw std::runtime_error("pca_fit: eigensolver failed");
    num::Mat raw(dim, d);
    p.variances.resize(d);
    for (num::Index i = 0; i < d; ++i) {
      const double lambda = std::max(0.0, eig.eigenvalues()[count - 1 - i]);
      p.variances[i] = lambda;
      num::Vec v = centered * eig.eigenvectors().col(count - 1 - i);
      const double norm = v.norm();
      if (norm > 0) v /= norm;
      raw.col(i) = v;
    }
    // clean up roundoff (and any near-null directions) without reordering
    Eigen::HouseholderQR<num::Mat> qr(raw);
    p.basis = qr.householderQ() * num::Mat::Identity(dim, d);
    // Q columns are sign-ambiguous relative to raw; align before the
    // deterministic sign pass so well-conditioned directions are unchanged
    for (num::Index c = 0; c < d; ++c) {
      if (p.basis.col(c).dot(raw.col(c)) < 0) p.basis.col(c) = -p.basis.col(c);
    }
  }

  fix_signs(p.basis);
  p.validate();
  return p;
}

PcaProjection pca_fit(const std::vector<num::Vec>& data, num::Index d) {
  if (data.empty()) throw std::invalid_argument("pca_fit: empty data");
  num::Mat m(data.front().size(), static_cast<num::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) m.col(static_cast<num::Index>(i)) = data[i];
  return pca_fit(m, d);
}

num::Vec pca_apply(const PcaProjection& p, const num::Vec& y) {
  num::require_dim(y, p.input_dim(), "pca_apply input");
  return p.basis.transpose() * (y - p.mean);
}

num::Mat pca_apply(const PcaProjection& p, const num::Mat& ys) {
  if (ys.rows() != p.input_dim()) throw std::invalid_argument("pca_apply: dim mismatch");
  return p.basis.transpose() * (ys.colwise() - p.mean);
}

num::Vec pca_invert(const PcaProjection& p, const num::Vec& v) {
  num::require_dim(v, p.reduced_dim(), "pca_invert input");
  return p.basis * v + p.mean;
}

num::Mat pca_invert(const PcaProjection& p, const num::Mat& vs) {
  if (vs.rows() != p.reduced_dim()) throw std::invalid_argument("pca_invert: dim mismatch");
  return (p.basis * vs).colwise() + p.mean;
}

void save_pca(const std::filesystem::path& path, const PcaProjection& p) {
  p.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_pca: cannot open " + path.string());
  out.write("PCA1", 4);
  const auto dim = static_cast<std::uint32_t>(p.input_dim());
  const auto d = static_cast<std::uint32_t>(p.reduced_dim());
  out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
  out.write(reinterpret_cast<const char*>(&d), sizeof(d));
  out.write(reinterpret_cast<const char*>(p.mean.data()),
            static_cast<std::streamsize>(p.mean.size() * sizeof(double)));
  for (num::Index r = 0; r < p.basis.rows(); ++r) {
    for (num::Index c = 0; c < p.basis.cols(); ++c) {
      const double v = p.basis(r, c);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  }
  if (!out) throw std::runtime_error("save_pca: write failed for " + path.string());
}

PcaProjection load_pca(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_pca: cannot open " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  if (std::string_view(magic, 4) != "PCA1") {
    throw std::runtime_error("load_pca: bad magic in " + path.string());
  }
  std::uint32_t dim = 0, d = 0;
  in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
  in.read(reinterpret_cast<char*>(&d), sizeof(d));
  PcaProjection p;
  p.mean.resize(dim);
  p.basis.resize(dim, d);
  in.read(reinterpret_cast<char*>(p.mean.data()),
          static_cast<std::streamsize>(p.mean.size() * sizeof(double)));
  for (num::Index r = 0; r < p.basis.rows(); ++r) {
    for (num::Index c = 0; c < p.basis.cols(); ++c) {
      double v = 0;
      in.read(reinterpret_cast<char*>(&v), sizeof(v));
      p.basis(r, c) = v;
    }
  }
  if (!in) throw std::runtime_error("load_pca: truncated file " + path.string());
  p.validate();
  return p;
}

}  // namespace ddmpc::train
