#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace ddmpc::num {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

inline bool all_finite(const Vec& v) { return v.allFinite(); }
inline bool all_finite(const Mat& m) { return m.allFinite(); }

inline void require_finite(const Vec& v, const std::string& what) {
  if (!v.allFinite()) throw std::invalid_argument(what + ": non-finite values");
}

inline void require_finite(const Mat& m, const std::string& what) {
  if (!m.allFinite()) throw std::invalid_argument(what + ": non-finite values");
}

inline void require_dim(const Vec& v, Index n, const std::string& what) {
  if (v.size() != n) {
    throw std::invalid_argument(what + ": expected dimension " + std::to_string(n) +
                                ", got " + std::to_string(v.size()));
  }
}

}  // namespace ddmpc::num
