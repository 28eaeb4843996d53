// Copyright 2026 the maskenc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "maskenc/errors.hpp"
#include "maskenc/mask.hpp"

namespace maskenc {

/// Compact N-dimensional representation of one grid mask.
struct MaskCode {
  std::vector<double> values;

  bool operator==(const MaskCode&) const = default;
};

enum class WhitenMode { none, eigen };
enum class ScaleMode { none, stddev };

inline constexpr double kScaleEpsilon = 1e-6;   // floor on per-dim sigma
inline constexpr double kWhitenEpsilon = 1e-6;  // floor on eigenvalues

/// The frozen linear dictionary: mean (and optional per-dimension scale)
/// for normalization, a projection matrix whose rows span the retained
/// principal subspace, and the matching reconstruction matrix.
///
/// With WhitenMode::none the projection rows are orthonormal and the
/// reconstruction matrix is its transpose. With WhitenMode::eigen the
/// rows are rescaled so codes have unit variance per component, and the
/// reconstruction matrix compensates (projection * reconstruction = I).
struct Codebook {
  int m = 0;
  int components = 0;               // N
  std::vector<double> mean;         // m*m
  std::vector<double> scale;        // empty, or m*m multipliers
  std::vector<double> projection;   // row-major N x m*m
  std::vector<double> reconstruction;  // row-major m*m x N
  std::vector<double> eigenvalues;  // N, nonincreasing, nonnegative
  std::optional<int> class_id;      // absent = class-agnostic
  WhitenMode whiten = WhitenMode::none;

  int dim() const { return m * m; }

  bool operator==(const Codebook&) const = default;
};

/// Streaming sufficient statistics for the codebook fit: sample count,
/// per-dimension sums and the full second-moment matrix. Entries stay
/// integral for binary grids, so accumulation order cannot change the
/// result.
class FitAccumulator {
 public:
  explicit FitAccumulator(int m)
      : m_(m),
        count_(0),
        sum_(static_cast<std::size_t>(m) * m, 0.0),
        cross_(static_cast<std::size_t>(m) * m * m * m, 0.0) {
    if (m < 1) throw std::invalid_argument("grid side must be >= 1");
  }

  int grid_side() const { return m_; }
  std::uint64_t count() const { return count_; }
  const std::vector<double>& sum() const { return sum_; }
  const std::vector<double>& cross() const { return cross_; }

  void add(const GridMask& grid) {
    if (grid.m != m_)
      throw std::invalid_argument("accumulate: grid side mismatch");
    const int dim = m_ * m_;
    set_idx_.clear();
    for (int i = 0; i < dim; ++i)
      if (grid.data[i]) set_idx_.push_back(i);
    for (int i : set_idx_) sum_[i] += 1.0;
    for (int i : set_idx_) {
      double* row = cross_.data() + static_cast<std::size_t>(i) * dim;
      for (int j : set_idx_) row[j] += 1.0;
    }
    ++count_;
  }

  void merge(const FitAccumulator& other) {
    if (other.m_ != m_)
      throw std::invalid_argument("merge: grid side mismatch");
    count_ += other.count_;
    for (std::size_t i = 0; i < sum_.size(); ++i) sum_[i] += other.sum_[i];
    for (std::size_t i = 0; i < cross_.size(); ++i)
      cross_[i] += other.cross_[i];
  }

 private:
  int m_;
  std::uint64_t count_;
  std::vector<double> sum_;
  std::vector<double> cross_;
  std::vector<int> set_idx_;  // scratch
};

inline void accumulate(FitAccumulator& acc, const GridMask& grid) {
  acc.add(grid);
}

inline FitAccumulator merge(const FitAccumulator& a, const FitAccumulator& b) {
  FitAccumulator out = a;
  out.merge(b);
  return out;
}

namespace detail {

// Reconstruction matrix derived from the (possibly whitened) projection
// rows and eigenvalues. Shared by solve() and the container loader so a
// save/load roundtrip reproduces the matrix bit for bit.
inline std::vector<double> derive_reconstruction(
    const std::vector<double>& projection,
    const std::vector<double>& eigenvalues, WhitenMode whiten, int dim,
    int components) {
  std::vector<double> w(static_cast<std::size_t>(dim) * components);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < components; ++k) {
      const double t = projection[static_cast<std::size_t>(k) * dim + i];
      w[static_cast<std::size_t>(i) * components + k] =
          whiten == WhitenMode::eigen
              ? t * std::max(eigenvalues[k], kWhitenEpsilon)
              : t;
    }
  return w;
}

}  // namespace detail

/// Fit the codebook from accumulated statistics: eigendecompose the corpus
/// covariance and keep the leading `components` eigenvectors. Row signs
/// are fixed so each row's largest-magnitude entry is positive, making the
/// result reproducible across runs whenever eigenvalues are distinct.
inline Codebook solve(const FitAccumulator& acc, int components,
                      WhitenMode whiten = WhitenMode::none,
                      ScaleMode scale_mode = ScaleMode::none) {
  const int m = acc.grid_side();
  const int dim = m * m;
  if (components < 1 || components > dim)
    throw std::invalid_argument("solve: components must be in [1, m*m]");
  if (acc.count() < static_cast<std::uint64_t>(components))
    throw validation_error("solve: underdetermined, " +
                           std::to_string(acc.count()) + " samples < " +
                           std::to_string(components) + " components");

  const double n = static_cast<double>(acc.count());
  Codebook cb;
  cb.m = m;
  cb.components = components;
  cb.whiten = whiten;
  cb.mean.resize(dim);
  for (int i = 0; i < dim; ++i) cb.mean[i] = acc.sum()[i] / n;

  Eigen::MatrixXd cov(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      cov(i, j) = acc.cross()[static_cast<std::size_t>(i) * dim + j] / n -
                  cb.mean[i] * cb.mean[j];

  if (scale_mode == ScaleMode::stddev) {
    cb.scale.resize(dim);
    for (int i = 0; i < dim; ++i) {
      const double sigma = std::sqrt(std::max(cov(i, i), 0.0));
      cb.scale[i] = 1.0 / std::max(sigma, kScaleEpsilon);
    }
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) cov(i, j) *= cb.scale[i] * cb.scale[j];
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success)
    throw error("solve: eigendecomposition failed");

  cb.eigenvalues.resize(components);
  cb.projection.resize(static_cast<std::size_t>(components) * dim);
  for (int k = 0; k < components; ++k) {
    const int src = dim - 1 - k;  // Eigen sorts ascending
    cb.eigenvalues[k] = std::max(es.eigenvalues()(src), 0.0);
    double* row = cb.projection.data() + static_cast<std::size_t>(k) * dim;
    for (int i = 0; i < dim; ++i) row[i] = es.eigenvectors()(i, src);
    // sign convention: largest-magnitude entry positive
    int arg = 0;
    for (int i = 1; i < dim; ++i)
      if (std::abs(row[i]) > std::abs(row[arg])) arg = i;
    if (row[arg] < 0)
      for (int i = 0; i < dim; ++i) row[i] = -row[i];
    if (whiten == WhitenMode::eigen) {
      const double inv = 1.0 / std::sqrt(std::max(cb.eigenvalues[k],
                                                  kWhitenEpsilon));
      for (int i = 0; i < dim; ++i) row[i] *= inv;
    }
  }
  cb.reconstruction = detail::derive_reconstruction(
      cb.projection, cb.eigenvalues, whiten, dim, components);
  return cb;
}

/// Project a grid mask to its compact code: v = T * normalize(u).
inline MaskCode encode(const Codebook& cb, const GridMask& grid) {
  if (grid.m != cb.m) throw std::invalid_argument("encode: grid side mismatch");
  const int dim = cb.dim();
  std::vector<double> x(dim);
  for (int i = 0; i < dim; ++i) {
    x[i] = grid.data[i] - cb.mean[i];
    if (!cb.scale.empty()) x[i] *= cb.scale[i];
  }
  MaskCode code;
  code.values.resize(cb.components);
  for (int k = 0; k < cb.components; ++k) {
    const double* row =
        cb.projection.data() + static_cast<std::size_t>(k) * dim;
    double acc = 0.0;
    for (int i = 0; i < dim; ++i) acc += row[i] * x[i];
    code.values[k] = acc;
  }
  return code;
}

/// Linear reconstruction u~ = denormalize(W * v); values are unclamped.
inline std::vector<double> decode_soft(const Codebook& cb,
                                       const MaskCode& code) {
  if (static_cast<int>(code.values.size()) != cb.components)
    throw std::invalid_argument("decode: code length mismatch");
  const int dim = cb.dim();
  std::vector<double> u(dim);
  for (int i = 0; i < dim; ++i) {
    const double* row =
        cb.reconstruction.data() + static_cast<std::size_t>(i) * cb.components;
    double acc = 0.0;
    for (int k = 0; k < cb.components; ++k) acc += row[k] * code.values[k];
    if (!cb.scale.empty()) acc /= cb.scale[i];
    u[i] = acc + cb.mean[i];
  }
  return u;
}

/// Reconstruction binarized at `threshold` (values >= threshold are set).
inline GridMask decode(const Codebook& cb, const MaskCode& code,
                       double threshold = 0.5) {
  const std::vector<double> u = decode_soft(cb, code);
  GridMask grid = GridMask::zeros(cb.m);
  for (std::size_t i = 0; i < u.size(); ++i)
    grid.data[i] = u[i] >= threshold ? 1 : 0;
  return grid;
}

/// Keep only the leading `components` rows; identical to having solved
/// with that count directly.
inline Codebook truncate(const Codebook& cb, int components) {
  if (components < 1 || components > cb.components)
    throw std::invalid_argument("truncate: components out of range");
  if (components == cb.components) return cb;
  const int dim = cb.dim();
  Codebook out;
  out.m = cb.m;
  out.components = components;
  out.mean = cb.mean;
  out.scale = cb.scale;
  out.class_id = cb.class_id;
  out.whiten = cb.whiten;
  out.eigenvalues.assign(cb.eigenvalues.begin(),
                         cb.eigenvalues.begin() + components);
  out.projection.assign(
      cb.projection.begin(),
      cb.projection.begin() + static_cast<std::size_t>(components) * dim);
  out.reconstruction.resize(static_cast<std::size_t>(dim) * components);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < components; ++k)
      out.reconstruction[static_cast<std::size_t>(i) * components + k] =
          cb.reconstruction[static_cast<std::size_t>(i) * cb.components + k];
  return out;
}

}  // namespace maskenc
