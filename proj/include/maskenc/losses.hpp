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

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "maskenc/codebook.hpp"

namespace maskenc {

/// Loss value with its analytic gradient w.r.t. the prediction.
struct LossValue {
  double value = 0.0;
  std::vector<double> gradient;
};

enum class LossKind { l1, l2, smooth_l1, cosine };

namespace detail {

inline void check_pair(const MaskCode& pred, const MaskCode& target) {
  if (pred.values.size() != target.values.size())
    throw std::invalid_argument("loss: code length mismatch");
}

}  // namespace detail

inline LossValue l2_loss(const MaskCode& pred, const MaskCode& target) {
  detail::check_pair(pred, target);
  LossValue out;
  out.gradient.resize(pred.values.size());
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    const double d = pred.values[i] - target.values[i];
    out.value += d * d;
    out.gradient[i] = 2.0 * d;
  }
  return out;
}

inline LossValue l1_loss(const MaskCode& pred, const MaskCode& target) {
  detail::check_pair(pred, target);
  LossValue out;
  out.gradient.resize(pred.values.size());
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    const double d = pred.values[i] - target.values[i];
    out.value += std::abs(d);
    out.gradient[i] = d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);  // subgradient
  }
  return out;
}

inline LossValue smooth_l1_loss(const MaskCode& pred, const MaskCode& target,
                                double beta = 1.0) {
  if (beta <= 0) throw std::invalid_argument("smooth_l1: beta must be > 0");
  detail::check_pair(pred, target);
  LossValue out;
  out.gradient.resize(pred.values.size());
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    const double d = pred.values[i] - target.values[i];
    if (std::abs(d) < beta) {
      out.value += 0.5 * d * d / beta;
      out.gradient[i] = d / beta;
    } else {
      out.value += std::abs(d) - 0.5 * beta;
      out.gradient[i] = d > 0 ? 1.0 : -1.0;
    }
  }
  return out;
}

/// 1 - cos(pred, target), epsilon-stabilized; zero iff positively
/// collinear. The target must be nonzero.
inline LossValue cosine_loss(const MaskCode& pred, const MaskCode& target) {
  detail::check_pair(pred, target);
  constexpr double eps = 1e-8;
  double dot = 0, np2 = 0, nt2 = 0;
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    dot += pred.values[i] * target.values[i];
    np2 += pred.values[i] * pred.values[i];
    nt2 += target.values[i] * target.values[i];
  }
  if (nt2 == 0) throw std::invalid_argument("cosine_loss: zero target");
  const double np = std::sqrt(np2), nt = std::sqrt(nt2);
  const double denom = np * nt + eps;
  LossValue out;
  out.value = 1.0 - dot / denom;
  out.gradient.resize(pred.values.size());
  const double pscale = np > 0 ? dot * nt / (denom * denom * np) : 0.0;
  for (std::size_t i = 0; i < pred.values.size(); ++i)
    out.gradient[i] = -target.values[i] / denom + pscale * pred.values[i];
  return out;
}

inline LossValue eval_loss(LossKind kind, const MaskCode& pred,
                           const MaskCode& target, double beta = 1.0) {
  switch (kind) {
    case LossKind::l1:
      return l1_loss(pred, target);
    case LossKind::l2:
      return l2_loss(pred, target);
    case LossKind::smooth_l1:
      return smooth_l1_loss(pred, target, beta);
    case LossKind::cosine:
      return cosine_loss(pred, target);
  }
  throw std::invalid_argument("unknown loss kind");
}

/// Batch mask loss with per-sample gradients. Negatives contribute
/// nothing; value is averaged over positive samples.
struct BatchLossValue {
  double value = 0.0;
  std::vector<std::vector<double>> gradients;  // one per sample
};

inline BatchLossValue mask_loss(const std::vector<MaskCode>& preds,
                                const std::vector<MaskCode>& targets,
                                const std::vector<bool>& positive,
                                LossKind kind, double beta = 1.0) {
  if (preds.size() != targets.size() || preds.size() != positive.size())
    throw std::invalid_argument("mask_loss: list length mismatch");
  std::size_t npos = 0;
  for (bool p : positive) npos += p;
  const double norm = 1.0 / static_cast<double>(std::max<std::size_t>(npos, 1));
  BatchLossValue out;
  out.gradients.resize(preds.size());
  for (std::size_t s = 0; s < preds.size(); ++s) {
    if (!positive[s]) {
      out.gradients[s].assign(preds[s].values.size(), 0.0);
      continue;
    }
    LossValue lv = eval_loss(kind, preds[s], targets[s], beta);
    out.value += lv.value * norm;
    out.gradients[s] = std::move(lv.gradient);
    for (double& g : out.gradients[s]) g *= norm;
  }
  return out;
}

/// Weighted sum of the detection loss (an opaque scalar here) and the
/// mask regression loss.
inline double total_loss(double det_loss, double mask_loss_value,
                         double lambda_det = 1.0, double lambda_mask = 1.0) {
  if (!std::isfinite(det_loss) || !std::isfinite(mask_loss_value))
    throw std::invalid_argument("total_loss: non-finite input");
  if (lambda_det < 0 || lambda_mask < 0)
    throw std::invalid_argument("total_loss: negative weight");
  return lambda_det * det_loss + lambda_mask * mask_loss_value;
}

}  // namespace maskenc
