// Copyright 2026 The HWC Summarization Authors.
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

// Central finite differences, used as the oracle for analytic gradients.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace hwc::testing {

inline constexpr double kFiniteDifferenceStep = 1e-5;
inline constexpr double kMaxRelativeError = 1e-4;

// |a - n| / max(|a|, |n|, floor). The floor keeps near-zero gradients, where
// central differences are dominated by round-off (~1e-11), from reading as
// large relative errors.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

// Perturbs each entry of each tensor in place, evaluates `loss`, restores.
// Returns the worst relative error against `analytic`.
inline double max_gradient_error(const std::vector<Eigen::MatrixXd*>& tensors,
                                 const std::vector<Eigen::MatrixXd>& analytic, const std::function<double()>& loss,
                                 double h = kFiniteDifferenceStep) {
  double worst = 0.0;
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    Eigen::MatrixXd& t = *tensors[k];
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double saved = t.data()[i];
      t.data()[i] = saved + h;
      const double plus = loss();
      t.data()[i] = saved - h;
      const double minus = loss();
      t.data()[i] = saved;
      const double numeric = (plus - minus) / (2.0 * h);
      worst = std::max(worst, relative_error(analytic[k].data()[i], numeric));
    }
  }
  return worst;
}

}  // namespace hwc::testing
