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

// Randomized finite-difference checks for every differentiable primitive.
// Each case projects the primitive's output onto a random constant tensor so
// that the scalar loss depends on every output entry.

#include <functional>
#include <string>
#include <vector>

#include "hwc/numerics.hpp"
#include "hwc/random.hpp"
#include "support/gradcheck.hpp"

namespace hwc::testing {

using numerics::Tape;
using Vard = numerics::Var<double>;

struct PrimitiveCase {
  std::string name;
  // Draws input tensors for one trial.
  std::function<std::vector<Eigen::MatrixXd>(Mt19937&)> inputs;
  // Builds the output from the inputs; extra randomness (ids, masks) is drawn
  // from the trial's rng before the graph is built and captured here.
  std::function<std::function<Vard(const std::vector<Vard>&)>(Mt19937&)> graph;
};

inline Eigen::Index dim(Mt19937& rng, Eigen::Index max = 4) {
  return 1 + static_cast<Eigen::Index>(rng.uniform_below(static_cast<std::uint64_t>(max)));
}

inline Eigen::MatrixXd rand_matrix(Eigen::Index r, Eigen::Index c, Mt19937& rng, double bound = 1.0) {
  return numerics::uniform_matrix<double>(r, c, bound, rng);
}

// Worst relative error for one trial of one case.
inline double check_case(const PrimitiveCase& pc, Mt19937& rng) {
  std::vector<Eigen::MatrixXd> inputs = pc.inputs(rng);
  const auto build = pc.graph(rng);

  Eigen::MatrixXd projection;
  {
    Tape<double> probe(false);
    std::vector<Vard> vars;
    for (const auto& x : inputs) vars.push_back(probe.constant(x));
    const Vard out = build(vars);
    projection = rand_matrix(out.rows(), out.cols(), rng);
  }

  std::vector<Eigen::MatrixXd> analytic;
  {
    Tape<double> tape;
    std::vector<Vard> vars;
    for (const auto& x : inputs) vars.push_back(tape.variable(x));
    const Vard loss = numerics::sum(numerics::mul(build(vars), tape.constant(projection)));
    tape.backward(loss);
    for (const auto& v : vars) analytic.push_back(tape.gradient(v));
  }

  const auto loss = [&]() {
    Tape<double> tape(false);
    std::vector<Vard> vars;
    for (const auto& x : inputs) vars.push_back(tape.constant(x));
    return numerics::sum(numerics::mul(build(vars), tape.constant(projection))).value()(0, 0);
  };
  std::vector<Eigen::MatrixXd*> pointers;
  for (auto& x : inputs) pointers.push_back(&x);
  return max_gradient_error(pointers, analytic, loss);
}

inline std::function<Vard(const std::vector<Vard>&)> fixed(std::function<Vard(const std::vector<Vard>&)> f) {
  return f;
}

inline std::vector<PrimitiveCase> primitive_cases() {
  using namespace numerics;
  std::vector<PrimitiveCase> cases;
  const auto same_shape = [](int count) {
    return [count](Mt19937& rng) {
      const Eigen::Index r = dim(rng), c = dim(rng);
      std::vector<Eigen::MatrixXd> xs;
      for (int i = 0; i < count; ++i) xs.push_back(rand_matrix(r, c, rng));
      return xs;
    };
  };
  const auto no_extra = [](std::function<Vard(const std::vector<Vard>&)> f) {
    return [f](Mt19937&) { return f; };
  };

  cases.push_back({"matmul",
                   [](Mt19937& rng) {
                     const Eigen::Index m = dim(rng), k = dim(rng), n = dim(rng);
                     return std::vector<Eigen::MatrixXd>{rand_matrix(m, k, rng), rand_matrix(k, n, rng)};
                   },
                   no_extra([](const std::vector<Vard>& v) { return v[0] * v[1]; })});
  cases.push_back({"add", same_shape(2), no_extra([](const std::vector<Vard>& v) { return v[0] + v[1]; })});
  cases.push_back({"sub", same_shape(2), no_extra([](const std::vector<Vard>& v) { return v[0] - v[1]; })});
  cases.push_back({"mul", same_shape(2), no_extra([](const std::vector<Vard>& v) { return mul(v[0], v[1]); })});
  cases.push_back({"mul_self", same_shape(1), no_extra([](const std::vector<Vard>& v) { return mul(v[0], v[0]); })});
  cases.push_back({"affine", same_shape(1), [](Mt19937& rng) {
                     const double scale = 4.0 * rng.uniform01() - 2.0, shift = rng.uniform01();
                     return fixed([scale, shift](const std::vector<Vard>& v) { return affine(v[0], scale, shift); });
                   }});
  cases.push_back({"neg", same_shape(1), no_extra([](const std::vector<Vard>& v) { return -v[0]; })});
  cases.push_back({"tanh", same_shape(1), no_extra([](const std::vector<Vard>& v) { return numerics::tanh(v[0]); })});
  cases.push_back({"sigmoid", same_shape(1), no_extra([](const std::vector<Vard>& v) { return sigmoid(v[0]); })});
  cases.push_back({"concat_cols",
                   [](Mt19937& rng) {
                     const Eigen::Index r = dim(rng);
                     return std::vector<Eigen::MatrixXd>{rand_matrix(r, dim(rng), rng), rand_matrix(r, dim(rng), rng),
                                                         rand_matrix(r, dim(rng), rng)};
                   },
                   no_extra([](const std::vector<Vard>& v) { return concat({v[0], v[1], v[2]}, Axis::cols); })});
  cases.push_back({"concat_rows",
                   [](Mt19937& rng) {
                     const Eigen::Index c = dim(rng);
                     return std::vector<Eigen::MatrixXd>{rand_matrix(dim(rng), c, rng), rand_matrix(dim(rng), c, rng)};
                   },
                   no_extra([](const std::vector<Vard>& v) { return concat({v[0], v[1]}, Axis::rows); })});
  cases.push_back({"embedding_lookup",
                   [](Mt19937& rng) { return std::vector<Eigen::MatrixXd>{rand_matrix(dim(rng, 6), dim(rng), rng)}; },
                   [](Mt19937& rng) {
                     const std::uint64_t pick_seed = rng();
                     return fixed([pick_seed](const std::vector<Vard>& v) {
                       const int id = static_cast<int>(pick_seed % static_cast<std::uint64_t>(v[0].rows()));
                       // Two lookups of the same row exercise accumulation.
                       return embedding_lookup(v[0], id) + embedding_lookup(v[0], id);
                     });
                   }});
  cases.push_back({"dropout_mask_apply", same_shape(1), [](Mt19937& rng) {
                     const std::uint32_t mask_seed = rng();
                     return fixed([mask_seed](const std::vector<Vard>& v) {
                       Mt19937 mask_rng(mask_seed);
                       return dropout_mask_apply(v[0], dropout_mask<double>(v[0].rows(), v[0].cols(), 0.5, mask_rng));
                     });
                   }});
  cases.push_back({"transpose", same_shape(1), no_extra([](const std::vector<Vard>& v) { return transpose(v[0]); })});
  cases.push_back({"sum", same_shape(1), no_extra([](const std::vector<Vard>& v) { return numerics::sum(v[0]); })});
  cases.push_back({"pick", same_shape(1), [](Mt19937& rng) {
                     const std::uint32_t s = rng();
                     return fixed([s](const std::vector<Vard>& v) {
                       return pick(v[0], static_cast<Eigen::Index>(s % v[0].rows()),
                                   static_cast<Eigen::Index>((s / 7) % v[0].cols()));
                     });
                   }});
  cases.push_back({"softmax", same_shape(1), no_extra([](const std::vector<Vard>& v) { return softmax(v[0]); })});
  cases.push_back({"log_softmax", same_shape(1), no_extra([](const std::vector<Vard>& v) { return log_softmax(v[0]); })});
  cases.push_back({"cross_entropy",
                   [](Mt19937& rng) { return std::vector<Eigen::MatrixXd>{rand_matrix(1, 1 + dim(rng, 5), rng, 2.0)}; },
                   [](Mt19937& rng) {
                     const std::uint32_t s = rng();
                     return fixed([s](const std::vector<Vard>& v) {
                       return cross_entropy(softmax(v[0]), static_cast<int>(s % v[0].cols()));
                     });
                   }});
  // Two recurrent steps with bilinear attention and a softmax loss.
  cases.push_back({"recurrent_attention",
                   [](Mt19937& rng) {
                     const Eigen::Index h = 3, src = 4, vocab = 5;
                     return std::vector<Eigen::MatrixXd>{
                         rand_matrix(src, h, rng),   // encoder states
                         rand_matrix(1, h, rng),     // initial state
                         rand_matrix(h, h, rng),     // input weights
                         rand_matrix(h, h, rng),     // recurrent weights
                         rand_matrix(h, h, rng),     // attention
                         rand_matrix(2 * h, vocab, rng)};  // output
                   },
                   no_extra([](const std::vector<Vard>& v) {
                     Vard state = v[1];
                     Vard total;
                     for (int step = 0; step < 2; ++step) {
                       const Vard z = sigmoid(state * v[2]);
                       const Vard cand = numerics::tanh(state * v[3]);
                       state = cand + mul(z, state - cand);
                       const Vard weights = softmax(state * v[4] * transpose(v[0]));
                       const Vard context = weights * v[0];
                       const Vard loss = cross_entropy(softmax(concat({context, state}, Axis::cols) * v[5]), step + 1);
                       total = step == 0 ? loss : total + loss;
                     }
                     return total;
                   })});
  return cases;
}

}  // namespace hwc::testing
