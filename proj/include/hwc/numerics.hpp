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

#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hwc/random.hpp"

// Dense matrices with a reverse-mode tape. Every tensor is rank 2; vectors
// are 1 x n rows.
namespace hwc::numerics {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

template <typename Derived>
std::string shape_string(const Eigen::MatrixBase<Derived>& m) {
  return "[" + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + "]";
}

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename A, typename B>
void require_same_shape(const char* op, const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_string(a) + " vs " + shape_string(b));
  }
}

// Row-wise softmax with max subtraction.
template <typename Derived>
typename Derived::PlainObject softmax_rows(const Eigen::MatrixBase<Derived>& x) {
  typename Derived::PlainObject out(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const auto shifted = (x.row(r).array() - x.row(r).maxCoeff()).exp().eval();
    out.row(r) = shifted / shifted.sum();
  }
  return out;
}

template <typename Derived>
typename Derived::PlainObject log_softmax_rows(const Eigen::MatrixBase<Derived>& x) {
  typename Derived::PlainObject out(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const auto m = x.row(r).maxCoeff();
    const auto shifted = (x.row(r).array() - m).eval();
    out.row(r) = shifted - std::log(shifted.exp().sum());
  }
  return out;
}

template <typename Scalar>
class Tape;

// Handle to a node on a Tape. Cheap to copy; valid while the tape lives.
template <typename Scalar>
class Var {
 public:
  Var() = default;

  Tape<Scalar>& tape() const { return *tape_; }
  std::size_t index() const { return index_; }
  const Matrix<Scalar>& value() const { return tape_->value(index_); }
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape<Scalar>;
  Var(Tape<Scalar>* tape, std::size_t index) : tape_(tape), index_(index) {}

  Tape<Scalar>* tape_ = nullptr;
  std::size_t index_ = 0;
};

template <typename Scalar>
class Tape {
 public:
  using MatrixType = Matrix<Scalar>;
  using VarType = Var<Scalar>;
  // Receives the gradient flowing into the node; accumulates into its inputs.
  using Backward = std::function<void(Tape&, const MatrixType&)>;

  // A non-recording tape evaluates values only.
  explicit Tape(bool record = true) : record_(record) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return record_; }
  std::size_t size() const { return nodes_.size(); }

  VarType constant(MatrixType value) { return push(std::move(value), nullptr, false, {}); }
  VarType variable(MatrixType value) { return push(std::move(value), nullptr, record_, {}); }
  // The tape reads `storage` in place; it must outlive the tape.
  VarType parameter(const MatrixType& storage) { return push({}, &storage, record_, {}); }

  VarType record(MatrixType value, std::initializer_list<VarType> inputs, Backward backward) {
    return record(std::move(value), std::span<const VarType>(inputs.begin(), inputs.size()), std::move(backward));
  }

  VarType record(MatrixType value, std::span<const VarType> inputs, Backward backward) {
    bool needs = false;
    if (record_) {
      for (const auto& v : inputs) needs = needs || requires_grad(v.index());
    }
    return push(std::move(value), nullptr, needs, needs ? std::move(backward) : Backward{});
  }

  const MatrixType& value(std::size_t i) const {
    const Node& n = nodes_[i];
    return n.external != nullptr ? *n.external : n.value;
  }
  bool requires_grad(std::size_t i) const { return nodes_[i].requires_grad; }

  template <typename Derived>
  void accumulate(std::size_t i, const Eigen::MatrixBase<Derived>& g) {
    if (!nodes_[i].requires_grad) return;
    grad_storage(i) += g;
  }

  // Zero-initialized on first use.
  MatrixType& grad_storage(std::size_t i) {
    Node& n = nodes_[i];
    if (n.grad.size() == 0) {
      const auto& v = value(i);
      n.grad = MatrixType::Zero(v.rows(), v.cols());
    }
    return n.grad;
  }

  // Gradient accumulated by backward(); zeros when the node was not reached.
  MatrixType gradient(const VarType& v) const {
    const Node& n = nodes_[v.index()];
    if (n.grad.size() == 0) {
      const auto& val = value(v.index());
      return MatrixType::Zero(val.rows(), val.cols());
    }
    return n.grad;
  }

  void backward(const VarType& loss) {
    const auto& lv = value(loss.index());
    if (lv.rows() != 1 || lv.cols() != 1) {
      throw ShapeError("backward: loss must be scalar, got " + shape_string(lv));
    }
    if (!requires_grad(loss.index())) return;
    grad_storage(loss.index()).array() += Scalar(1);
    for (std::size_t i = loss.index() + 1; i-- > 0;) {
      Node& n = nodes_[i];
      if (n.backward && n.grad.size() != 0) n.backward(*this, n.grad);
    }
  }

  void zero_grad() {
    for (auto& n : nodes_) n.grad.resize(0, 0);
  }

 private:
  struct Node {
    MatrixType value;
    const MatrixType* external = nullptr;
    MatrixType grad;
    bool requires_grad = false;
    Backward backward;
  };

  VarType push(MatrixType value, const MatrixType* external, bool requires_grad, Backward backward) {
    nodes_.push_back(Node{std::move(value), external, {}, requires_grad, std::move(backward)});
    return VarType(this, nodes_.size() - 1);
  }

  bool record_;
  std::deque<Node> nodes_;  // deque: references stay valid as the tape grows
};

// ---------------------------------------------------------------------------
// Primitives. Each computes its value eagerly and records a backward rule.

template <typename Scalar>
Var<Scalar> matmul(const Var<Scalar>& a, const Var<Scalar>& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: shape mismatch " + shape_string(a.value()) + " vs " + shape_string(b.value()));
  }
  const std::size_t ia = a.index(), ib = b.index();
  return a.tape().record(a.value() * b.value(), {a, b}, [ia, ib](Tape<Scalar>& t, const Matrix<Scalar>& g) {
    if (t.requires_grad(ia)) t.accumulate(ia, g * t.value(ib).transpose());
    if (t.requires_grad(ib)) t.accumulate(ib, t.value(ia).transpose() * g);
  });
}

template <typename Scalar>
Var<Scalar> add(const Var<Scalar>& a, const Var<Scalar>& b) {
  require_same_shape("add", a.value(), b.value());
  const std::size_t ia = a.index(), ib = b.index();
  return a.tape().record(a.value() + b.value(), {a, b}, [ia, ib](Tape<Scalar>& t, const Matrix<Scalar>& g) {
    t.accumulate(ia, g);
    t.accumulate(ib, g);
  });
}

template <typename Scalar>
Var<Scalar> sub(const Var<Scalar>& a, const Var<Scalar>& b) {
  require_same_shape("sub", a.value(), b.value());
  const std::size_t ia = a.index(), ib = b.index();
  return a.tape().record(a.value() - b.value(), {a, b}, [ia, ib](Tape<Scalar>& t, const Matrix<Scalar>& g) {
    t.accumulate(ia, g);
    t.accumulate(ib, -g);
  });
}

// Elementwise product.
template <typename Scalar>
Var<Scalar> mul(const Var<Scalar>& a, const Var<Scalar>& b) {
  require_same_shape("mul", a.value(), b.value());
  const std::size_t ia = a.index(), ib = b.index();
  return a.tape().record(a.value().cwiseProduct(b.value()), {a, b},
                         [ia, ib](Tape<Scalar>& t, const Matrix<Scalar>& g) {
                           if (t.requires_grad(ia)) t.accumulate(ia, g.cwiseProduct(t.value(ib)));
                           if (t.requires_grad(ib)) t.accumulate(ib, g.cwiseProduct(t.value(ia)));
                         });
}

// scale * a + shift
template <typename Scalar>
Var<Scalar> affine(const Var<Scalar>& a, Scalar scale, Scalar shift) {
  const std::size_t ia = a.index();
  Matrix<Scalar> out = (a.value().array() * scale + shift).matrix();
  return a.tape().record(std::move(out), {a},
                         [ia, scale](Tape<Scalar>& t, const Matrix<Scalar>& g) { t.accumulate(ia, g * scale); });
}

template <typename Scalar>
Var<Scalar> tanh(const Var<Scalar>& a) {
  const std::size_t ia = a.index();
  Matrix<Scalar> y = a.value().array().tanh().matrix();
  const std::size_t iy = a.tape().size();
  return a.tape().record(std::move(y), {a}, [ia, iy](Tape<Scalar>& t, const Matrix<Scalar>& g) {
    const auto& y = t.value(iy);
    t.accumulate(ia, (g.array() * (Scalar(1) - y.array().square())).matrix());
  });
}

template <typename Scalar>
Var<Scalar> sigmoid(const Var<Scalar>& a) {
  const std::size_t ia = a.index();
  Matrix<Scalar> y = (Scalar(1) / (Scalar(1) + (-a.value().array()).exp())).matrix();
  const std::size_t iy = a.tape().size();
  return a.tape().record(std::move(y), {a}, [ia, iy](Tape<Scalar>& t, const Matrix<Scalar>& g) {
    const auto& y = t.value(iy);
    t.accumulate(ia, (g.array() * y.array() * (Scalar(1) - y.array())).matrix());
  });
}

enum class Axis { rows, cols };

// Stacks vertically (Axis::rows) or side by side (Axis::cols).
template <typename Scalar>
Var<Scalar> concat(std::span<const Var<Scalar>> parts, Axis axis) {
  if (parts.empty()) throw std::invalid_argument("concat: no inputs");
  Eigen::Index rows = 0, cols = 0;
  for (const auto& p : parts) {
    if (axis == Axis::rows) {
      if (rows > 0 && p.cols() != cols) {
        throw ShapeError("concat: column mismatch [" + std::to_string(rows) + "x" + std::to_string(cols) + "] vs " +
                         shape_string(p.value()));
      }
      cols = p.cols();
      rows += p.rows();
    } else {
      if (cols > 0 && p.rows() != rows) {
        throw ShapeError("concat: row mismatch [" + std::to_string(rows) + "x" + std::to_string(cols) + "] vs " +
                         shape_string(p.value()));
      }
      rows = p.rows();
      cols += p.cols();
    }
  }
  Matrix<Scalar> out(rows, cols);
  std::vector<std::size_t> indices;
  std::vector<Eigen::Index> offsets;
  Eigen::Index offset = 0;
  for (const auto& p : parts) {
    indices.push_back(p.index());
    offsets.push_back(offset);
    if (axis == Axis::rows) {
      out.middleRows(offset, p.rows()) = p.value();
      offset += p.rows();
    } else {
      out.middleCols(offset, p.cols()) = p.value();
      offset += p.cols();
    }
  }
  return parts.front().tape().record(
      std::move(out), parts,
      [indices = std::move(indices), offsets = std::move(offsets), axis](Tape<Scalar>& t, const Matrix<Scalar>& g) {
        for (std::size_t k = 0; k < indices.size(); ++k) {
          const auto i = indices[k];
          if (!t.requires_grad(i)) continue;
          const auto& v = t.value(i);
          if (axis == Axis::rows) {
            t.accumulate(i, g.middleRows(offsets[k], v.rows()));
          } else {
            t.accumulate(i, g.middleCols(offsets[k], v.cols()));
          }
        }
      });
}

template <typename Scalar>
Var<Scalar> concat(std::initializer_list<Var<Scalar>> parts, Axis axis) {
  return concat(std::span<const Var<Scalar>>(parts.begin(), parts.size()), axis);
}

// Row `id` of `table` as a 1 x cols vector.
template <typename Scalar>
Var<Scalar> embedding_lookup(const Var<Scalar>& table, int id) {
  if (id < 0 || id >= table.rows()) {
    throw std::out_of_range("embedding_lookup: id " + std::to_string(id) + " outside table " +
                            shape_string(table.value()));
  }
  const std::size_t it = table.index();
  Matrix<Scalar> row = table.value().row(id);
  return table.tape().record(std::move(row), {table}, [it, id](Tape<Scalar>& t, const Matrix<Scalar>& g) {
    if (t.requires_grad(it)) t.grad_storage(it).row(id) += g;
  });
}

// Inverted dropout: keep with probability 1 - rate, kept entries scaled by
// 1/(1 - rate). Rate 0 yields all ones without consuming randomness.
template <typename Scalar>
Matrix<Scalar> dropout_mask(Eigen::Index rows, Eigen::Index cols, Scalar rate, Mt19937& rng) {
  if (!(rate >= Scalar(0) && rate < Scalar(1))) throw std::invalid_argument("dropout rate must be in [0, 1)");
  Matrix<Scalar> mask = Matrix<Scalar>::Ones(rows, cols);
  if (rate == Scalar(0)) return mask;
  const Scalar keep_scale = Scalar(1) / (Scalar(1) - rate);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      mask(r, c) = rng.uniform01() < static_cast<double>(rate) ? Scalar(0) : keep_scale;
    }
  }
  return mask;
}

template <typename Scalar>
Var<Scalar> dropout_mask_apply(const Var<Scalar>& x, const Matrix<Scalar>& mask) {
  require_same_shape("dropout_mask_apply", x.value(), mask);
  const std::size_t ix = x.index();
  return x.tape().record(x.value().cwiseProduct(mask), {x},
                         [ix, mask](Tape<Scalar>& t, const Matrix<Scalar>& g) { t.accumulate(ix, g.cwiseProduct(mask)); });
}

template <typename Scalar>
Var<Scalar> transpose(const Var<Scalar>& a) {
  const std::size_t ia = a.index();
  return a.tape().record(a.value().transpose(), {a},
                         [ia](Tape<Scalar>& t, const Matrix<Scalar>& g) { t.accumulate(ia, g.transpose()); });
}

template <typename Scalar>
Var<Scalar> sum(const Var<Scalar>& a) {
  const std::size_t ia = a.index();
  Matrix<Scalar> out(1, 1);
  out(0, 0) = a.value().sum();
  return a.tape().record(std::move(out), {a}, [ia](Tape<Scalar>& t, const Matrix<Scalar>& g) {
    const auto& v = t.value(ia);
    t.accumulate(ia, Matrix<Scalar>::Constant(v.rows(), v.cols(), g(0, 0)));
  });
}

// Element (row, col) as a 1 x 1 node.
template <typename Scalar>
Var<Scalar> pick(const Var<Scalar>& a, Eigen::Index row, Eigen::Index col) {
  if (row < 0 || row >= a.rows() || col < 0 || col >= a.cols()) {
    throw std::out_of_range("pick: (" + std::to_string(row) + ", " + std::to_string(col) + ") outside " +
                            shape_string(a.value()));
  }
  const std::size_t ia = a.index();
  Matrix<Scalar> out(1, 1);
  out(0, 0) = a.value()(row, col);
  return a.tape().record(std::move(out), {a}, [ia, row, col](Tape<Scalar>& t, const Matrix<Scalar>& g) {
    if (t.requires_grad(ia)) t.grad_storage(ia)(row, col) += g(0, 0);
  });
}

template <typename Scalar>
Var<Scalar> softmax(const Var<Scalar>& x) {
  const std::size_t ix = x.index();
  const std::size_t iy = x.tape().size();
  return x.tape().record(softmax_rows(x.value()), {x}, [ix, iy](Tape<Scalar>& t, const Matrix<Scalar>& g) {
    const auto& y = t.value(iy);
    const Matrix<Scalar> dot = g.cwiseProduct(y).rowwise().sum();
    Matrix<Scalar> dx = y.cwiseProduct(g - dot.replicate(1, g.cols()));
    t.accumulate(ix, dx);
  });
}

template <typename Scalar>
Var<Scalar> log_softmax(const Var<Scalar>& x) {
  const std::size_t ix = x.index();
  const std::size_t iy = x.tape().size();
  return x.tape().record(log_softmax_rows(x.value()), {x}, [ix, iy](Tape<Scalar>& t, const Matrix<Scalar>& g) {
    const Matrix<Scalar> p = t.value(iy).array().exp().matrix();
    const Matrix<Scalar> total = g.rowwise().sum();
    t.accumulate(ix, g - p.cwiseProduct(total.replicate(1, g.cols())));
  });
}

inline constexpr double kProbabilityFloor = 1e-12;

// -ln(max(p[target], 1e-12)) for a 1 x V probability row.
template <typename Scalar>
Var<Scalar> cross_entropy(const Var<Scalar>& probs, int target) {
  if (probs.rows() != 1) throw ShapeError("cross_entropy: expected a row, got " + shape_string(probs.value()));
  if (target < 0 || target >= probs.cols()) {
    throw std::out_of_range("cross_entropy: target " + std::to_string(target) + " outside " +
                            shape_string(probs.value()));
  }
  const std::size_t ip = probs.index();
  const Scalar p = probs.value()(0, target);
  const Scalar floor = static_cast<Scalar>(kProbabilityFloor);
  Matrix<Scalar> out(1, 1);
  out(0, 0) = -std::log(p > floor ? p : floor);
  return probs.tape().record(std::move(out), {probs}, [ip, target, p, floor](Tape<Scalar>& t, const Matrix<Scalar>& g) {
    if (p > floor && t.requires_grad(ip)) t.grad_storage(ip)(0, target) -= g(0, 0) / p;
  });
}

// Expression sugar.
template <typename Scalar>
Var<Scalar> operator+(const Var<Scalar>& a, const Var<Scalar>& b) { return add(a, b); }
template <typename Scalar>
Var<Scalar> operator-(const Var<Scalar>& a, const Var<Scalar>& b) { return sub(a, b); }
template <typename Scalar>
Var<Scalar> operator-(const Var<Scalar>& a) { return affine(a, Scalar(-1), Scalar(0)); }
// Matrix product, as in Eigen.
template <typename Scalar>
Var<Scalar> operator*(const Var<Scalar>& a, const Var<Scalar>& b) { return matmul(a, b); }

// ---------------------------------------------------------------------------

template <typename Scalar>
struct AdagradState {
  Scalar learning_rate = Scalar(0.15);
  Scalar epsilon = Scalar(1e-8);
  std::vector<Matrix<Scalar>> accumulators;  // sized on first step
};

// acc += g^2; p -= lr * g / (sqrt(acc) + eps)
template <typename Scalar>
void adagrad_step(std::span<Matrix<Scalar>* const> params, std::span<const Matrix<Scalar>> grads,
                  AdagradState<Scalar>& state) {
  if (params.size() != grads.size()) {
    throw std::invalid_argument("adagrad_step: " + std::to_string(params.size()) + " parameters but " +
                                std::to_string(grads.size()) + " gradients");
  }
  if (state.accumulators.empty()) {
    for (const auto* p : params) state.accumulators.push_back(Matrix<Scalar>::Zero(p->rows(), p->cols()));
  }
  if (state.accumulators.size() != params.size()) {
    throw std::invalid_argument("adagrad_step: state was built for a different parameter list");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    require_same_shape("adagrad_step", *params[k], grads[k]);
    require_same_shape("adagrad_step", state.accumulators[k], grads[k]);
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& acc = state.accumulators[k];
    acc.array() += grads[k].array().square();
    params[k]->array() -= state.learning_rate * grads[k].array() / (acc.array().sqrt() + state.epsilon);
  }
}

// Uniform(-bound, bound) in row-major draw order.
template <typename Scalar>
Matrix<Scalar> uniform_matrix(Eigen::Index rows, Eigen::Index cols, Scalar bound, Mt19937& rng) {
  Matrix<Scalar> m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = static_cast<Scalar>((2.0 * rng.uniform01() - 1.0) * static_cast<double>(bound));
    }
  }
  return m;
}

}  // namespace hwc::numerics
