// Copyright 2026 The addrl Authors.
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

#ifndef ADDRL_DIFF_TAPE_H_
#define ADDRL_DIFF_TAPE_H_

#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "addrl/diff/tensor.h"

namespace addrl::diff {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; valid while the
// owning tape lives.
class Var {
 public:
  Var() = default;

  Tape* tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  bool requires_grad() const;

 private:
  friend class Tape;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  int id_ = -1;
};

// Result of a backward pass: one gradient per gradient-tracking leaf.
class Gradients {
 public:
  // Gradient for a leaf registered with Tape::Watch, looked up by tensor
  // identity. Leaves that the loss does not reach have an all-zero gradient.
  const Tensor& of(const Tensor& watched) const;
  const Tensor& of(Var leaf) const;
  bool contains(const Tensor& watched) const;

 private:
  friend class Tape;
  std::unordered_map<int, Tensor> by_node_;
  std::unordered_map<const Tensor*, int> watched_;
};

// Define-by-run reverse-mode tape. Nodes are appended in evaluation order and
// replayed in strict reverse order by Backward(). A tape supports exactly one
// backward pass and is not shareable across threads.
class Tape {
 public:
  using BackwardFn = std::function<void(const Tensor& grad_out, Tape& tape)>;

  // A tape built with track_gradients = false records values only; use it
  // for inference.
  explicit Tape(bool track_gradients = true)
      : track_gradients_(track_gradients) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Registers an external tensor without copying it. The tensor must outlive
  // the tape. Gradients are tracked iff tensor.requires_grad().
  Var Watch(const Tensor& tensor);
  // Owned leaf that never receives gradients.
  Var Constant(Tensor tensor);
  // Owned leaf that always receives gradients.
  Var Parameter(Tensor tensor);

  // Appends a computed node. The backward function is kept only when some
  // input requires gradients.
  Var Record(Tensor value, std::vector<Var> inputs, BackwardFn backward);

  Gradients Backward(Var loss);

  const Tensor& value(int id) const;
  bool requires_grad(int id) const { return nodes_[id].requires_grad; }
  std::size_t num_nodes() const { return nodes_.size(); }

  // Gradient accumulator for a node, zero-initialised on first use.
  Tensor& GradSlot(int id);

 private:
  struct Node {
    Tensor owned;
    const Tensor* external = nullptr;
    std::vector<int> inputs;
    BackwardFn backward;
    bool requires_grad = false;
    bool is_leaf = false;
  };

  std::deque<Node> nodes_;
  std::vector<Tensor> grads_;
  std::unordered_map<const Tensor*, int> watched_;
  bool track_gradients_ = true;
  bool backward_done_ = false;
};

// ---- Primitives -----------------------------------------------------------
// Rank-1 inputs act as a single row. All results are rank 2 unless noted.

Var MatMul(Var a, Var b);                 // (m,k) x (k,n)
Var Transpose(Var a);
// Elementwise sum; b may also be a single row broadcast over a's rows.
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
Var Scale(Var a, double c);
Var Mul(Var a, Var b);                    // elementwise, equal shapes
Var ScaleRows(Var a, Var weights);        // row r times weights[r]
Var RowDot(Var a, Var b);                 // (m,n),(m,n) -> (m,1)
Var Tanh(Var a);
Var Sigmoid(Var a);
Var Relu(Var a);
Var Softplus(Var a);
Var LogSigmoid(Var a);
Var SoftmaxRows(Var a);
Var LogSoftmaxRows(Var a);
Var Concat(std::span<const Var> parts);   // along columns
Var Slice(Var a, std::size_t begin, std::size_t end);  // columns [begin,end)
Var GatherRows(Var table, std::span<const int> indices);
Var Reshape(Var a, Shape shape);
// Picks a[r, indices[r]] for every row; result (m,1).
Var Pick(Var a, std::span<const int> indices);
Var Sum(Var a);                           // shape {1}
Var RowSum(Var a);                        // (m,1)
// a and b hold consecutive blocks of `block` rows. Row b*block+k of the
// result holds the dot products of a's row k with every row of b's block.
Var BlockDot(Var a, Var b, std::size_t block);
Var L2NormalizeRows(Var a);

// Scalar helpers shared with non-taped code paths.
double StableSoftplus(double x);
double StableSigmoid(double x);

}  // namespace addrl::diff

#endif  // ADDRL_DIFF_TAPE_H_
