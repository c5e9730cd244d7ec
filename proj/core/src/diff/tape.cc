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

#include "addrl/diff/tape.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "addrl/error.h"

namespace addrl::diff {
namespace {

Tape& CommonTape(Var a, Var b, const char* op) {
  if (!a.valid() || !b.valid()) {
    throw TapeError(fmt::format("{}: uninitialised variable", op));
  }
  if (a.tape() != b.tape()) {
    throw TapeError(fmt::format("{}: operands live on different tapes", op));
  }
  return *a.tape();
}

Tape& TapeOf(Var a, const char* op) {
  if (!a.valid()) throw TapeError(fmt::format("{}: uninitialised variable", op));
  return *a.tape();
}

[[noreturn]] void ShapeMismatch(const char* op, const Tensor& a,
                                const Tensor& b) {
  throw ShapeError(fmt::format("{}: incompatible shapes {} and {}", op,
                               ShapeString(a.shape()), ShapeString(b.shape())));
}

// c (m,n) += a (m,k) * b (k,n)
void GemmNN(const double* a, const double* b, double* c, std::size_t m,
            std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    const double* ai = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ai[p];
      const double* bp = b + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

// c (m,n) += a (m,k) * b^T where b is (n,k)
void GemmNT(const double* a, const double* b, double* c, std::size_t m,
            std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    double* ci = c + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double* bj = b + j * k;
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += ai[p] * bj[p];
      ci[j] += s;
    }
  }
}

// c (k,n) += a^T * b where a is (m,k), b is (m,n)
void GemmTN(const double* a, const double* b, double* c, std::size_t m,
            std::size_t k, std::size_t n) {
  for (std::size_t p = 0; p < m; ++p) {
    const double* ap = a + p * k;
    const double* bp = b + p * n;
    for (std::size_t i = 0; i < k; ++i) {
      const double av = ap[i];
      double* ci = c + i * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

Shape MatShape(std::size_t rows, std::size_t cols) { return {rows, cols}; }

template <typename Fn, typename Deriv>
Var Elementwise(Var a, Fn fn, Deriv deriv) {
  Tape& tape = TapeOf(a, "elementwise");
  const Tensor& x = a.value();
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = fn(x[i]);
  const int ia = a.id();
  return tape.Record(std::move(y), {a},
                     [ia, deriv](const Tensor& g, Tape& t) {
                       const Tensor& xv = t.value(ia);
                       Tensor& ga = t.GradSlot(ia);
                       for (std::size_t i = 0; i < g.size(); ++i) {
                         ga[i] += g[i] * deriv(xv[i]);
                       }
                     });
}

}  // namespace

// ---- Var / Gradients ------------------------------------------------------

const Tensor& Var::value() const {
  if (!valid()) throw TapeError("value() on an uninitialised variable");
  return tape_->value(id_);
}

bool Var::requires_grad() const {
  return valid() && tape_->requires_grad(id_);
}

const Tensor& Gradients::of(const Tensor& watched) const {
  auto it = watched_.find(&watched);
  if (it == watched_.end()) {
    throw TapeError("gradient requested for a tensor not watched by the tape");
  }
  auto g = by_node_.find(it->second);
  if (g == by_node_.end()) {
    throw TapeError("gradient requested for a tensor that does not require grad");
  }
  return g->second;
}

const Tensor& Gradients::of(Var leaf) const {
  auto g = by_node_.find(leaf.id());
  if (g == by_node_.end()) {
    throw TapeError("gradient requested for a node that is not a tracked leaf");
  }
  return g->second;
}

bool Gradients::contains(const Tensor& watched) const {
  auto it = watched_.find(&watched);
  return it != watched_.end() && by_node_.count(it->second) > 0;
}

// ---- Tape -----------------------------------------------------------------

Var Tape::Watch(const Tensor& tensor) {
  if (auto it = watched_.find(&tensor); it != watched_.end()) {
    return Var(this, it->second);
  }
  Node node;
  node.external = &tensor;
  node.requires_grad = track_gradients_ && tensor.requires_grad();
  node.is_leaf = true;
  nodes_.push_back(std::move(node));
  const int id = static_cast<int>(nodes_.size()) - 1;
  watched_.emplace(&tensor, id);
  return Var(this, id);
}

Var Tape::Constant(Tensor tensor) {
  Node node;
  node.owned = std::move(tensor);
  node.is_leaf = true;
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::Parameter(Tensor tensor) {
  Node node;
  node.owned = std::move(tensor);
  node.requires_grad = track_gradients_;
  node.is_leaf = true;
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::Record(Tensor value, std::vector<Var> inputs, BackwardFn backward) {
  if (backward_done_) throw TapeError("cannot record after backward()");
  Node node;
  node.owned = std::move(value);
  for (const Var& v : inputs) {
    if (v.tape() != this) throw TapeError("input recorded on another tape");
    node.inputs.push_back(v.id());
    node.requires_grad = node.requires_grad || nodes_[v.id()].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

const Tensor& Tape::value(int id) const {
  const Node& n = nodes_[id];
  return n.external != nullptr ? *n.external : n.owned;
}

Tensor& Tape::GradSlot(int id) {
  Tensor& slot = grads_[id];
  if (slot.empty()) slot = Tensor(value(id).shape());
  return slot;
}

Gradients Tape::Backward(Var loss) {
  if (backward_done_) throw TapeError("backward() called twice on one tape");
  if (loss.tape() != this) throw TapeError("loss was not recorded on this tape");
  if (!loss.value().is_scalar()) {
    throw ShapeError(fmt::format("backward() needs a scalar loss, got shape {}",
                                 ShapeString(loss.shape())));
  }
  backward_done_ = true;
  grads_.assign(nodes_.size(), Tensor());
  grads_[loss.id()] = Tensor::Full(loss.shape(), 1.0);

  for (int id = loss.id(); id >= 0; --id) {
    Node& node = nodes_[id];
    if (!node.backward || grads_[id].empty()) continue;
    // Inputs always precede their consumer, so this slot is final.
    const Tensor grad = std::move(grads_[id]);
    node.backward(grad, *this);
  }

  Gradients out;
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const Node& node = nodes_[id];
    if (!node.is_leaf || !node.requires_grad) continue;
    Tensor g = grads_[id].empty() ? Tensor(value(static_cast<int>(id)).shape())
                                  : std::move(grads_[id]);
    out.by_node_.emplace(static_cast<int>(id), std::move(g));
  }
  out.watched_ = watched_;
  grads_.clear();
  return out;
}

// ---- Primitives -----------------------------------------------------------

Var MatMul(Var a, Var b) {
  Tape& tape = CommonTape(a, b, "MatMul");
  const Tensor& x = a.value();
  const Tensor& w = b.value();
  if (x.cols() != w.rows()) ShapeMismatch("MatMul", x, w);
  const std::size_t m = x.rows(), k = x.cols(), n = w.cols();
  Tensor y(MatShape(m, n));
  GemmNN(x.data().data(), w.data().data(), y.mutable_data().data(), m, k, n);
  const int ia = a.id(), ib = b.id();
  return tape.Record(std::move(y), {a, b},
                     [ia, ib, m, k, n](const Tensor& g, Tape& t) {
                       if (t.requires_grad(ia)) {
                         GemmNT(g.data().data(), t.value(ib).data().data(),
                                t.GradSlot(ia).mutable_data().data(), m, n, k);
                       }
                       if (t.requires_grad(ib)) {
                         GemmTN(t.value(ia).data().data(), g.data().data(),
                                t.GradSlot(ib).mutable_data().data(), m, k, n);
                       }
                     });
}

Var Transpose(Var a) {
  Tape& tape = TapeOf(a, "Transpose");
  const Tensor& x = a.value();
  const std::size_t m = x.rows(), n = x.cols();
  Tensor y(MatShape(n, m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) y.at(j, i) = x.at(i, j);
  const int ia = a.id();
  return tape.Record(std::move(y), {a}, [ia, m, n](const Tensor& g, Tape& t) {
    Tensor& ga = t.GradSlot(ia);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) ga[i * n + j] += g[j * m + i];
  });
}

Var Add(Var a, Var b) {
  Tape& tape = CommonTape(a, b, "Add");
  const Tensor& x = a.value();
  const Tensor& z = b.value();
  const bool same = x.shape() == z.shape();
  const bool row_broadcast =
      !same && z.rows() == 1 && z.cols() == x.cols();
  if (!same && !row_broadcast) ShapeMismatch("Add", x, z);
  Tensor y = x;
  const std::size_t cols = x.cols();
  if (same) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += z[i];
  } else {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += z[i % cols];
  }
  const int ia = a.id(), ib = b.id();
  return tape.Record(std::move(y), {a, b},
                     [ia, ib, same, cols](const Tensor& g, Tape& t) {
                       if (t.requires_grad(ia)) {
                         Tensor& ga = t.GradSlot(ia);
                         for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
                       }
                       if (t.requires_grad(ib)) {
                         Tensor& gb = t.GradSlot(ib);
                         if (same) {
                           for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i];
                         } else {
                           for (std::size_t i = 0; i < g.size(); ++i)
                             gb[i % cols] += g[i];
                         }
                       }
                     });
}

Var Sub(Var a, Var b) { return Add(a, Scale(b, -1.0)); }

Var Scale(Var a, double c) {
  Tape& tape = TapeOf(a, "Scale");
  Tensor y = a.value();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] *= c;
  const int ia = a.id();
  return tape.Record(std::move(y), {a}, [ia, c](const Tensor& g, Tape& t) {
    Tensor& ga = t.GradSlot(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += c * g[i];
  });
}

Var Mul(Var a, Var b) {
  Tape& tape = CommonTape(a, b, "Mul");
  const Tensor& x = a.value();
  const Tensor& z = b.value();
  if (x.shape() != z.shape()) ShapeMismatch("Mul", x, z);
  Tensor y = x;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] *= z[i];
  const int ia = a.id(), ib = b.id();
  return tape.Record(std::move(y), {a, b}, [ia, ib](const Tensor& g, Tape& t) {
    if (t.requires_grad(ia)) {
      const Tensor& zv = t.value(ib);
      Tensor& ga = t.GradSlot(ia);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * zv[i];
    }
    if (t.requires_grad(ib)) {
      const Tensor& xv = t.value(ia);
      Tensor& gb = t.GradSlot(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * xv[i];
    }
  });
}

Var ScaleRows(Var a, Var weights) {
  Tape& tape = CommonTape(a, weights, "ScaleRows");
  const Tensor& x = a.value();
  const Tensor& w = weights.value();
  if (w.size() != x.rows()) ShapeMismatch("ScaleRows", x, w);
  const std::size_t m = x.rows(), n = x.cols();
  Tensor y = x;
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t j = 0; j < n; ++j) y[r * n + j] *= w[r];
  const int ia = a.id(), iw = weights.id();
  return tape.Record(std::move(y), {a, weights},
                     [ia, iw, m, n](const Tensor& g, Tape& t) {
                       if (t.requires_grad(ia)) {
                         const Tensor& wv = t.value(iw);
                         Tensor& ga = t.GradSlot(ia);
                         for (std::size_t r = 0; r < m; ++r)
                           for (std::size_t j = 0; j < n; ++j)
                             ga[r * n + j] += g[r * n + j] * wv[r];
                       }
                       if (t.requires_grad(iw)) {
                         const Tensor& xv = t.value(ia);
                         Tensor& gw = t.GradSlot(iw);
                         for (std::size_t r = 0; r < m; ++r) {
                           double s = 0.0;
                           for (std::size_t j = 0; j < n; ++j)
                             s += g[r * n + j] * xv[r * n + j];
                           gw[r] += s;
                         }
                       }
                     });
}

Var RowDot(Var a, Var b) {
  Tape& tape = CommonTape(a, b, "RowDot");
  const Tensor& x = a.value();
  const Tensor& z = b.value();
  if (x.rows() != z.rows() || x.cols() != z.cols()) ShapeMismatch("RowDot", x, z);
  const std::size_t m = x.rows(), n = x.cols();
  Tensor y(MatShape(m, 1));
  for (std::size_t r = 0; r < m; ++r) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += x[r * n + j] * z[r * n + j];
    y[r] = s;
  }
  const int ia = a.id(), ib = b.id();
  return tape.Record(std::move(y), {a, b},
                     [ia, ib, m, n](const Tensor& g, Tape& t) {
                       // Fetch values first: a and b may be the same node.
                       const Tensor& xv = t.value(ia);
                       const Tensor& zv = t.value(ib);
                       if (t.requires_grad(ia)) {
                         Tensor& ga = t.GradSlot(ia);
                         for (std::size_t r = 0; r < m; ++r)
                           for (std::size_t j = 0; j < n; ++j)
                             ga[r * n + j] += g[r] * zv[r * n + j];
                       }
                       if (t.requires_grad(ib)) {
                         Tensor& gb = t.GradSlot(ib);
                         for (std::size_t r = 0; r < m; ++r)
                           for (std::size_t j = 0; j < n; ++j)
                             gb[r * n + j] += g[r] * xv[r * n + j];
                       }
                     });
}

double StableSigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double StableSoftplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

Var Tanh(Var a) {
  return Elementwise(
      a, [](double x) { return std::tanh(x); },
      [](double x) {
        const double y = std::tanh(x);
        return 1.0 - y * y;
      });
}

Var Sigmoid(Var a) {
  return Elementwise(a, StableSigmoid, [](double x) {
    const double s = StableSigmoid(x);
    return s * (1.0 - s);
  });
}

Var Relu(Var a) {
  return Elementwise(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x) { return x > 0.0 ? 1.0 : 0.0; });
}

Var Softplus(Var a) { return Elementwise(a, StableSoftplus, StableSigmoid); }

Var LogSigmoid(Var a) {
  return Elementwise(
      a, [](double x) { return -StableSoftplus(-x); },
      [](double x) { return StableSigmoid(-x); });
}

Var SoftmaxRows(Var a) {
  Tape& tape = TapeOf(a, "SoftmaxRows");
  const Tensor& x = a.value();
  const std::size_t m = x.rows(), n = x.cols();
  Tensor y(x.shape());
  for (std::size_t r = 0; r < m; ++r) {
    auto in = x.row(r);
    const double mx = *std::max_element(in.begin(), in.end());
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      y[r * n + j] = std::exp(in[j] - mx);
      z += y[r * n + j];
    }
    for (std::size_t j = 0; j < n; ++j) y[r * n + j] /= z;
  }
  const int ia = a.id();
  Tensor yc = y;
  return tape.Record(std::move(y), {a},
                     [ia, m, n, yc = std::move(yc)](const Tensor& g, Tape& t) {
                       Tensor& ga = t.GradSlot(ia);
                       for (std::size_t r = 0; r < m; ++r) {
                         double dot = 0.0;
                         for (std::size_t j = 0; j < n; ++j)
                           dot += g[r * n + j] * yc[r * n + j];
                         for (std::size_t j = 0; j < n; ++j)
                           ga[r * n + j] += yc[r * n + j] * (g[r * n + j] - dot);
                       }
                     });
}

Var LogSoftmaxRows(Var a) {
  Tape& tape = TapeOf(a, "LogSoftmaxRows");
  const Tensor& x = a.value();
  const std::size_t m = x.rows(), n = x.cols();
  Tensor y(x.shape());
  for (std::size_t r = 0; r < m; ++r) {
    auto in = x.row(r);
    const double mx = *std::max_element(in.begin(), in.end());
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) z += std::exp(in[j] - mx);
    const double lse = mx + std::log(z);
    for (std::size_t j = 0; j < n; ++j) y[r * n + j] = in[j] - lse;
  }
  const int ia = a.id();
  Tensor probs(x.shape());
  for (std::size_t i = 0; i < y.size(); ++i) probs[i] = std::exp(y[i]);
  return tape.Record(std::move(y), {a},
                     [ia, m, n, probs = std::move(probs)](const Tensor& g,
                                                          Tape& t) {
                       Tensor& ga = t.GradSlot(ia);
                       for (std::size_t r = 0; r < m; ++r) {
                         double s = 0.0;
                         for (std::size_t j = 0; j < n; ++j) s += g[r * n + j];
                         for (std::size_t j = 0; j < n; ++j)
                           ga[r * n + j] += g[r * n + j] - probs[r * n + j] * s;
                       }
                     });
}

Var Concat(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("Concat: no inputs");
  Tape& tape = TapeOf(parts[0], "Concat");
  const std::size_t m = parts[0].value().rows();
  const bool rank1 = parts[0].value().rank() == 1;
  std::size_t total = 0;
  std::vector<std::size_t> offsets;
  for (const Var& p : parts) {
    CommonTape(parts[0], p, "Concat");
    if (p.value().rows() != m) ShapeMismatch("Concat", parts[0].value(), p.value());
    offsets.push_back(total);
    total += p.value().cols();
  }
  Tensor y(rank1 ? Shape{total} : MatShape(m, total));
  for (std::size_t pi = 0; pi < parts.size(); ++pi) {
    const Tensor& x = parts[pi].value();
    const std::size_t n = x.cols();
    for (std::size_t r = 0; r < m; ++r)
      std::copy_n(x.data().data() + r * n, n,
                  y.mutable_data().data() + r * total + offsets[pi]);
  }
  std::vector<int> ids;
  for (const Var& p : parts) ids.push_back(p.id());
  return tape.Record(
      std::move(y), std::vector<Var>(parts.begin(), parts.end()),
      [ids, offsets, m, total](const Tensor& g, Tape& t) {
        for (std::size_t pi = 0; pi < ids.size(); ++pi) {
          if (!t.requires_grad(ids[pi])) continue;
          Tensor& gp = t.GradSlot(ids[pi]);
          const std::size_t n = gp.cols();
          for (std::size_t r = 0; r < m; ++r)
            for (std::size_t j = 0; j < n; ++j)
              gp[r * n + j] += g[r * total + offsets[pi] + j];
        }
      });
}

Var Slice(Var a, std::size_t begin, std::size_t end) {
  Tape& tape = TapeOf(a, "Slice");
  const Tensor& x = a.value();
  if (begin >= end || end > x.cols()) {
    throw ShapeError(fmt::format("Slice: column range [{},{}) invalid for {}",
                                 begin, end, ShapeString(x.shape())));
  }
  const std::size_t m = x.rows(), n = x.cols(), w = end - begin;
  Tensor y(x.rank() == 1 ? Shape{w} : MatShape(m, w));
  for (std::size_t r = 0; r < m; ++r)
    std::copy_n(x.data().data() + r * n + begin, w,
                y.mutable_data().data() + r * w);
  const int ia = a.id();
  return tape.Record(std::move(y), {a},
                     [ia, m, n, w, begin](const Tensor& g, Tape& t) {
                       Tensor& ga = t.GradSlot(ia);
                       for (std::size_t r = 0; r < m; ++r)
                         for (std::size_t j = 0; j < w; ++j)
                           ga[r * n + begin + j] += g[r * w + j];
                     });
}

Var GatherRows(Var table, std::span<const int> indices) {
  Tape& tape = TapeOf(table, "GatherRows");
  const Tensor& x = table.value();
  if (indices.empty()) throw ShapeError("GatherRows: empty index list");
  const std::size_t rows = x.rows(), n = x.cols();
  for (int idx : indices) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= rows) {
      throw ShapeError(fmt::format(
          "GatherRows: index {} out of range for table with {} rows", idx, rows));
    }
  }
  Tensor y(MatShape(indices.size(), n));
  for (std::size_t r = 0; r < indices.size(); ++r)
    std::copy_n(x.data().data() + static_cast<std::size_t>(indices[r]) * n, n,
                y.mutable_data().data() + r * n);
  const int ia = table.id();
  return tape.Record(
      std::move(y), {table},
      [ia, n, idx = std::vector<int>(indices.begin(), indices.end())](
          const Tensor& g, Tape& t) {
        Tensor& ga = t.GradSlot(ia);
        for (std::size_t r = 0; r < idx.size(); ++r) {
          double* dst = ga.mutable_data().data() + static_cast<std::size_t>(idx[r]) * n;
          for (std::size_t j = 0; j < n; ++j) dst[j] += g[r * n + j];
        }
      });
}

Var Reshape(Var a, Shape shape) {
  Tape& tape = TapeOf(a, "Reshape");
  Tensor y = a.value().Reshaped(std::move(shape));
  const int ia = a.id();
  return tape.Record(std::move(y), {a}, [ia](const Tensor& g, Tape& t) {
    Tensor& ga = t.GradSlot(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
  });
}

Var Pick(Var a, std::span<const int> indices) {
  Tape& tape = TapeOf(a, "Pick");
  const Tensor& x = a.value();
  const std::size_t m = x.rows(), n = x.cols();
  if (indices.size() != m) {
    throw ShapeError(fmt::format("Pick: {} indices for {} rows of {}",
                                 indices.size(), m, ShapeString(x.shape())));
  }
  Tensor y(MatShape(m, 1));
  for (std::size_t r = 0; r < m; ++r) {
    if (indices[r] < 0 || static_cast<std::size_t>(indices[r]) >= n) {
      throw ShapeError(fmt::format("Pick: index {} out of range for {} columns",
                                   indices[r], n));
    }
    y[r] = x[r * n + static_cast<std::size_t>(indices[r])];
  }
  const int ia = a.id();
  return tape.Record(
      std::move(y), {a},
      [ia, n, idx = std::vector<int>(indices.begin(), indices.end())](
          const Tensor& g, Tape& t) {
        Tensor& ga = t.GradSlot(ia);
        for (std::size_t r = 0; r < idx.size(); ++r)
          ga[r * n + static_cast<std::size_t>(idx[r])] += g[r];
      });
}

Var Sum(Var a) {
  Tape& tape = TapeOf(a, "Sum");
  double s = 0.0;
  for (double v : a.value().data()) s += v;
  const int ia = a.id();
  return tape.Record(Tensor::Scalar(s), {a}, [ia](const Tensor& g, Tape& t) {
    Tensor& ga = t.GradSlot(ia);
    const double gv = g[0];
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += gv;
  });
}

Var RowSum(Var a) {
  Tape& tape = TapeOf(a, "RowSum");
  const Tensor& x = a.value();
  const std::size_t m = x.rows(), n = x.cols();
  Tensor y(MatShape(m, 1));
  for (std::size_t r = 0; r < m; ++r) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += x[r * n + j];
    y[r] = s;
  }
  const int ia = a.id();
  return tape.Record(std::move(y), {a}, [ia, m, n](const Tensor& g, Tape& t) {
    Tensor& ga = t.GradSlot(ia);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t j = 0; j < n; ++j) ga[r * n + j] += g[r];
  });
}

Var BlockDot(Var a, Var b, std::size_t block) {
  Tape& tape = CommonTape(a, b, "BlockDot");
  const Tensor& x = a.value();
  const Tensor& z = b.value();
  if (x.rows() != z.rows() || x.cols() != z.cols() || block == 0 ||
      x.rows() % block != 0) {
    ShapeMismatch("BlockDot", x, z);
  }
  const std::size_t m = x.rows(), n = x.cols(), nb = m / block;
  Tensor y(MatShape(m, block));
  for (std::size_t bi = 0; bi < nb; ++bi) {
    const double* xb = x.data().data() + bi * block * n;
    const double* zb = z.data().data() + bi * block * n;
    GemmNT(xb, zb, y.mutable_data().data() + bi * block * block, block, n,
           block);
  }
  const int ia = a.id(), ib = b.id();
  return tape.Record(
      std::move(y), {a, b}, [ia, ib, n, nb, block](const Tensor& g, Tape& t) {
        const Tensor& xv = t.value(ia);
        const Tensor& zv = t.value(ib);
        for (std::size_t bi = 0; bi < nb; ++bi) {
          const double* gb = g.data().data() + bi * block * block;
          if (t.requires_grad(ia)) {
            GemmNN(gb, zv.data().data() + bi * block * n,
                   t.GradSlot(ia).mutable_data().data() + bi * block * n, block,
                   block, n);
          }
          if (t.requires_grad(ib)) {
            GemmTN(gb, xv.data().data() + bi * block * n,
                   t.GradSlot(ib).mutable_data().data() + bi * block * n, block,
                   block, n);
          }
        }
      });
}

Var L2NormalizeRows(Var a) {
  Tape& tape = TapeOf(a, "L2NormalizeRows");
  constexpr double kMinNorm = 1e-12;
  const Tensor& x = a.value();
  const std::size_t m = x.rows(), n = x.cols();
  Tensor y(x.shape());
  std::vector<double> norms(m);
  for (std::size_t r = 0; r < m; ++r) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += x[r * n + j] * x[r * n + j];
    norms[r] = std::max(std::sqrt(s), kMinNorm);
    for (std::size_t j = 0; j < n; ++j) y[r * n + j] = x[r * n + j] / norms[r];
  }
  const int ia = a.id();
  Tensor yc = y;
  return tape.Record(
      std::move(y), {a},
      [ia, m, n, norms = std::move(norms), yc = std::move(yc)](const Tensor& g,
                                                               Tape& t) {
        Tensor& ga = t.GradSlot(ia);
        for (std::size_t r = 0; r < m; ++r) {
          double dot = 0.0;
          for (std::size_t j = 0; j < n; ++j) dot += g[r * n + j] * yc[r * n + j];
          for (std::size_t j = 0; j < n; ++j)
            ga[r * n + j] += (g[r * n + j] - yc[r * n + j] * dot) / norms[r];
        }
      });
}

}  // namespace addrl::diff
