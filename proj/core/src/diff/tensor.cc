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

#include "addrl/diff/tensor.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "addrl/error.h"

namespace addrl::diff {
namespace {

void ValidateShape(const Shape& shape) {
  if (shape.empty() || shape.size() > 2) {
    throw ShapeError(fmt::format("tensor rank must be 1 or 2, got shape {}",
                                 ShapeString(shape)));
  }
  for (std::size_t d : shape) {
    if (d == 0) {
      throw ShapeError(
          fmt::format("zero-sized dimension in shape {}", ShapeString(shape)));
    }
  }
}

}  // namespace

std::string ShapeString(const Shape& shape) {
  return fmt::format("({})", fmt::join(shape, ","));
}

std::size_t NumElements(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)) {
  ValidateShape(shape_);
  data_.assign(NumElements(shape_), 0.0);
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  ValidateShape(shape_);
  if (NumElements(shape_) != data_.size()) {
    throw ShapeError(fmt::format("shape {} needs {} elements, got {}",
                                 ShapeString(shape_), NumElements(shape_),
                                 data_.size()));
  }
}

Tensor Tensor::Scalar(double value) { return Tensor({1}, {value}); }

Tensor Tensor::Full(Shape shape, double value) {
  Tensor t(std::move(shape));
  std::fill(t.data_.begin(), t.data_.end(), value);
  return t;
}

Tensor Tensor::Matrix(std::size_t rows, std::size_t cols,
                      std::vector<double> data) {
  return Tensor({rows, cols}, std::move(data));
}

Tensor Tensor::Vector(std::vector<double> data) {
  const std::size_t n = data.size();
  return Tensor({n}, std::move(data));
}

double Tensor::item() const {
  if (data_.size() != 1) {
    throw ShapeError(fmt::format("item() needs a one-element tensor, got {}",
                                 ShapeString(shape_)));
  }
  return data_[0];
}

Tensor Tensor::Reshaped(Shape shape) const {
  if (NumElements(shape) != data_.size()) {
    throw ShapeError(fmt::format("cannot reshape {} to {}",
                                 ShapeString(shape_), ShapeString(shape)));
  }
  return Tensor(std::move(shape), data_);
}

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

}  // namespace addrl::diff
