// Copyright 2026 The crnn authors
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

#include "crnn/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "crnn/error.hpp"

namespace crnn {

namespace {
size_t checked_numel(const std::vector<int>& dims) {
  require(!dims.empty(), "tensor must have at least one dimension");
  size_t n = 1;
  for (int d : dims) {
    require(d > 0, "tensor dimensions must be positive");
    n *= static_cast<size_t>(d);
  }
  return n;
}
}  // namespace

Tensor::Tensor(std::vector<int> dims)
    : dims_(std::move(dims)), data_(checked_numel(dims_), 0.0) {}

Tensor::Tensor(std::vector<int> dims, std::vector<double> values)
    : dims_(std::move(dims)), data_(std::move(values)) {
  require(checked_numel(dims_) == data_.size(),
          "tensor data length does not match product of dims");
}

Tensor Tensor::full(std::vector<int> dims, double value) {
  Tensor t(std::move(dims));
  t.fill(value);
  return t;
}

void Tensor::fill(double value) {
  std::fill(data_.begin(), data_.end(), value);
}

bool Tensor::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string Tensor::shape_str() const {
  std::string s = "[";
  for (size_t i = 0; i < dims_.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(dims_[i]);
  }
  return s + "]";
}

}  // namespace crnn
