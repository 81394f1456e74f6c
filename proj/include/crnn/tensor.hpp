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

#ifndef CRNN_TENSOR_HPP
#define CRNN_TENSOR_HPP

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace crnn {

// Dense row-major array of doubles. The flat layout makes serialization
// and parameter traversal trivial; all shape checks are the caller's
// responsibility except construction, which validates dims.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> dims);
  Tensor(std::vector<int> dims, std::vector<double> values);

  static Tensor zeros(std::vector<int> dims) { return Tensor(std::move(dims)); }
  static Tensor full(std::vector<int> dims, double value);

  int ndim() const { return static_cast<int>(dims_.size()); }
  int dim(int i) const { return dims_[static_cast<size_t>(i)]; }
  const std::vector<int>& dims() const { return dims_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  double& operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }

  double& operator()(int i) { return data_[static_cast<size_t>(i)]; }
  double operator()(int i) const { return data_[static_cast<size_t>(i)]; }
  double& operator()(int i, int j) {
    return data_[static_cast<size_t>(i) * dims_[1] + j];
  }
  double operator()(int i, int j) const {
    return data_[static_cast<size_t>(i) * dims_[1] + j];
  }
  double& operator()(int i, int j, int k) {
    return data_[(static_cast<size_t>(i) * dims_[1] + j) * dims_[2] + k];
  }
  double operator()(int i, int j, int k) const {
    return data_[(static_cast<size_t>(i) * dims_[1] + j) * dims_[2] + k];
  }
  double& operator()(int i, int j, int k, int l) {
    return data_[((static_cast<size_t>(i) * dims_[1] + j) * dims_[2] + k) *
                     dims_[3] +
                 l];
  }
  double operator()(int i, int j, int k, int l) const {
    return data_[((static_cast<size_t>(i) * dims_[1] + j) * dims_[2] + k) *
                     dims_[3] +
                 l];
  }

  // Pointer to row i of a 2-d tensor.
  double* row(int i) { return data_.data() + static_cast<size_t>(i) * dims_[1]; }
  const double* row(int i) const {
    return data_.data() + static_cast<size_t>(i) * dims_[1];
  }

  bool same_shape(const Tensor& other) const { return dims_ == other.dims_; }
  void fill(double value);
  bool all_finite() const;

  std::string shape_str() const;

 private:
  std::vector<int> dims_;
  std::vector<double> data_;
};

}  // namespace crnn

#endif  // CRNN_TENSOR_HPP
