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

#include "crnn/math.hpp"

#include <algorithm>

#include "crnn/error.hpp"

namespace crnn {

double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  double hi = std::max(a, b);
  double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double logsumexp(std::span<const double> values) {
  require(!values.empty(), "logsumexp of an empty list");
  double hi = kLogZero;
  for (double v : values) hi = std::max(hi, v);
  if (hi == kLogZero) return kLogZero;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - hi);
  return hi + std::log(sum);
}

void softmax_inplace(std::span<double> u) {
  require(!u.empty(), "softmax of an empty vector");
  double hi = u[0];
  for (double v : u) {
    require(std::isfinite(v), "softmax input must be finite");
    hi = std::max(hi, v);
  }
  double sum = 0.0;
  for (double& v : u) {
    v = std::exp(v - hi);
    sum += v;
  }
  for (double& v : u) v /= sum;
}

std::vector<double> softmax(std::span<const double> u) {
  std::vector<double> out(u.begin(), u.end());
  softmax_inplace(out);
  return out;
}

std::vector<double> affine(const Tensor& w, std::span<const double> x,
                           std::span<const double> b) {
  require(w.ndim() == 2, "affine expects a matrix");
  int m = w.dim(0);
  int n = w.dim(1);
  require(static_cast<size_t>(n) == x.size(), "affine: W/x dimension mismatch");
  require(static_cast<size_t>(m) == b.size(), "affine: W/b dimension mismatch");
  std::vector<double> y(b.begin(), b.end());
  matvec_add(w, x.data(), y.data());
  return y;
}

void matvec_add(const Tensor& w, const double* x, double* y) {
  int m = w.dim(0);
  int n = w.dim(1);
  const double* row = w.data();
  for (int i = 0; i < m; ++i, row += n) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += row[j] * x[j];
    y[i] += acc;
  }
}

void matvec_t_add(const Tensor& w, const double* dy, double* dx) {
  int m = w.dim(0);
  int n = w.dim(1);
  const double* row = w.data();
  for (int i = 0; i < m; ++i, row += n) {
    double d = dy[i];
    if (d == 0.0) continue;
    for (int j = 0; j < n; ++j) dx[j] += row[j] * d;
  }
}

void outer_add(Tensor& dw, const double* dy, const double* x) {
  int m = dw.dim(0);
  int n = dw.dim(1);
  double* row = dw.data();
  for (int i = 0; i < m; ++i, row += n) {
    double d = dy[i];
    if (d == 0.0) continue;
    for (int j = 0; j < n; ++j) row[j] += d * x[j];
  }
}

}  // namespace crnn
