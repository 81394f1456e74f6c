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

#ifndef CRNN_MATH_HPP
#define CRNN_MATH_HPP

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "crnn/tensor.hpp"

namespace crnn {

// Additive identity of the log domain.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(exp(a) + exp(b)) without leaving the log domain.
double log_add(double a, double b);

// log(sum exp(v_i)) via max-shift; -inf iff every input is -inf.
// Empty input is a usage error.
double logsumexp(std::span<const double> values);

// Probability vector exp(u_k) / sum_j exp(u_j). Inputs must be finite.
std::vector<double> softmax(std::span<const double> u);
void softmax_inplace(std::span<double> u);

// y = W x + b for W [m x n].
std::vector<double> affine(const Tensor& w, std::span<const double> x,
                           std::span<const double> b);

// In-place building blocks used by the layer code. No aliasing allowed.
void matvec_add(const Tensor& w, const double* x, double* y);    // y += W x
void matvec_t_add(const Tensor& w, const double* dy, double* dx);  // dx += W^T dy
void outer_add(Tensor& dw, const double* dy, const double* x);   // dW += dy x^T

}  // namespace crnn

#endif  // CRNN_MATH_HPP
