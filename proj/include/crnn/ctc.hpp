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

#ifndef CRNN_CTC_HPP
#define CRNN_CTC_HPP

#include <vector>

#include "crnn/tensor.hpp"

namespace crnn {

// A labeling is a target symbol sequence over the alphabet (no blanks).
// A path assigns one extended-alphabet symbol (possibly blank) per frame.
using Labeling = std::vector<int>;
using Path = std::vector<int>;

// Merge maximal runs of identical symbols, then delete blanks.
// collapse(-,3,3,-,-,3,2,2) = (3,3,2).
Labeling collapse(const Path& path, int blank);

// log prod_t y[t][path[t]] for a [T x K] matrix of frame probabilities.
double path_log_prob(const Tensor& y, const Path& path);

// log p(z|y) by enumerating all K^T paths and summing those that collapse
// to z. Exponential; usable only on desk-size instances (K^T <= 1e7). This
// is the reference route the lattice implementation below is checked
// against, so it must stay a plain enumeration.
double labeling_log_prob_bruteforce(const Tensor& y, const Labeling& z,
                                    int blank);

// True when an alignment of z into T frames exists, i.e.
// T >= |z| + (number of adjacent equal pairs in z).
bool ctc_feasible(int frames, const Labeling& z);

struct CtcResult {
  // Log-domain lattices over the blank-augmented target, [T x (2U+1)].
  Tensor alpha;
  Tensor beta;
  double log_prob = 0.0;  // log p(z|y)
  double loss = 0.0;      // -log p(z|y); +inf when infeasible
  bool feasible = true;
  // d loss / d u for the pre-softmax activations u, [T x K];
  // zero when infeasible.
  Tensor grad_u;
};

// Forward-backward over the augmented sequence (blank, z1, blank, ..., blank).
// alpha[t][s] covers emissions 0..t, beta[t][s] covers emissions t+1..T-1,
// so logsumexp_s(alpha[t][s] + beta[t][s]) equals log_prob at every t.
// blank < 0 selects the last class, K-1.
CtcResult ctc_forward_backward(const Tensor& y, const Labeling& z,
                               int blank = -1);

}  // namespace crnn

#endif  // CRNN_CTC_HPP
