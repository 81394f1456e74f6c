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

#include "crnn/ctc.hpp"

#include <cmath>

#include "crnn/error.hpp"
#include "crnn/math.hpp"

namespace crnn {

Labeling collapse(const Path& path, int blank) {
  Labeling out;
  int prev = std::numeric_limits<int>::min();
  for (int s : path) {
    if (s == prev) continue;  // merge repeated symbols first
    prev = s;
    if (s != blank) out.push_back(s);
  }
  return out;
}

double path_log_prob(const Tensor& y, const Path& path) {
  require(y.ndim() == 2, "path_log_prob expects y as [T x K]");
  require(static_cast<size_t>(y.dim(0)) == path.size(),
          "path length must equal the frame count");
  int k = y.dim(1);
  double lp = 0.0;
  for (int t = 0; t < y.dim(0); ++t) {
    int s = path[static_cast<size_t>(t)];
    require(s >= 0 && s < k, "path symbol out of range");
    lp += std::log(y(t, s));
  }
  return lp;
}

double labeling_log_prob_bruteforce(const Tensor& y, const Labeling& z,
                                    int blank) {
  require(y.ndim() == 2, "expected y as [T x K]");
  int tlen = y.dim(0);
  int k = y.dim(1);
  double paths = std::pow(static_cast<double>(k), tlen);
  require(paths <= 1e7, "brute-force enumeration limited to K^T <= 1e7");

  std::vector<double> matching;
  Path path(static_cast<size_t>(tlen), 0);
  // Odometer over all K^T paths.
  while (true) {
    if (collapse(path, blank) == z) matching.push_back(path_log_prob(y, path));
    int pos = tlen - 1;
    while (pos >= 0) {
      if (++path[static_cast<size_t>(pos)] < k) break;
      path[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  if (matching.empty()) return kLogZero;
  return logsumexp(matching);
}

bool ctc_feasible(int frames, const Labeling& z) {
  int repeats = 0;
  for (size_t i = 1; i < z.size(); ++i) {
    if (z[i] == z[i - 1]) ++repeats;
  }
  return frames >= static_cast<int>(z.size()) + repeats;
}

CtcResult ctc_forward_backward(const Tensor& y, const Labeling& z, int blank) {
  require(y.ndim() == 2, "expected y as [T x K]");
  const int tlen = y.dim(0);
  const int k = y.dim(1);
  if (blank < 0) blank = k - 1;
  require(blank >= 0 && blank < k, "blank index out of range");
  for (int v : z) require(v >= 0 && v < k && v != blank, "target symbol out of range");

  const int u = static_cast<int>(z.size());
  const int s_len = 2 * u + 1;

  CtcResult res;
  if (!ctc_feasible(tlen, z)) {
    res.feasible = false;
    res.loss = std::numeric_limits<double>::infinity();
    res.log_prob = kLogZero;
    res.grad_u = Tensor({tlen, k});
    return res;
  }

  // Augmented target: blank at even positions, z[(s-1)/2] at odd ones.
  std::vector<int> aug(static_cast<size_t>(s_len), blank);
  for (int s = 1; s < s_len; s += 2) aug[static_cast<size_t>(s)] = z[static_cast<size_t>((s - 1) / 2)];

  Tensor logy({tlen, k});
  for (size_t i = 0; i < y.size(); ++i) logy[i] = std::log(y[i]);

  Tensor alpha = Tensor::full({tlen, s_len}, kLogZero);
  Tensor beta = Tensor::full({tlen, s_len}, kLogZero);

  // A path may start in the leading blank or the first label.
  alpha(0, 0) = logy(0, blank);
  if (u > 0) alpha(0, 1) = logy(0, aug[1]);
  for (int t = 1; t < tlen; ++t) {
    for (int s = 0; s < s_len; ++s) {
      double a = alpha(t - 1, s);                       // stay
      if (s >= 1) a = log_add(a, alpha(t - 1, s - 1));  // advance
      // Skip the blank between two distinct labels.
      if (s >= 2 && aug[static_cast<size_t>(s)] != blank &&
          aug[static_cast<size_t>(s)] != aug[static_cast<size_t>(s - 2)]) {
        a = log_add(a, alpha(t - 1, s - 2));
      }
      if (a != kLogZero) alpha(t, s) = a + logy(t, aug[static_cast<size_t>(s)]);
    }
  }

  // beta excludes the emission at t, so it starts at exactly 0 for the two
  // admissible final states.
  beta(tlen - 1, s_len - 1) = 0.0;
  if (u > 0) beta(tlen - 1, s_len - 2) = 0.0;
  for (int t = tlen - 2; t >= 0; --t) {
    for (int s = 0; s < s_len; ++s) {
      double b = kLogZero;
      for (int s2 = s; s2 <= s + 2 && s2 < s_len; ++s2) {
        if (s2 == s + 2 && (aug[static_cast<size_t>(s2)] == blank ||
                            aug[static_cast<size_t>(s2)] == aug[static_cast<size_t>(s)])) {
          continue;
        }
        double step = beta(t + 1, s2);
        if (step == kLogZero) continue;
        b = log_add(b, step + logy(t + 1, aug[static_cast<size_t>(s2)]));
      }
      beta(t, s) = b;
    }
  }

  double log_p = alpha(tlen - 1, s_len - 1);
  if (u > 0) log_p = log_add(log_p, alpha(tlen - 1, s_len - 2));
  res.alpha = std::move(alpha);
  res.beta = std::move(beta);
  res.log_prob = log_p;
  res.loss = -log_p;

  // d(-log p)/du_k^t = y_k^t - sum_{s: aug[s]=k} exp(alpha+beta-log p),
  // with the softmax fold-in already applied.
  res.grad_u = Tensor({tlen, k});
  for (int t = 0; t < tlen; ++t) {
    std::vector<double> occ(static_cast<size_t>(k), kLogZero);
    for (int s = 0; s < s_len; ++s) {
      double ab = res.alpha(t, s) + res.beta(t, s);
      if (ab == kLogZero) continue;
      int sym = aug[static_cast<size_t>(s)];
      occ[static_cast<size_t>(sym)] = log_add(occ[static_cast<size_t>(sym)], ab);
    }
    for (int c = 0; c < k; ++c) {
      double gamma = occ[static_cast<size_t>(c)] == kLogZero
                         ? 0.0
                         : std::exp(occ[static_cast<size_t>(c)] - log_p);
      res.grad_u(t, c) = y(t, c) - gamma;
    }
  }
  return res;
}

}  // namespace crnn
