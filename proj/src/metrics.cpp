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

#include "crnn/metrics.hpp"

#include <algorithm>
#include <cstdio>

#include "crnn/error.hpp"

namespace crnn {

int edit_distance(const Labeling& p, const Labeling& q) {
  const size_t n = p.size();
  const size_t m = q.size();
  std::vector<int> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= m; ++j) {
      int sub = prev[j - 1] + (p[i - 1] == q[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double label_error_rate(const LabelingPairs& pairs) {
  require(!pairs.empty(), "label_error_rate of an empty pair list");
  long long total_ed = 0;
  long long total_ref = 0;
  for (const auto& [hyp, ref] : pairs) {
    total_ed += edit_distance(hyp, ref);
    total_ref += static_cast<long long>(ref.size());
  }
  require(total_ref > 0,
          "label_error_rate undefined: total reference length is zero");
  return static_cast<double>(total_ed) / static_cast<double>(total_ref);
}

double sequence_accuracy(const LabelingPairs& pairs) {
  require(!pairs.empty(), "sequence_accuracy of an empty pair list");
  size_t correct = 0;
  for (const auto& [hyp, ref] : pairs) {
    if (hyp == ref) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

std::string format_report(size_t samples, double seq_acc, double label_err) {
  char buf[128];
  std::string out;
  std::snprintf(buf, sizeof(buf), "samples\t%zu\n", samples);
  out += buf;
  std::snprintf(buf, sizeof(buf), "seq_acc\t%.6f\n", seq_acc);
  out += buf;
  std::snprintf(buf, sizeof(buf), "label_err\t%.6f\n", label_err);
  out += buf;
  return out;
}

}  // namespace crnn
