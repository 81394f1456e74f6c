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

#include "crnn/decode.hpp"

#include "crnn/error.hpp"

namespace crnn {

Path argmax_path(const Tensor& y) {
  require(y.ndim() == 2, "expected y as [T x K]");
  Path path(static_cast<size_t>(y.dim(0)));
  for (int t = 0; t < y.dim(0); ++t) {
    const double* row = y.row(t);
    int best = 0;
    for (int c = 1; c < y.dim(1); ++c) {
      if (row[c] > row[best]) best = c;
    }
    path[static_cast<size_t>(t)] = best;
  }
  return path;
}

Labeling best_path_decode(const Tensor& y, int blank) {
  if (blank < 0) blank = y.dim(1) - 1;
  return collapse(argmax_path(y), blank);
}

}  // namespace crnn
