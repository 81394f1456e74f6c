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

#ifndef CRNN_DECODE_HPP
#define CRNN_DECODE_HPP

#include "crnn/ctc.hpp"
#include "crnn/tensor.hpp"

namespace crnn {

// Per-frame argmax over y [T x K]; ties resolve to the lowest class index.
Path argmax_path(const Tensor& y);

// Best-path decoding: collapse the most probable path. Approximates the
// most probable labeling. blank < 0 selects the last class.
Labeling best_path_decode(const Tensor& y, int blank = -1);

}  // namespace crnn

#endif  // CRNN_DECODE_HPP
