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

#ifndef CRNN_DATA_HPP
#define CRNN_DATA_HPP

#include <string>
#include <vector>

#include "crnn/cnn.hpp"
#include "crnn/ctc.hpp"
#include "crnn/rng.hpp"
#include "crnn/tensor.hpp"

namespace crnn {

// Column range [start_col, end_col) occupied by one rendered glyph.
struct GlyphExtent {
  int start_col = 0;
  int end_col = 0;
  int cls = 0;
};

// One rendered digit string: grayscale image [32 x W], target labeling,
// and the exact glyph positions the renderer placed.
struct RawSample {
  Tensor image;
  Labeling target;
  std::vector<GlyphExtent> extents;
};

struct RenderSpec {
  int num_digits = 3;   // 1..5
  double jitter = 1.0;  // spacing/vertical randomization strength
  double noise = 0.05;  // additive uniform noise amplitude
};

// Renders digits from the built-in 5x7 bitmap font scaled to 16x24,
// left to right with randomized spacing and vertical jitter. Pixels are
// quantized to 1/255 steps so image bytes round-trip exactly.
RawSample render_sample(const RenderSpec& spec, Rng& rng);

// Nearest-neighbor rescale to height 32 keeping the aspect ratio.
Tensor normalize_height(const Tensor& image, int target_height = kFrameHeight);

// Sliding 32x20 windows at column offsets 0, stride, 2*stride, ...;
// T = ceil(max(W-20, 0)/stride) + 1, right edge zero-padded.
std::vector<Frame> frame_sequence(const Tensor& image,
                                  int window_w = kFrameWidth, int stride = 8);

// Per-dimension mean/std over the training features.
struct Standardizer {
  Tensor mean;  // [D]
  Tensor std;   // [D], floored at 1e-8
};

Standardizer fit_standardizer(const Tensor& features);  // [N x D], N >= 2
Tensor standardize(const Tensor& features, const Standardizer& s);
Tensor unstandardize(const Tensor& features, const Standardizer& s);

struct Dataset {
  std::vector<RawSample> samples;
};

struct GenConfig {
  int count = 100;
  int digits_min = 1;
  int digits_max = 5;
  double jitter = 1.0;
  double noise = 0.05;
  uint64_t seed = 1;
};

// Sample i is drawn from rng.child(i), so output is independent of
// generation order.
Dataset generate_dataset(const GenConfig& config);

// Layout: images/NNNNNN.pgm (binary P5, maxval 255), labels.tsv with
// "NNNNNN<TAB>digits" lines, extents.tsv with "NNNNNN<TAB>s,e,c;..." lines.
void save_dataset(const std::string& dir, const Dataset& ds);
Dataset load_dataset(const std::string& dir);

// 32x20 crops centered on each glyph extent, labeled with the glyph class.
std::vector<GlyphCrop> glyph_crops(const Dataset& ds);

void write_pgm(const std::string& path, const Tensor& image);
Tensor read_pgm(const std::string& path);

}  // namespace crnn

#endif  // CRNN_DATA_HPP
