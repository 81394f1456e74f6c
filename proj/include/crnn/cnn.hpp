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

#ifndef CRNN_CNN_HPP
#define CRNN_CNN_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "crnn/rng.hpp"
#include "crnn/tensor.hpp"

namespace crnn {

inline constexpr int kFrameHeight = 32;
inline constexpr int kFrameWidth = 20;
inline constexpr int kFeatureDim = 128;
inline constexpr int kGlyphClasses = 10;

// One 32x20 grayscale slice of a height-normalized image, values in [0,1].
struct Frame {
  Tensor pixels;  // [1 x 32 x 20]
};

Frame make_frame(Tensor pixels);

// conv(3x3, stride 1, zero same-padding) -> relu -> maxpool(2x2, stride 2).
struct ConvStage {
  Tensor kernels;  // [out x in x 3 x 3]
  Tensor bias;     // [out]
};

struct FcLayer {
  Tensor w;  // [out x in]
  Tensor b;  // [out]
};

// Channel progression 1 -> 32 -> 32 -> 64, then fc 512 -> 128 -> 10.
// 32x20 pools to 16x10 to 8x5 to 4x2 (odd dims floor).
struct CnnParams {
  std::array<ConvStage, 3> stages;
  FcLayer fc1, fc2;

  static CnnParams init(Rng& rng);
  static CnnParams zeros();
  std::vector<std::pair<std::string, Tensor*>> tensors();
  std::vector<std::pair<std::string, const Tensor*>> tensors() const;
};

struct ConvPoolCache {
  Tensor input;
  Tensor pre_relu;             // conv output before the nonlinearity
  std::vector<int> pool_src;   // winning input index per pooled element
};

// maxpool(relu(conv(input))). Input is [c x h x w]; pooled dims floor on
// odd sizes (the last row/column is dropped). A pooled dimension of zero
// is a usage error.
Tensor conv_pool_forward(const Tensor& input, const ConvStage& stage,
                         ConvPoolCache* cache = nullptr);

// Backpropagates dout through pool, relu and conv; accumulates parameter
// gradients and returns d input.
Tensor conv_pool_backward(const Tensor& dout, const ConvPoolCache& cache,
                          const ConvStage& stage, ConvStage& grads);

// relu(fc1(flattened conv stack)) — the 128-d frame feature.
std::vector<double> cnn_extract(const Frame& frame, const CnnParams& p);

// fc2 over the feature vector; per-glyph class scores.
std::vector<double> cnn_logits(const Frame& frame, const CnnParams& p);

struct CrossEntropy {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d logits
};

// loss = -log softmax(logits)[label]; grad = softmax(logits) - onehot.
CrossEntropy cross_entropy(std::span<const double> logits, int label);

// Full backward through fc2/fc1/conv stack for one labeled frame.
struct CnnSampleGrad {
  double loss = 0.0;
  CnnParams grads;
};
CnnSampleGrad cnn_gradients(const Frame& frame, int label, const CnnParams& p);

struct GlyphCrop {
  Frame frame;
  int label = 0;
};

struct CnnTrainConfig {
  double learning_rate = 1e-3;
  double momentum = 0.9;
  int epochs = 30;
  int batch = 32;
  uint64_t seed = 1;
  double val_fraction = 0.1;  // 0 validates on the training set
  std::function<void(int, double, double)> on_epoch;  // (epoch, loss, val acc)
};

struct CnnTrainResult {
  CnnParams params;  // snapshot at best validation accuracy
  double best_val_acc = 0.0;
  int best_epoch = 0;
  std::vector<double> epoch_loss;
};

CnnTrainResult train_cnn(const std::vector<GlyphCrop>& crops,
                         const CnnTrainConfig& config);

}  // namespace crnn

#endif  // CRNN_CNN_HPP
