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

#ifndef CRNN_LSTM_HPP
#define CRNN_LSTM_HPP

#include <string>
#include <vector>

#include "crnn/rng.hpp"
#include "crnn/tensor.hpp"

namespace crnn {

// One direction of one recurrent layer. Peepholes are diagonal and stored
// as vectors. Gate equations:
//   i = sigma(W_xi x + W_hi h' + w_ci . c' + b_i)
//   f = sigma(W_xf x + W_hf h' + w_cf . c' + b_f)
//   c = f . c' + i . tanh(W_xc x + W_hc h' + b_c)
//   o = sigma(W_xo x + W_ho h' + w_co . c + b_o)
//   h = o . tanh(c)
struct LstmLayerParams {
  Tensor w_xi, w_xf, w_xc, w_xo;  // [H x D]
  Tensor w_hi, w_hf, w_hc, w_ho;  // [H x H]
  Tensor w_ci, w_cf, w_co;        // [H]
  Tensor b_i, b_f, b_c, b_o;      // [H]

  int hidden() const { return w_hi.dim(0); }
  int input() const { return w_xi.dim(1); }

  // Weights uniform(-0.1, 0.1), biases zero except forget gate at +1.
  static LstmLayerParams init(int input, int hidden, Rng& rng);
  static LstmLayerParams zeros(int input, int hidden);

  std::vector<std::pair<std::string, Tensor*>> tensors();
  std::vector<std::pair<std::string, const Tensor*>> tensors() const;
};

struct BiLayerParams {
  LstmLayerParams fwd, bwd;

  static BiLayerParams init(int input, int hidden, Rng& rng);
  static BiLayerParams zeros(int input, int hidden);
  std::vector<std::pair<std::string, Tensor*>> tensors();
  std::vector<std::pair<std::string, const Tensor*>> tensors() const;
};

// Output affine combining the last layer's directional states:
// u_t = W_fwd fh_t + W_bwd bh_t + b.
struct OutputParams {
  Tensor w_fwd, w_bwd;  // [K x H_last]
  Tensor b;             // [K]
};

struct StackParams {
  std::vector<BiLayerParams> layers;
  OutputParams output;

  int input() const { return layers.front().fwd.input(); }
  int classes() const { return output.b.dim(0); }

  // hidden[i] is the per-direction width of layer i; layer l > 0 consumes
  // the 2*hidden[l-1] concatenation of layer l-1.
  static StackParams init(int input, const std::vector<int>& hidden,
                          int classes, Rng& rng);
  static StackParams zeros_like(const StackParams& other);

  std::vector<std::pair<std::string, Tensor*>> tensors();
  std::vector<std::pair<std::string, const Tensor*>> tensors() const;
};

struct CellState {
  std::vector<double> h, c;
  explicit CellState(int hidden = 0)
      : h(static_cast<size_t>(hidden), 0.0), c(static_cast<size_t>(hidden), 0.0) {}
};

// Gate activations retained for the backward pass.
struct LstmStepCache {
  std::vector<double> i, f, o, g, c, tanh_c;
  std::vector<double> h_prev, c_prev;
};

CellState lstm_step(std::span<const double> x, const CellState& prev,
                    const LstmLayerParams& p, LstmStepCache* cache = nullptr);

// One direction over a [T x D] sequence from zero initial state. reverse
// consumes t = T-1..0; output rows stay in original time order either way.
struct LstmSeqCache {
  bool reverse = false;
  Tensor x;  // the input sequence, original order
  std::vector<LstmStepCache> steps;  // in consumption order
};

Tensor lstm_dir_forward(const Tensor& seq, const LstmLayerParams& p,
                        bool reverse, LstmSeqCache* cache = nullptr);

// BPTT for one direction. dh_seq is [T x H] in original time order.
// Returns d seq [T x D]; accumulates parameter gradients into grads.
Tensor lstm_dir_backward(const Tensor& dh_seq, const LstmSeqCache& cache,
                         const LstmLayerParams& p, LstmLayerParams& grads);

struct BiLayerCache {
  LstmSeqCache fwd, bwd;
};

// [T x 2H]: concat(fh_t, bh_t) per timestep.
Tensor birnn_layer_forward(const Tensor& seq, const BiLayerParams& p,
                           BiLayerCache* cache = nullptr);

Tensor birnn_layer_backward(const Tensor& dout, const BiLayerCache& cache,
                            const BiLayerParams& p, BiLayerParams& grads);

struct StackCache {
  std::vector<BiLayerCache> layers;
  std::vector<Tensor> layer_outputs;  // concat states per layer, [T x 2H_l]
};

struct StackForward {
  Tensor u;  // pre-softmax activations [T x K]
  Tensor y;  // per-frame probabilities [T x K]
  StackCache cache;
};

StackForward stack_forward(const Tensor& features, const StackParams& p);

// Backpropagates du [T x K] through the output affine and every layer of
// both directions; returns d features and accumulates into grads.
Tensor stack_backward(const Tensor& du, const StackCache& cache,
                      const StackParams& p, StackParams& grads);

}  // namespace crnn

#endif  // CRNN_LSTM_HPP
