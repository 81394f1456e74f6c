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

#include "crnn/cnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crnn/error.hpp"
#include "crnn/math.hpp"

namespace crnn {

namespace {

constexpr int kKernel = 3;  // 3x3, stride 1, zero same-padding throughout

void fill_glorot(Tensor& t, int fan_in, int fan_out, Rng& rng) {
  double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-bound, bound);
}

Tensor conv2d_same(const Tensor& input, const Tensor& kernels,
                   const Tensor& bias) {
  const int ic = input.dim(0), h = input.dim(1), w = input.dim(2);
  const int oc = kernels.dim(0);
  require(kernels.dim(1) == ic, "conv: channel mismatch");
  require(kernels.dim(2) == kKernel && kernels.dim(3) == kKernel,
          "conv: kernels must be 3x3");

  Tensor out({oc, h, w});
  for (int o = 0; o < oc; ++o) {
    double b = bias(o);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) out(o, y, x) = b;
    }
    for (int c = 0; c < ic; ++c) {
      for (int ky = 0; ky < kKernel; ++ky) {
        int y0 = std::max(0, 1 - ky);
        int y1 = std::min(h, h + 1 - ky);
        for (int kx = 0; kx < kKernel; ++kx) {
          double kv = kernels(o, c, ky, kx);
          if (kv == 0.0) continue;
          int x0 = std::max(0, 1 - kx);
          int x1 = std::min(w, w + 1 - kx);
          for (int y = y0; y < y1; ++y) {
            const double* in_row = &input(c, y + ky - 1, 0);
            double* out_row = &out(o, y, 0);
            for (int x = x0; x < x1; ++x) {
              out_row[x] += kv * in_row[x + kx - 1];
            }
          }
        }
      }
    }
  }
  return out;
}

void conv2d_same_backward(const Tensor& dout, const Tensor& input,
                          const Tensor& kernels, Tensor& dkernels,
                          Tensor& dbias, Tensor& dinput) {
  const int ic = input.dim(0), h = input.dim(1), w = input.dim(2);
  const int oc = kernels.dim(0);

  for (int o = 0; o < oc; ++o) {
    double db = 0.0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) db += dout(o, y, x);
    }
    dbias(o) += db;
    for (int c = 0; c < ic; ++c) {
      for (int ky = 0; ky < kKernel; ++ky) {
        int y0 = std::max(0, 1 - ky);
        int y1 = std::min(h, h + 1 - ky);
        for (int kx = 0; kx < kKernel; ++kx) {
          int x0 = std::max(0, 1 - kx);
          int x1 = std::min(w, w + 1 - kx);
          double dk = 0.0;
          double kv = kernels(o, c, ky, kx);
          for (int y = y0; y < y1; ++y) {
            const double* dout_row = &dout(o, y, 0);
            const double* in_row = &input(c, y + ky - 1, 0);
            double* din_row = &dinput(c, y + ky - 1, 0);
            for (int x = x0; x < x1; ++x) {
              dk += dout_row[x] * in_row[x + kx - 1];
              din_row[x + kx - 1] += dout_row[x] * kv;
            }
          }
          dkernels(o, c, ky, kx) += dk;
        }
      }
    }
  }
}

}  // namespace

Frame make_frame(Tensor pixels) {
  require(pixels.ndim() == 3 && pixels.dim(0) == 1 &&
              pixels.dim(1) == kFrameHeight && pixels.dim(2) == kFrameWidth,
          "frame must be [1 x 32 x 20]");
  return Frame{std::move(pixels)};
}

CnnParams CnnParams::zeros() {
  CnnParams p;
  const int chans[4] = {1, 32, 32, 64};
  for (int s = 0; s < 3; ++s) {
    p.stages[s].kernels = Tensor({chans[s + 1], chans[s], kKernel, kKernel});
    p.stages[s].bias = Tensor({chans[s + 1]});
  }
  // 64 channels at 4x2 after three pools.
  p.fc1.w = Tensor({kFeatureDim, 64 * 4 * 2});
  p.fc1.b = Tensor({kFeatureDim});
  p.fc2.w = Tensor({kGlyphClasses, kFeatureDim});
  p.fc2.b = Tensor({kGlyphClasses});
  return p;
}

CnnParams CnnParams::init(Rng& rng) {
  CnnParams p = zeros();
  for (auto& stage : p.stages) {
    int fan_in = stage.kernels.dim(1) * kKernel * kKernel;
    int fan_out = stage.kernels.dim(0) * kKernel * kKernel;
    fill_glorot(stage.kernels, fan_in, fan_out, rng);
  }
  fill_glorot(p.fc1.w, p.fc1.w.dim(1), p.fc1.w.dim(0), rng);
  fill_glorot(p.fc2.w, p.fc2.w.dim(1), p.fc2.w.dim(0), rng);
  return p;
}

std::vector<std::pair<std::string, Tensor*>> CnnParams::tensors() {
  std::vector<std::pair<std::string, Tensor*>> out;
  for (size_t s = 0; s < stages.size(); ++s) {
    std::string prefix = "stages." + std::to_string(s) + ".";
    out.emplace_back(prefix + "kernels", &stages[s].kernels);
    out.emplace_back(prefix + "bias", &stages[s].bias);
  }
  out.emplace_back("fc1.w", &fc1.w);
  out.emplace_back("fc1.b", &fc1.b);
  out.emplace_back("fc2.w", &fc2.w);
  out.emplace_back("fc2.b", &fc2.b);
  return out;
}

std::vector<std::pair<std::string, const Tensor*>> CnnParams::tensors() const {
  std::vector<std::pair<std::string, const Tensor*>> out;
  for (auto& [name, t] : const_cast<CnnParams*>(this)->tensors()) {
    out.emplace_back(name, t);
  }
  return out;
}

Tensor conv_pool_forward(const Tensor& input, const ConvStage& stage,
                         ConvPoolCache* cache) {
  require(input.ndim() == 3, "conv_pool expects [c x h x w]");
  Tensor conv = conv2d_same(input, stage.kernels, stage.bias);

  const int oc = conv.dim(0), h = conv.dim(1), w = conv.dim(2);
  const int ph = h / 2, pw = w / 2;  // odd dims floor; last row/col dropped
  require(ph > 0 && pw > 0, "conv_pool: input too small to pool");

  Tensor out({oc, ph, pw});
  std::vector<int> src(static_cast<size_t>(oc) * ph * pw);
  size_t oi = 0;
  for (int c = 0; c < oc; ++c) {
    for (int y = 0; y < ph; ++y) {
      for (int x = 0; x < pw; ++x, ++oi) {
        int best_idx = -1;
        double best = 0.0;
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            double v = conv(c, 2 * y + dy, 2 * x + dx);
            v = v > 0.0 ? v : 0.0;  // relu before pooling
            if (best_idx < 0 || v > best) {
              best = v;
              best_idx = ((c * h) + 2 * y + dy) * w + 2 * x + dx;
            }
          }
        }
        out[oi] = best;
        src[oi] = best_idx;
      }
    }
  }
  if (cache) {
    cache->input = input;
    cache->pre_relu = std::move(conv);
    cache->pool_src = std::move(src);
  }
  return out;
}

Tensor conv_pool_backward(const Tensor& dout, const ConvPoolCache& cache,
                          const ConvStage& stage, ConvStage& grads) {
  const Tensor& conv = cache.pre_relu;
  Tensor dconv(conv.dims());
  for (size_t i = 0; i < dout.size(); ++i) {
    int idx = cache.pool_src[i];
    // relu gradient: pass only where the winning pre-activation is positive
    if (conv[static_cast<size_t>(idx)] > 0.0) {
      dconv[static_cast<size_t>(idx)] += dout[i];
    }
  }
  Tensor dinput(cache.input.dims());
  conv2d_same_backward(dconv, cache.input, stage.kernels, grads.kernels,
                       grads.bias, dinput);
  return dinput;
}

namespace {

struct CnnForwardCache {
  std::array<ConvPoolCache, 3> stages;
  std::vector<double> flat;      // flattened conv stack output
  std::vector<double> fc1_pre;   // before relu
  std::vector<double> feature;   // after relu
};

std::vector<double> cnn_forward(const Frame& frame, const CnnParams& p,
                                CnnForwardCache* cache) {
  Tensor cur = frame.pixels;
  for (int s = 0; s < 3; ++s) {
    cur = conv_pool_forward(cur, p.stages[static_cast<size_t>(s)],
                            cache ? &cache->stages[static_cast<size_t>(s)] : nullptr);
  }
  std::vector<double> flat(cur.values());
  std::vector<double> pre =
      affine(p.fc1.w, flat, std::span<const double>(p.fc1.b.data(), p.fc1.b.size()));
  std::vector<double> feat(pre);
  for (double& v : feat) v = v > 0.0 ? v : 0.0;
  if (cache) {
    cache->flat = std::move(flat);
    cache->fc1_pre = std::move(pre);
    cache->feature = feat;
  }
  return feat;
}

}  // namespace

std::vector<double> cnn_extract(const Frame& frame, const CnnParams& p) {
  return cnn_forward(frame, p, nullptr);
}

std::vector<double> cnn_logits(const Frame& frame, const CnnParams& p) {
  std::vector<double> feat = cnn_forward(frame, p, nullptr);
  return affine(p.fc2.w, feat,
                std::span<const double>(p.fc2.b.data(), p.fc2.b.size()));
}

CrossEntropy cross_entropy(std::span<const double> logits, int label) {
  require(label >= 0 && label < static_cast<int>(logits.size()),
          "cross_entropy label out of range");
  CrossEntropy ce;
  ce.grad = softmax(logits);
  ce.loss = -std::log(ce.grad[static_cast<size_t>(label)]);
  ce.grad[static_cast<size_t>(label)] -= 1.0;
  return ce;
}

CnnSampleGrad cnn_gradients(const Frame& frame, int label, const CnnParams& p) {
  CnnForwardCache cache;
  std::vector<double> feat = cnn_forward(frame, p, &cache);
  std::vector<double> logits = affine(
      p.fc2.w, feat, std::span<const double>(p.fc2.b.data(), p.fc2.b.size()));
  CrossEntropy ce = cross_entropy(logits, label);

  CnnSampleGrad out;
  out.loss = ce.loss;
  out.grads = CnnParams::zeros();

  // fc2
  outer_add(out.grads.fc2.w, ce.grad.data(), feat.data());
  for (size_t i = 0; i < ce.grad.size(); ++i) out.grads.fc2.b(static_cast<int>(i)) += ce.grad[i];
  std::vector<double> dfeat(feat.size(), 0.0);
  matvec_t_add(p.fc2.w, ce.grad.data(), dfeat.data());

  // relu + fc1
  for (size_t i = 0; i < dfeat.size(); ++i) {
    if (cache.fc1_pre[i] <= 0.0) dfeat[i] = 0.0;
  }
  outer_add(out.grads.fc1.w, dfeat.data(), cache.flat.data());
  for (size_t i = 0; i < dfeat.size(); ++i) out.grads.fc1.b(static_cast<int>(i)) += dfeat[i];
  std::vector<double> dflat(cache.flat.size(), 0.0);
  matvec_t_add(p.fc1.w, dfeat.data(), dflat.data());

  // conv stack, deepest stage first
  const Tensor& top = cache.stages[2].pre_relu;
  Tensor d({top.dim(0), top.dim(1) / 2, top.dim(2) / 2}, std::move(dflat));
  for (int s = 2; s >= 0; --s) {
    d = conv_pool_backward(d, cache.stages[static_cast<size_t>(s)],
                           p.stages[static_cast<size_t>(s)],
                           out.grads.stages[static_cast<size_t>(s)]);
  }
  return out;
}

CnnTrainResult train_cnn(const std::vector<GlyphCrop>& crops,
                         const CnnTrainConfig& config) {
  require(!crops.empty(), "train_cnn requires a non-empty dataset");
  require(config.epochs >= 1 && config.batch >= 1, "bad training config");
  for (const auto& c : crops) {
    require(c.label >= 0 && c.label < kGlyphClasses, "label out of range");
  }

  Rng rng(config.seed);
  CnnParams params = CnnParams::init(rng);
  CnnParams velocity = CnnParams::zeros();

  std::vector<size_t> order(crops.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  size_t n_val = static_cast<size_t>(
      std::floor(config.val_fraction * static_cast<double>(crops.size())));
  std::vector<size_t> val_idx(order.begin(), order.begin() + n_val);
  std::vector<size_t> train_idx(order.begin() + n_val, order.end());
  if (val_idx.empty()) val_idx = train_idx;

  auto val_accuracy = [&](const CnnParams& m) {
    size_t correct = 0;
    for (size_t i : val_idx) {
      std::vector<double> logits = cnn_logits(crops[i].frame, m);
      int best = static_cast<int>(
          std::max_element(logits.begin(), logits.end()) - logits.begin());
      if (best == crops[i].label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(val_idx.size());
  };

  CnnTrainResult result;
  result.params = params;
  result.best_val_acc = -1.0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(train_idx);
    double loss_sum = 0.0;
    for (size_t start = 0; start < train_idx.size(); start += static_cast<size_t>(config.batch)) {
      size_t end = std::min(train_idx.size(), start + static_cast<size_t>(config.batch));
      CnnParams batch_grads = CnnParams::zeros();
      auto acc = batch_grads.tensors();
      for (size_t i = start; i < end; ++i) {
        CnnSampleGrad g = cnn_gradients(crops[train_idx[i]].frame,
                                        crops[train_idx[i]].label, params);
        loss_sum += g.loss;
        auto gs = g.grads.tensors();
        for (size_t t = 0; t < acc.size(); ++t) {
          for (size_t j = 0; j < acc[t].second->size(); ++j) {
            (*acc[t].second)[j] += (*gs[t].second)[j];
          }
        }
      }
      double inv = 1.0 / static_cast<double>(end - start);
      auto ps = params.tensors();
      auto vs = velocity.tensors();
      for (size_t t = 0; t < ps.size(); ++t) {
        for (size_t j = 0; j < ps[t].second->size(); ++j) {
          double g = (*acc[t].second)[j] * inv;
          double& v = (*vs[t].second)[j];
          v = config.momentum * v - config.learning_rate * g;
          (*ps[t].second)[j] += v;
        }
      }
    }

    double mean_loss = loss_sum / static_cast<double>(train_idx.size());
    result.epoch_loss.push_back(mean_loss);
    double acc = val_accuracy(params);
    if (config.on_epoch) config.on_epoch(epoch, mean_loss, acc);
    if (acc > result.best_val_acc) {
      result.best_val_acc = acc;
      result.params = params;
      result.best_epoch = epoch;
    }
  }
  return result;
}

}  // namespace crnn
