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

#include "crnn/lstm.hpp"

#include <cmath>

#include "crnn/error.hpp"
#include "crnn/math.hpp"

namespace crnn {

namespace {

void fill_uniform(Tensor& t, Rng& rng) {
  for (size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-0.1, 0.1);
}

}  // namespace

LstmLayerParams LstmLayerParams::zeros(int input, int hidden) {
  LstmLayerParams p;
  p.w_xi = Tensor({hidden, input});
  p.w_xf = Tensor({hidden, input});
  p.w_xc = Tensor({hidden, input});
  p.w_xo = Tensor({hidden, input});
  p.w_hi = Tensor({hidden, hidden});
  p.w_hf = Tensor({hidden, hidden});
  p.w_hc = Tensor({hidden, hidden});
  p.w_ho = Tensor({hidden, hidden});
  p.w_ci = Tensor({hidden});
  p.w_cf = Tensor({hidden});
  p.w_co = Tensor({hidden});
  p.b_i = Tensor({hidden});
  p.b_f = Tensor({hidden});
  p.b_c = Tensor({hidden});
  p.b_o = Tensor({hidden});
  return p;
}

LstmLayerParams LstmLayerParams::init(int input, int hidden, Rng& rng) {
  LstmLayerParams p = zeros(input, hidden);
  // Draw order is fixed: the x weights, the h weights, then peepholes.
  fill_uniform(p.w_xi, rng);
  fill_uniform(p.w_xf, rng);
  fill_uniform(p.w_xc, rng);
  fill_uniform(p.w_xo, rng);
  fill_uniform(p.w_hi, rng);
  fill_uniform(p.w_hf, rng);
  fill_uniform(p.w_hc, rng);
  fill_uniform(p.w_ho, rng);
  fill_uniform(p.w_ci, rng);
  fill_uniform(p.w_cf, rng);
  fill_uniform(p.w_co, rng);
  p.b_f.fill(1.0);  // long-memory start: keep the forget gate open
  return p;
}

std::vector<std::pair<std::string, Tensor*>> LstmLayerParams::tensors() {
  return {{"w_xi", &w_xi}, {"w_xf", &w_xf}, {"w_xc", &w_xc}, {"w_xo", &w_xo},
          {"w_hi", &w_hi}, {"w_hf", &w_hf}, {"w_hc", &w_hc}, {"w_ho", &w_ho},
          {"w_ci", &w_ci}, {"w_cf", &w_cf}, {"w_co", &w_co}, {"b_i", &b_i},
          {"b_f", &b_f},   {"b_c", &b_c},   {"b_o", &b_o}};
}

std::vector<std::pair<std::string, const Tensor*>> LstmLayerParams::tensors()
    const {
  std::vector<std::pair<std::string, const Tensor*>> out;
  for (auto& [name, t] : const_cast<LstmLayerParams*>(this)->tensors()) {
    out.emplace_back(name, t);
  }
  return out;
}

BiLayerParams BiLayerParams::init(int input, int hidden, Rng& rng) {
  BiLayerParams p;
  p.fwd = LstmLayerParams::init(input, hidden, rng);
  p.bwd = LstmLayerParams::init(input, hidden, rng);
  return p;
}

BiLayerParams BiLayerParams::zeros(int input, int hidden) {
  return {LstmLayerParams::zeros(input, hidden),
          LstmLayerParams::zeros(input, hidden)};
}

std::vector<std::pair<std::string, Tensor*>> BiLayerParams::tensors() {
  std::vector<std::pair<std::string, Tensor*>> out;
  for (auto& [name, t] : fwd.tensors()) out.emplace_back("fwd." + name, t);
  for (auto& [name, t] : bwd.tensors()) out.emplace_back("bwd." + name, t);
  return out;
}

std::vector<std::pair<std::string, const Tensor*>> BiLayerParams::tensors()
    const {
  std::vector<std::pair<std::string, const Tensor*>> out;
  for (auto& [name, t] : const_cast<BiLayerParams*>(this)->tensors()) {
    out.emplace_back(name, t);
  }
  return out;
}

StackParams StackParams::init(int input, const std::vector<int>& hidden,
                              int classes, Rng& rng) {
  require(!hidden.empty(), "stack needs at least one recurrent layer");
  StackParams p;
  int d = input;
  for (int h : hidden) {
    p.layers.push_back(BiLayerParams::init(d, h, rng));
    d = 2 * h;
  }
  int h_last = hidden.back();
  p.output.w_fwd = Tensor({classes, h_last});
  p.output.w_bwd = Tensor({classes, h_last});
  p.output.b = Tensor({classes});
  fill_uniform(p.output.w_fwd, rng);
  fill_uniform(p.output.w_bwd, rng);
  return p;
}

StackParams StackParams::zeros_like(const StackParams& other) {
  StackParams p;
  for (const auto& layer : other.layers) {
    p.layers.push_back(
        BiLayerParams::zeros(layer.fwd.input(), layer.fwd.hidden()));
  }
  p.output.w_fwd = Tensor(other.output.w_fwd.dims());
  p.output.w_bwd = Tensor(other.output.w_bwd.dims());
  p.output.b = Tensor(other.output.b.dims());
  return p;
}

std::vector<std::pair<std::string, Tensor*>> StackParams::tensors() {
  std::vector<std::pair<std::string, Tensor*>> out;
  for (size_t l = 0; l < layers.size(); ++l) {
    std::string prefix = "layers." + std::to_string(l) + ".";
    for (auto& [name, t] : layers[l].tensors()) out.emplace_back(prefix + name, t);
  }
  out.emplace_back("output.w_fwd", &output.w_fwd);
  out.emplace_back("output.w_bwd", &output.w_bwd);
  out.emplace_back("output.b", &output.b);
  return out;
}

std::vector<std::pair<std::string, const Tensor*>> StackParams::tensors()
    const {
  std::vector<std::pair<std::string, const Tensor*>> out;
  for (auto& [name, t] : const_cast<StackParams*>(this)->tensors()) {
    out.emplace_back(name, t);
  }
  return out;
}

CellState lstm_step(std::span<const double> x, const CellState& prev,
                    const LstmLayerParams& p, LstmStepCache* cache) {
  const int h = p.hidden();
  const int d = p.input();
  require(static_cast<int>(x.size()) == d, "lstm_step: input size mismatch");
  require(static_cast<int>(prev.h.size()) == h &&
              static_cast<int>(prev.c.size()) == h,
          "lstm_step: state size mismatch");

  std::vector<double> ai(p.b_i.values());
  std::vector<double> af(p.b_f.values());
  std::vector<double> ag(p.b_c.values());
  std::vector<double> ao(p.b_o.values());
  matvec_add(p.w_xi, x.data(), ai.data());
  matvec_add(p.w_hi, prev.h.data(), ai.data());
  matvec_add(p.w_xf, x.data(), af.data());
  matvec_add(p.w_hf, prev.h.data(), af.data());
  matvec_add(p.w_xc, x.data(), ag.data());
  matvec_add(p.w_hc, prev.h.data(), ag.data());
  matvec_add(p.w_xo, x.data(), ao.data());
  matvec_add(p.w_ho, prev.h.data(), ao.data());

  CellState next(h);
  std::vector<double> gi(static_cast<size_t>(h)), gf(static_cast<size_t>(h)),
      gg(static_cast<size_t>(h)), go(static_cast<size_t>(h)),
      tc(static_cast<size_t>(h));
  for (int j = 0; j < h; ++j) {
    gi[j] = sigmoid(ai[j] + p.w_ci(j) * prev.c[j]);
    gf[j] = sigmoid(af[j] + p.w_cf(j) * prev.c[j]);
    gg[j] = std::tanh(ag[j]);
    next.c[j] = gf[j] * prev.c[j] + gi[j] * gg[j];
    go[j] = sigmoid(ao[j] + p.w_co(j) * next.c[j]);  // peephole sees c_t
    tc[j] = std::tanh(next.c[j]);
    next.h[j] = go[j] * tc[j];
  }

  if (cache) {
    cache->i = std::move(gi);
    cache->f = std::move(gf);
    cache->o = std::move(go);
    cache->g = std::move(gg);
    cache->c = next.c;
    cache->tanh_c = std::move(tc);
    cache->h_prev = prev.h;
    cache->c_prev = prev.c;
  }
  return next;
}

Tensor lstm_dir_forward(const Tensor& seq, const LstmLayerParams& p,
                        bool reverse, LstmSeqCache* cache) {
  require(seq.ndim() == 2, "expected sequence as [T x D]");
  const int tlen = seq.dim(0);
  require(tlen >= 1, "empty sequence");
  const int h = p.hidden();

  Tensor out({tlen, h});
  CellState state(h);
  if (cache) {
    cache->reverse = reverse;
    cache->x = seq;
    cache->steps.resize(static_cast<size_t>(tlen));
  }
  for (int step = 0; step < tlen; ++step) {
    int t = reverse ? tlen - 1 - step : step;
    std::span<const double> x(seq.row(t), static_cast<size_t>(seq.dim(1)));
    state = lstm_step(x, state, p,
                      cache ? &cache->steps[static_cast<size_t>(step)] : nullptr);
    double* dst = out.row(t);
    for (int j = 0; j < h; ++j) dst[j] = state.h[j];
  }
  return out;
}

Tensor lstm_dir_backward(const Tensor& dh_seq, const LstmSeqCache& cache,
                         const LstmLayerParams& p, LstmLayerParams& grads) {
  const int tlen = cache.x.dim(0);
  const int d = p.input();
  const int h = p.hidden();

  Tensor dx({tlen, d});
  std::vector<double> dh_next(static_cast<size_t>(h), 0.0);  // from step+1
  std::vector<double> dc_next(static_cast<size_t>(h), 0.0);
  std::vector<double> da_i(static_cast<size_t>(h)), da_f(static_cast<size_t>(h)),
      da_g(static_cast<size_t>(h)), da_o(static_cast<size_t>(h));

  for (int step = tlen - 1; step >= 0; --step) {
    int t = cache.reverse ? tlen - 1 - step : step;
    const LstmStepCache& sc = cache.steps[static_cast<size_t>(step)];
    const double* dh_out = dh_seq.row(t);

    for (int j = 0; j < h; ++j) {
      double dh = dh_out[j] + dh_next[j];
      double o = sc.o[j];
      double tc = sc.tanh_c[j];
      da_o[j] = dh * tc * o * (1.0 - o);
      double dc = dh * o * (1.0 - tc * tc) + dc_next[j] + da_o[j] * p.w_co(j);
      double i = sc.i[j];
      double f = sc.f[j];
      double g = sc.g[j];
      da_i[j] = dc * g * i * (1.0 - i);
      da_f[j] = dc * sc.c_prev[j] * f * (1.0 - f);
      da_g[j] = dc * i * (1.0 - g * g);
      dc_next[j] = dc * f + da_i[j] * p.w_ci(j) + da_f[j] * p.w_cf(j);
      grads.w_ci(j) += da_i[j] * sc.c_prev[j];
      grads.w_cf(j) += da_f[j] * sc.c_prev[j];
      grads.w_co(j) += da_o[j] * sc.c[j];
      grads.b_i(j) += da_i[j];
      grads.b_f(j) += da_f[j];
      grads.b_c(j) += da_g[j];
      grads.b_o(j) += da_o[j];
    }

    const double* x = cache.x.row(t);
    outer_add(grads.w_xi, da_i.data(), x);
    outer_add(grads.w_xf, da_f.data(), x);
    outer_add(grads.w_xc, da_g.data(), x);
    outer_add(grads.w_xo, da_o.data(), x);
    outer_add(grads.w_hi, da_i.data(), sc.h_prev.data());
    outer_add(grads.w_hf, da_f.data(), sc.h_prev.data());
    outer_add(grads.w_hc, da_g.data(), sc.h_prev.data());
    outer_add(grads.w_ho, da_o.data(), sc.h_prev.data());

    double* dxt = dx.row(t);
    matvec_t_add(p.w_xi, da_i.data(), dxt);
    matvec_t_add(p.w_xf, da_f.data(), dxt);
    matvec_t_add(p.w_xc, da_g.data(), dxt);
    matvec_t_add(p.w_xo, da_o.data(), dxt);

    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    matvec_t_add(p.w_hi, da_i.data(), dh_next.data());
    matvec_t_add(p.w_hf, da_f.data(), dh_next.data());
    matvec_t_add(p.w_hc, da_g.data(), dh_next.data());
    matvec_t_add(p.w_ho, da_o.data(), dh_next.data());
  }
  return dx;
}

Tensor birnn_layer_forward(const Tensor& seq, const BiLayerParams& p,
                           BiLayerCache* cache) {
  require(seq.ndim() == 2 && seq.dim(0) >= 1, "empty sequence");
  const int tlen = seq.dim(0);
  const int h = p.fwd.hidden();
  require(p.bwd.hidden() == h && p.bwd.input() == p.fwd.input(),
          "directions must share dimensions");

  Tensor hf = lstm_dir_forward(seq, p.fwd, false, cache ? &cache->fwd : nullptr);
  Tensor hb = lstm_dir_forward(seq, p.bwd, true, cache ? &cache->bwd : nullptr);

  Tensor out({tlen, 2 * h});
  for (int t = 0; t < tlen; ++t) {
    double* dst = out.row(t);
    const double* f = hf.row(t);
    const double* b = hb.row(t);
    for (int j = 0; j < h; ++j) dst[j] = f[j];
    for (int j = 0; j < h; ++j) dst[h + j] = b[j];
  }
  return out;
}

Tensor birnn_layer_backward(const Tensor& dout, const BiLayerCache& cache,
                            const BiLayerParams& p, BiLayerParams& grads) {
  const int tlen = dout.dim(0);
  const int h = p.fwd.hidden();

  Tensor dhf({tlen, h});
  Tensor dhb({tlen, h});
  for (int t = 0; t < tlen; ++t) {
    const double* src = dout.row(t);
    double* f = dhf.row(t);
    double* b = dhb.row(t);
    for (int j = 0; j < h; ++j) f[j] = src[j];
    for (int j = 0; j < h; ++j) b[j] = src[h + j];
  }

  Tensor dx = lstm_dir_backward(dhf, cache.fwd, p.fwd, grads.fwd);
  Tensor dxb = lstm_dir_backward(dhb, cache.bwd, p.bwd, grads.bwd);
  for (size_t i = 0; i < dx.size(); ++i) dx[i] += dxb[i];
  return dx;
}

StackForward stack_forward(const Tensor& features, const StackParams& p) {
  require(features.ndim() == 2 && features.dim(0) >= 1, "empty sequence");
  require(features.dim(1) == p.input(), "feature width mismatch");
  const int tlen = features.dim(0);
  const int k = p.classes();

  StackForward out;
  out.cache.layers.resize(p.layers.size());
  const Tensor* cur = &features;
  for (size_t l = 0; l < p.layers.size(); ++l) {
    out.cache.layer_outputs.push_back(
        birnn_layer_forward(*cur, p.layers[l], &out.cache.layers[l]));
    cur = &out.cache.layer_outputs.back();
  }

  const Tensor& last = out.cache.layer_outputs.back();
  const int h_last = p.layers.back().fwd.hidden();
  out.u = Tensor({tlen, k});
  out.y = Tensor({tlen, k});
  for (int t = 0; t < tlen; ++t) {
    double* u = out.u.row(t);
    for (int c = 0; c < k; ++c) u[c] = p.output.b(c);
    matvec_add(p.output.w_fwd, last.row(t), u);
    matvec_add(p.output.w_bwd, last.row(t) + h_last, u);
    std::vector<double> probs = softmax(std::span<const double>(u, static_cast<size_t>(k)));
    double* y = out.y.row(t);
    for (int c = 0; c < k; ++c) y[c] = probs[static_cast<size_t>(c)];
  }
  return out;
}

Tensor stack_backward(const Tensor& du, const StackCache& cache,
                      const StackParams& p, StackParams& grads) {
  const int tlen = du.dim(0);
  const int h_last = p.layers.back().fwd.hidden();
  const Tensor& last = cache.layer_outputs.back();

  Tensor dlast({tlen, 2 * h_last});
  for (int t = 0; t < tlen; ++t) {
    const double* dut = du.row(t);
    outer_add(grads.output.w_fwd, dut, last.row(t));
    outer_add(grads.output.w_bwd, dut, last.row(t) + h_last);
    for (int c = 0; c < p.classes(); ++c) grads.output.b(c) += dut[c];
    double* dl = dlast.row(t);
    matvec_t_add(p.output.w_fwd, dut, dl);
    matvec_t_add(p.output.w_bwd, dut, dl + h_last);
  }

  Tensor d = std::move(dlast);
  for (size_t l = p.layers.size(); l-- > 0;) {
    d = birnn_layer_backward(d, cache.layers[l], p.layers[l], grads.layers[l]);
  }
  return d;
}

}  // namespace crnn
