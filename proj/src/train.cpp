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

#include "crnn/train.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "crnn/decode.hpp"
#include "crnn/error.hpp"
#include "crnn/math.hpp"
#include "crnn/metrics.hpp"

namespace crnn {

BpttResult bptt_gradients(const SequenceSample& sample, const StackParams& p) {
  BpttResult res;
  res.grads = StackParams::zeros_like(p);

  StackForward fwd = stack_forward(sample.features, p);
  CtcResult ctc = ctc_forward_backward(fwd.y, sample.target);
  res.loss = ctc.loss;
  res.feasible = ctc.feasible;
  if (!ctc.feasible) return res;

  stack_backward(ctc.grad_u, fwd.cache, p, res.grads);
  return res;
}

OptimizerState OptimizerState::make(const StackParams& params, double lr,
                                    double mu) {
  OptimizerState opt;
  opt.velocity = StackParams::zeros_like(params);
  opt.learning_rate = lr;
  opt.momentum = mu;
  return opt;
}

void sgd_momentum_update(StackParams& params, const StackParams& grads,
                         OptimizerState& opt) {
  auto ps = params.tensors();
  auto gs = grads.tensors();
  auto vs = opt.velocity.tensors();
  require(ps.size() == gs.size() && ps.size() == vs.size(),
          "parameter/gradient shape mismatch");
  for (size_t i = 0; i < ps.size(); ++i) {
    Tensor& w = *ps[i].second;
    const Tensor& g = *gs[i].second;
    Tensor& v = *vs[i].second;
    require(w.same_shape(g) && w.same_shape(v),
            "parameter/gradient shape mismatch");
    for (size_t j = 0; j < w.size(); ++j) {
      v[j] = opt.momentum * v[j] - opt.learning_rate * g[j];
      w[j] += v[j];
    }
  }
}

double global_grad_norm(const StackParams& grads) {
  double sq = 0.0;
  for (auto& [name, t] : grads.tensors()) {
    for (size_t j = 0; j < t->size(); ++j) sq += (*t)[j] * (*t)[j];
  }
  return std::sqrt(sq);
}

void clip_global_norm(StackParams& grads, double max_norm) {
  if (max_norm <= 0.0) return;
  double norm = global_grad_norm(grads);
  if (norm <= max_norm) return;
  double scale = max_norm / norm;
  for (auto& [name, t] : grads.tensors()) {
    for (size_t j = 0; j < t->size(); ++j) (*t)[j] *= scale;
  }
}

std::string GradCheckReport::text() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "max_rel_err\t%.3e\nworst_param\t%s\nanalytic\t%.9e\nnumeric\t%.9e\n",
                max_rel_err, worst_param.c_str(), analytic, numeric);
  return buf;
}

GradCheckReport grad_check(const SequenceSample& sample, const StackParams& p,
                           double eps) {
  require(eps > 0.0, "grad_check requires a positive eps");
  size_t n_params = 0;
  for (auto& [name, t] : p.tensors()) n_params += t->size();
  require(n_params <= 5000, "grad_check limited to small instances");

  BpttResult analytic = bptt_gradients(sample, p);
  require(analytic.feasible, "grad_check target must be feasible");

  StackParams probe = p;  // mutated one coordinate at a time
  auto probe_tensors = probe.tensors();
  auto grad_tensors = analytic.grads.tensors();

  GradCheckReport report;
  for (size_t i = 0; i < probe_tensors.size(); ++i) {
    Tensor& w = *probe_tensors[i].second;
    const Tensor& g = *grad_tensors[i].second;
    for (size_t j = 0; j < w.size(); ++j) {
      double saved = w[j];
      w[j] = saved + eps;
      double loss_hi = bptt_gradients(sample, probe).loss;
      w[j] = saved - eps;
      double loss_lo = bptt_gradients(sample, probe).loss;
      w[j] = saved;
      double numeric = (loss_hi - loss_lo) / (2.0 * eps);
      double a = g[j];
      double rel = std::fabs(a - numeric) /
                   std::max({std::fabs(a), std::fabs(numeric), 1e-4});
      if (rel > report.max_rel_err) {
        report.max_rel_err = rel;
        report.worst_param =
            probe_tensors[i].first + "[" + std::to_string(j) + "]";
        report.analytic = a;
        report.numeric = numeric;
      }
    }
  }
  return report;
}

namespace {

struct ValMetrics {
  double ctc_loss = 0.0;
  double label_error = 0.0;
  double seq_acc = 0.0;
};

ValMetrics evaluate_on(const std::vector<SequenceSample>& samples,
                       const StackParams& p) {
  LabelingPairs pairs;
  pairs.reserve(samples.size());
  double loss_sum = 0.0;
  size_t counted = 0;
  for (const auto& s : samples) {
    StackForward fwd = stack_forward(s.features, p);
    pairs.emplace_back(best_path_decode(fwd.y), s.target);
    CtcResult ctc = ctc_forward_backward(fwd.y, s.target);
    if (ctc.feasible) {
      loss_sum += ctc.loss;
      ++counted;
    }
  }
  ValMetrics vm;
  vm.ctc_loss = counted ? loss_sum / static_cast<double>(counted)
                        : std::numeric_limits<double>::infinity();
  vm.label_error = label_error_rate(pairs);
  vm.seq_acc = sequence_accuracy(pairs);
  return vm;
}

}  // namespace

std::string format_epoch_line(const EpochRecord& rec) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d\t%.6f\t%.6f\t%.6f\n", rec.epoch,
                rec.mean_ctc_loss, rec.val_label_error, rec.val_seq_acc);
  return buf;
}

CrnnTrainResult train_crnn(const std::vector<SequenceSample>& dataset,
                           const StackParams& init,
                           const CrnnTrainConfig& config) {
  require(!dataset.empty(), "train_crnn requires a non-empty dataset");
  require(config.epochs >= 1, "train_crnn requires epochs >= 1");

  Rng rng(config.seed);
  std::vector<size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  size_t n_val = static_cast<size_t>(
      std::floor(config.val_fraction * static_cast<double>(dataset.size())));
  std::vector<SequenceSample> val;
  std::vector<size_t> train_idx;
  for (size_t i = 0; i < order.size(); ++i) {
    if (i < n_val) {
      val.push_back(dataset[order[i]]);
    } else {
      train_idx.push_back(order[i]);
    }
  }
  if (val.empty()) {
    for (const auto& s : dataset) val.push_back(s);  // degenerate split
  }

  StackParams params = init;
  OptimizerState opt =
      OptimizerState::make(params, config.learning_rate, config.momentum);

  CrnnTrainResult result;
  result.best_by_ctc = params;
  result.best_by_label = params;
  double best_ctc = std::numeric_limits<double>::infinity();
  double best_label = std::numeric_limits<double>::infinity();

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(train_idx);
    double loss_sum = 0.0;
    size_t counted = 0;
    for (size_t idx : train_idx) {
      BpttResult b = bptt_gradients(dataset[idx], params);
      if (!b.feasible) continue;  // surfaces in the loss mean, not a crash
      loss_sum += b.loss;
      ++counted;
      clip_global_norm(b.grads, config.clip_norm);
      sgd_momentum_update(params, b.grads, opt);
    }

    ValMetrics vm = evaluate_on(val, params);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.mean_ctc_loss =
        counted ? loss_sum / static_cast<double>(counted)
                : std::numeric_limits<double>::infinity();
    rec.val_label_error = vm.label_error;
    rec.val_seq_acc = vm.seq_acc;
    result.log.push_back(rec);
    if (config.on_epoch) config.on_epoch(rec);

    if (vm.ctc_loss < best_ctc) {
      best_ctc = vm.ctc_loss;
      result.best_by_ctc = params;
      result.best_ctc_epoch = epoch;
    }
    if (rec.val_label_error < best_label) {
      best_label = rec.val_label_error;
      result.best_by_label = params;
      result.best_label_epoch = epoch;
    }
  }
  return result;
}

}  // namespace crnn
