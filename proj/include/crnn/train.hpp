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

#ifndef CRNN_TRAIN_HPP
#define CRNN_TRAIN_HPP

#include <functional>
#include <string>
#include <vector>

#include "crnn/ctc.hpp"
#include "crnn/lstm.hpp"

namespace crnn {

// A frame-feature sequence paired with its target labeling.
struct SequenceSample {
  Tensor features;  // [T x D]
  Labeling target;
};

struct BpttResult {
  double loss = 0.0;
  bool feasible = true;
  StackParams grads;  // shape-congruent with the parameters
};

// CTC loss and gradients for one sample: stack forward, forward-backward,
// then reverse-time backpropagation; weight gradients are summed over all
// timesteps. Infeasible targets yield +inf loss and zero gradients.
BpttResult bptt_gradients(const SequenceSample& sample, const StackParams& p);

struct OptimizerState {
  StackParams velocity;
  double learning_rate = 1e-3;
  double momentum = 0.9;

  static OptimizerState make(const StackParams& params, double lr, double mu);
};

// Classical momentum: v <- mu v - lr g; w <- w + v.
void sgd_momentum_update(StackParams& params, const StackParams& grads,
                         OptimizerState& opt);

double global_grad_norm(const StackParams& grads);

// Scales all gradients so the global norm is at most max_norm; direction
// is never changed.
void clip_global_norm(StackParams& grads, double max_norm);

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::string worst_param;  // e.g. "layers.0.fwd.w_xi[7]"
  double analytic = 0.0;
  double numeric = 0.0;
  std::string text() const;
};

// Compares every analytic gradient against central finite differences
// (L(w+eps) - L(w-eps)) / (2 eps) of the end-to-end CTC loss.
// Relative error uses |a-n| / max(|a|, |n|, 1e-4); the floor absorbs
// finite-difference roundoff on near-zero entries.
GradCheckReport grad_check(const SequenceSample& sample, const StackParams& p,
                           double eps);

struct EpochRecord {
  int epoch = 0;
  double mean_ctc_loss = 0.0;
  double val_label_error = 0.0;
  double val_seq_acc = 0.0;
};

struct CrnnTrainConfig {
  double learning_rate = 1e-3;
  double momentum = 0.9;
  int epochs = 20;
  uint64_t seed = 1;
  double clip_norm = 5.0;       // 0 disables clipping
  double val_fraction = 0.1;    // 0 validates on the training set
  // Called once per finished epoch when set.
  std::function<void(const EpochRecord&)> on_epoch;
};

struct CrnnTrainResult {
  // Best snapshots under the two model-selection criteria.
  StackParams best_by_ctc;
  StackParams best_by_label;
  int best_ctc_epoch = 0;
  int best_label_epoch = 0;
  std::vector<EpochRecord> log;
};

// Per-sample SGD with momentum over shuffled epochs; tracks the best
// validation checkpoint under both the CTC-loss and label-error criteria.
CrnnTrainResult train_crnn(const std::vector<SequenceSample>& dataset,
                           const StackParams& init,
                           const CrnnTrainConfig& config);

// One "epoch<TAB>mean_ctc_loss<TAB>val_label_error<TAB>val_seq_acc" line.
std::string format_epoch_line(const EpochRecord& rec);

}  // namespace crnn

#endif  // CRNN_TRAIN_HPP
