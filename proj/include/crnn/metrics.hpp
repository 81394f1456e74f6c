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

#ifndef CRNN_METRICS_HPP
#define CRNN_METRICS_HPP

#include <string>
#include <utility>
#include <vector>

#include "crnn/ctc.hpp"

namespace crnn {

// (hypothesis, reference) pairs.
using LabelingPairs = std::vector<std::pair<Labeling, Labeling>>;

// Levenshtein distance with unit insert/delete/substitute costs.
int edit_distance(const Labeling& p, const Labeling& q);

// Total edit distance normalized by the total reference label count.
double label_error_rate(const LabelingPairs& pairs);

// Fraction of pairs with hypothesis exactly equal to reference.
double sequence_accuracy(const LabelingPairs& pairs);

// Machine-readable report, one `key<TAB>value` line each for
// samples, seq_acc, label_err.
std::string format_report(size_t samples, double seq_acc, double label_err);

}  // namespace crnn

#endif  // CRNN_METRICS_HPP
