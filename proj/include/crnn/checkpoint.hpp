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

#ifndef CRNN_CHECKPOINT_HPP
#define CRNN_CHECKPOINT_HPP

#include <string>
#include <utility>
#include <vector>

#include "crnn/tensor.hpp"

namespace crnn {

// Versioned container of named tensors plus a key=value text block.
// Layout is little-endian and fully specified:
//   "CRNN" | u32 version | u32 section count
//   per section: u32 name length | name bytes | u32 ndim | u32 dims... |
//                raw f64 data
//   u32 config length | config bytes
// save -> load -> save is byte-identical; an unknown version refuses to
// load. The same container backs checkpoints and feature caches.
struct SectionFile {
  static constexpr uint32_t kVersion = 1;

  std::vector<std::pair<std::string, Tensor>> sections;
  std::string config_text;

  void add(const std::string& name, Tensor t);
  const Tensor* find(const std::string& name) const;
  // Data error when missing.
  const Tensor& get(const std::string& name) const;

  void save(const std::string& path) const;
  static SectionFile load(const std::string& path);
};

}  // namespace crnn

#endif  // CRNN_CHECKPOINT_HPP
