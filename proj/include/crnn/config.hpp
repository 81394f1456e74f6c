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

#ifndef CRNN_CONFIG_HPP
#define CRNN_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace crnn {

// key=value settings with typed validation. Every known key has a default;
// unknown keys are rejected. Values from a file or flag pass the same
// per-key validation.
class Config {
 public:
  Config();

  // Usage error on unknown key or invalid value.
  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;
  static bool known_key(const std::string& key);

  // Lines of "key=value"; blank lines and lines starting with '#' are
  // skipped. Problems are data errors naming the line.
  void load_file(const std::string& path);

  int get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  uint64_t get_u64(const std::string& key) const;
  std::vector<int> hidden_list() const;

  // Canonical "key=value\n" block, keys sorted; embedded in checkpoints.
  std::string echo() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace crnn

#endif  // CRNN_CONFIG_HPP
