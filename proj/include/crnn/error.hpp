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

#ifndef CRNN_ERROR_HPP
#define CRNN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace crnn {

// Error taxonomy mirrors the process exit codes: usage errors are caller
// bugs (bad arguments, shape mismatches), data errors are bad files or
// malformed external input.
enum class ErrorKind { kUsage = 1, kData = 2 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void usage_error(const std::string& msg) {
  throw Error(ErrorKind::kUsage, msg);
}

[[noreturn]] inline void data_error(const std::string& msg) {
  throw Error(ErrorKind::kData, msg);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) usage_error(msg);
}

}  // namespace crnn

#endif  // CRNN_ERROR_HPP
