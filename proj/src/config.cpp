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

#include "crnn/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "crnn/error.hpp"

namespace crnn {

namespace {

long long parse_int(const std::string& key, const std::string& value) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    usage_error("config " + key + ": not an integer: " + value);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double out = std::stod(value, &pos);
    if (pos != value.size() || !std::isfinite(out)) throw std::invalid_argument("");
    return out;
  } catch (const std::exception&) {
    usage_error("config " + key + ": not a number: " + value);
  }
}

void check_int_range(const std::string& key, const std::string& value,
                     long long lo, long long hi) {
  long long v = parse_int(key, value);
  if (v < lo || v > hi) {
    usage_error("config " + key + ": value " + value + " out of range [" +
                std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

void check_double_range(const std::string& key, const std::string& value,
                        double lo, double hi) {
  double v = parse_double(key, value);
  if (v < lo || v > hi) {
    usage_error("config " + key + ": value " + value + " out of range");
  }
}

}  // namespace

Config::Config() {
  // Desk-scale defaults. The paper-scale profile uses lr=1e-4 with the same
  // momentum; both are plain config values.
  values_ = {
      {"alphabet_size", "10"},
      {"window", "20"},
      {"stride", "8"},
      {"layers", "2"},
      {"hidden", "128,32"},
      {"lr", "0.001"},
      {"momentum", "0.9"},
      {"epochs", "20"},
      {"seed", "1"},
      {"batch", "32"},
      {"clip", "5.0"},
      {"val_fraction", "0.1"},
      {"select", "label"},
      {"decoder", "crnn"},
      {"count", "100"},
      {"digits_min", "1"},
      {"digits_max", "5"},
      {"noise", "0.05"},
      {"jitter", "1.0"},
      {"data_dir", ""},
      {"out", ""},
      {"features", ""},
      {"cnn", ""},
      {"model", ""},
      {"standardizer", ""},
      {"log", ""},
  };
}

bool Config::known_key(const std::string& key) {
  static const Config defaults;
  return defaults.values_.count(key) > 0;
}

void Config::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) usage_error("unknown config key: " + key);

  if (key == "alphabet_size") {
    long long v = parse_int(key, value);
    if (v != 10) usage_error("config alphabet_size: only the 10-digit alphabet is supported");
  } else if (key == "window") {
    long long v = parse_int(key, value);
    if (v != 20) usage_error("config window: frame geometry is fixed at 20");
  } else if (key == "stride") {
    check_int_range(key, value, 1, 64);
  } else if (key == "layers") {
    check_int_range(key, value, 1, 2);
  } else if (key == "hidden") {
    size_t start = 0;
    int count = 0;
    while (start <= value.size()) {
      size_t comma = value.find(',', start);
      std::string item = value.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      check_int_range(key, item, 1, 4096);
      ++count;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (count < 1 || count > 2) usage_error("config hidden: expected 1 or 2 sizes");
  } else if (key == "lr") {
    check_double_range(key, value, 1e-12, 1e3);
  } else if (key == "momentum") {
    double v = parse_double(key, value);
    if (v < 0.0 || v >= 1.0) usage_error("config momentum: must be in [0, 1)");
  } else if (key == "epochs") {
    check_int_range(key, value, 1, 1000000);
  } else if (key == "seed") {
    parse_int(key, value);
  } else if (key == "batch") {
    check_int_range(key, value, 1, 1 << 20);
  } else if (key == "clip") {
    check_double_range(key, value, 0.0, 1e9);
  } else if (key == "val_fraction") {
    check_double_range(key, value, 0.0, 0.9);
  } else if (key == "select") {
    if (value != "label" && value != "ctc") {
      usage_error("config select: expected label or ctc");
    }
  } else if (key == "decoder") {
    if (value != "crnn" && value != "cnn") {
      usage_error("config decoder: expected crnn or cnn");
    }
  } else if (key == "count") {
    check_int_range(key, value, 1, 10000000);
  } else if (key == "digits_min" || key == "digits_max") {
    check_int_range(key, value, 1, 5);
  } else if (key == "noise") {
    check_double_range(key, value, 0.0, 1.0);
  } else if (key == "jitter") {
    check_double_range(key, value, 0.0, 8.0);
  }
  // Path-valued keys take any string.
  it->second = value;
}

const std::string& Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) usage_error("unknown config key: " + key);
  return it->second;
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) data_error("cannot open config file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      data_error(path + " line " + std::to_string(line_no) + ": expected key=value");
    }
    try {
      set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error& e) {
      data_error(path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

int Config::get_int(const std::string& key) const {
  return static_cast<int>(parse_int(key, get(key)));
}

double Config::get_double(const std::string& key) const {
  return parse_double(key, get(key));
}

uint64_t Config::get_u64(const std::string& key) const {
  return static_cast<uint64_t>(parse_int(key, get(key)));
}

std::vector<int> Config::hidden_list() const {
  const std::string& value = get("hidden");
  std::vector<int> out;
  size_t start = 0;
  while (start <= value.size()) {
    size_t comma = value.find(',', start);
    std::string item = value.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(static_cast<int>(parse_int("hidden", item)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  require(out.size() == static_cast<size_t>(get_int("layers")),
          "config: hidden list length must match layers");
  return out;
}

std::string Config::echo() const {
  std::string out;
  for (const auto& [key, value] : values_) {  // std::map iterates sorted
    out += key;
    out += "=";
    out += value;
    out += "\n";
  }
  return out;
}

}  // namespace crnn
