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

#include "crnn/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>

#include "crnn/error.hpp"

namespace crnn {

namespace {

constexpr char kMagic[4] = {'C', 'R', 'N', 'N'};

void put_u32(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_f64(std::string& out, double d) {
  uint64_t v = std::bit_cast<uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

struct Reader {
  const std::string& buf;
  size_t pos = 0;
  const std::string& path;

  void need(size_t n) {
    if (pos + n > buf.size()) data_error("truncated checkpoint: " + path);
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
    }
    pos += 4;
    return v;
  }
  double f64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<uint64_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
    }
    pos += 8;
    return std::bit_cast<double>(v);
  }
  std::string bytes(size_t n) {
    need(n);
    std::string s = buf.substr(pos, n);
    pos += n;
    return s;
  }
};

}  // namespace

void SectionFile::add(const std::string& name, Tensor t) {
  sections.emplace_back(name, std::move(t));
}

const Tensor* SectionFile::find(const std::string& name) const {
  for (const auto& [n, t] : sections) {
    if (n == name) return &t;
  }
  return nullptr;
}

const Tensor& SectionFile::get(const std::string& name) const {
  const Tensor* t = find(name);
  if (!t) data_error("checkpoint is missing section: " + name);
  return *t;
}

void SectionFile::save(const std::string& path) const {
  std::string out;
  out.append(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<uint32_t>(sections.size()));
  for (const auto& [name, t] : sections) {
    put_u32(out, static_cast<uint32_t>(name.size()));
    out += name;
    put_u32(out, static_cast<uint32_t>(t.ndim()));
    for (int d : t.dims()) put_u32(out, static_cast<uint32_t>(d));
    for (size_t i = 0; i < t.size(); ++i) put_f64(out, t[i]);
  }
  put_u32(out, static_cast<uint32_t>(config_text.size()));
  out += config_text;

  std::ofstream f(path, std::ios::binary);
  if (!f) data_error("cannot open for writing: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) data_error("short write: " + path);
}

SectionFile SectionFile::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) data_error("cannot open: " + path);
  std::string buf((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());

  Reader r{buf, 0, path};
  if (r.bytes(4) != std::string(kMagic, 4)) {
    data_error("bad checkpoint magic: " + path);
  }
  uint32_t version = r.u32();
  if (version != kVersion) {
    data_error("unsupported checkpoint version " + std::to_string(version) +
               ": " + path);
  }
  uint32_t count = r.u32();

  SectionFile out;
  for (uint32_t s = 0; s < count; ++s) {
    uint32_t name_len = r.u32();
    std::string name = r.bytes(name_len);
    uint32_t ndim = r.u32();
    if (ndim == 0 || ndim > 8) data_error("bad section rank: " + path);
    std::vector<int> dims;
    size_t numel = 1;
    for (uint32_t d = 0; d < ndim; ++d) {
      uint32_t v = r.u32();
      if (v == 0 || v > (1u << 28)) data_error("bad section dim: " + path);
      dims.push_back(static_cast<int>(v));
      numel *= v;
    }
    std::vector<double> data(numel);
    for (size_t i = 0; i < numel; ++i) data[i] = r.f64();
    out.add(name, Tensor(std::move(dims), std::move(data)));
  }
  uint32_t cfg_len = r.u32();
  out.config_text = r.bytes(cfg_len);
  if (r.pos != buf.size()) data_error("trailing bytes in checkpoint: " + path);
  return out;
}

}  // namespace crnn
