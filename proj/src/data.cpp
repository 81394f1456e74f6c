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

#include "crnn/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "crnn/error.hpp"

namespace fs = std::filesystem;

namespace crnn {

namespace {

// Classic 5x7 digit bitmaps, one row per string.
const char* const kFont[10][7] = {
    {"01110", "10001", "10011", "10101", "11001", "10001", "01110"},  // 0
    {"00100", "01100", "00100", "00100", "00100", "00100", "01110"},  // 1
    {"01110", "10001", "00001", "00010", "00100", "01000", "11111"},  // 2
    {"11111", "00010", "00100", "00010", "00001", "10001", "01110"},  // 3
    {"00010", "00110", "01010", "10010", "11111", "00010", "00010"},  // 4
    {"11111", "10000", "11110", "00001", "00001", "10001", "01110"},  // 5
    {"00110", "01000", "10000", "11110", "10001", "10001", "01110"},  // 6
    {"11111", "00001", "00010", "00100", "01000", "01000", "01000"},  // 7
    {"01110", "10001", "10001", "01110", "10001", "10001", "01110"},  // 8
    {"01110", "10001", "10001", "01111", "00001", "00010", "01100"},  // 9
};

constexpr int kGlyphW = 16;
constexpr int kGlyphH = 24;
constexpr int kMargin = 3;

// Nearest-neighbor sample of the 5x7 cell at glyph resolution.
bool glyph_pixel(int digit, int gy, int gx) {
  int sy = gy * 7 / kGlyphH;
  int sx = gx * 5 / kGlyphW;
  return kFont[digit][sy][sx] == '1';
}

double quantize(double v) {
  v = std::clamp(v, 0.0, 1.0);
  return std::round(v * 255.0) / 255.0;
}

std::string sample_name(size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06zu", index);
  return buf;
}

}  // namespace

RawSample render_sample(const RenderSpec& spec, Rng& rng) {
  require(spec.num_digits >= 1 && spec.num_digits <= 5,
          "num_digits must be in 1..5");
  require(spec.noise >= 0.0 && spec.jitter >= 0.0, "bad render spec");

  struct Placement {
    int digit;
    int x0;
    int y0;
  };
  std::vector<Placement> placed;
  int jitter_px = static_cast<int>(std::lround(spec.jitter * 2.0));
  int x = kMargin + (jitter_px > 0 ? rng.uniform_int(jitter_px + 1) : 0);
  for (int i = 0; i < spec.num_digits; ++i) {
    int digit = rng.uniform_int(10);
    int dy = jitter_px > 0 ? rng.uniform_int(2 * jitter_px + 1) - jitter_px : 0;
    int y0 = std::clamp((kFrameHeight - kGlyphH) / 2 + dy, 0,
                        kFrameHeight - kGlyphH);
    placed.push_back({digit, x, y0});
    x += kGlyphW + kMargin +
         (jitter_px > 0 ? rng.uniform_int(jitter_px + 1) : 0);
  }
  int width = x - kMargin + kMargin;  // trailing margin equals the leading one

  RawSample out;
  out.image = Tensor({kFrameHeight, width});
  for (const Placement& p : placed) {
    int lo = width, hi = 0;
    for (int gy = 0; gy < kGlyphH; ++gy) {
      for (int gx = 0; gx < kGlyphW; ++gx) {
        if (!glyph_pixel(p.digit, gy, gx)) continue;
        out.image(p.y0 + gy, p.x0 + gx) = 1.0;
        lo = std::min(lo, p.x0 + gx);
        hi = std::max(hi, p.x0 + gx + 1);
      }
    }
    out.target.push_back(p.digit);
    out.extents.push_back({lo, hi, p.digit});
  }

  if (spec.noise > 0.0) {
    for (size_t i = 0; i < out.image.size(); ++i) {
      out.image[i] += rng.uniform(0.0, spec.noise);
    }
  }
  for (size_t i = 0; i < out.image.size(); ++i) {
    out.image[i] = quantize(out.image[i]);
  }
  return out;
}

Tensor normalize_height(const Tensor& image, int target_height) {
  require(image.ndim() == 2, "expected a [H x W] image");
  int h = image.dim(0), w = image.dim(1);
  if (h == target_height) return image;
  int out_w = std::max(
      1, static_cast<int>(std::lround(static_cast<double>(w) * target_height /
                                      static_cast<double>(h))));
  Tensor out({target_height, out_w});
  for (int y = 0; y < target_height; ++y) {
    int sy = std::min(h - 1, y * h / target_height);
    for (int x = 0; x < out_w; ++x) {
      int sx = std::min(w - 1, x * w / out_w);
      out(y, x) = image(sy, sx);
    }
  }
  return out;
}

std::vector<Frame> frame_sequence(const Tensor& image, int window_w,
                                  int stride) {
  require(image.ndim() == 2 && image.dim(0) == kFrameHeight,
          "frame_sequence expects a height-32 image");
  require(window_w >= 1 && stride >= 1, "bad window/stride");
  const int w = image.dim(1);
  require(w >= 1, "empty image");

  int t_count =
      static_cast<int>(std::ceil(static_cast<double>(std::max(w - window_w, 0)) /
                                 stride)) +
      1;
  std::vector<Frame> frames;
  frames.reserve(static_cast<size_t>(t_count));
  for (int t = 0; t < t_count; ++t) {
    int x0 = t * stride;
    Tensor pixels({1, kFrameHeight, window_w});
    for (int y = 0; y < kFrameHeight; ++y) {
      for (int dx = 0; dx < window_w; ++dx) {
        int x = x0 + dx;
        pixels(0, y, dx) = x < w ? image(y, x) : 0.0;
      }
    }
    frames.push_back(Frame{std::move(pixels)});
  }
  return frames;
}

Standardizer fit_standardizer(const Tensor& features) {
  require(features.ndim() == 2, "expected features as [N x D]");
  const int n = features.dim(0), d = features.dim(1);
  require(n >= 2, "fit_standardizer requires at least two rows");

  Standardizer s;
  s.mean = Tensor({d});
  s.std = Tensor({d});
  for (int j = 0; j < d; ++j) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += features(i, j);
    s.mean(j) = sum / n;
  }
  for (int j = 0; j < d; ++j) {
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
      double dlt = features(i, j) - s.mean(j);
      sq += dlt * dlt;
    }
    s.std(j) = std::max(std::sqrt(sq / n), 1e-8);
  }
  return s;
}

Tensor standardize(const Tensor& features, const Standardizer& s) {
  require(features.ndim() == 2 && features.dim(1) == s.mean.dim(0),
          "feature width mismatch");
  Tensor out = features;
  const int n = out.dim(0), d = out.dim(1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) out(i, j) = (out(i, j) - s.mean(j)) / s.std(j);
  }
  return out;
}

Tensor unstandardize(const Tensor& features, const Standardizer& s) {
  Tensor out = features;
  const int n = out.dim(0), d = out.dim(1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) out(i, j) = out(i, j) * s.std(j) + s.mean(j);
  }
  return out;
}

Dataset generate_dataset(const GenConfig& config) {
  require(config.count >= 1, "dataset count must be positive");
  require(config.digits_min >= 1 && config.digits_max <= 5 &&
              config.digits_min <= config.digits_max,
          "digit count range must lie in 1..5");
  Rng base(config.seed);
  Dataset ds;
  ds.samples.reserve(static_cast<size_t>(config.count));
  for (int i = 0; i < config.count; ++i) {
    Rng rng = base.child(static_cast<uint64_t>(i));
    RenderSpec spec;
    spec.num_digits =
        config.digits_min + rng.uniform_int(config.digits_max - config.digits_min + 1);
    spec.jitter = config.jitter;
    spec.noise = config.noise;
    ds.samples.push_back(render_sample(spec, rng));
  }
  return ds;
}

void write_pgm(const std::string& path, const Tensor& image) {
  require(image.ndim() == 2, "expected a [H x W] image");
  std::ofstream out(path, std::ios::binary);
  if (!out) data_error("cannot open for writing: " + path);
  out << "P5\n" << image.dim(1) << " " << image.dim(0) << "\n255\n";
  std::vector<unsigned char> bytes(image.size());
  for (size_t i = 0; i < image.size(); ++i) {
    bytes[i] = static_cast<unsigned char>(
        std::lround(std::clamp(image[i], 0.0, 1.0) * 255.0));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) data_error("short write: " + path);
}

Tensor read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) data_error("cannot open: " + path);
  std::string magic;
  in >> magic;
  if (magic != "P5") data_error("not a binary PGM: " + path);
  auto next_int = [&]() {
    // skip whitespace and '#' comment lines
    int c;
    while ((c = in.peek()) != EOF) {
      if (c == '#') {
        std::string line;
        std::getline(in, line);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    long long v = -1;
    in >> v;
    if (!in || v < 0) data_error("bad PGM header: " + path);
    return v;
  };
  long long w = next_int();
  long long h = next_int();
  long long maxval = next_int();
  if (maxval != 255) data_error("unsupported PGM maxval: " + path);
  in.get();  // single whitespace after the header
  std::vector<unsigned char> bytes(static_cast<size_t>(w * h));
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    data_error("truncated PGM: " + path);
  }
  Tensor image({static_cast<int>(h), static_cast<int>(w)});
  for (size_t i = 0; i < bytes.size(); ++i) {
    image[i] = static_cast<double>(bytes[i]) / 255.0;
  }
  return image;
}

void save_dataset(const std::string& dir, const Dataset& ds) {
  fs::create_directories(fs::path(dir) / "images");
  std::ofstream labels(fs::path(dir) / "labels.tsv", std::ios::binary);
  std::ofstream extents(fs::path(dir) / "extents.tsv", std::ios::binary);
  if (!labels || !extents) data_error("cannot write dataset to " + dir);

  for (size_t i = 0; i < ds.samples.size(); ++i) {
    const RawSample& s = ds.samples[i];
    std::string name = sample_name(i);
    write_pgm((fs::path(dir) / "images" / (name + ".pgm")).string(), s.image);
    labels << name << "\t";
    for (int d : s.target) labels << static_cast<char>('0' + d);
    labels << "\n";
    if (!s.extents.empty()) {
      extents << name << "\t";
      for (size_t e = 0; e < s.extents.size(); ++e) {
        if (e) extents << ";";
        extents << s.extents[e].start_col << "," << s.extents[e].end_col << ","
                << s.extents[e].cls;
      }
      extents << "\n";
    }
  }
}

Dataset load_dataset(const std::string& dir) {
  std::ifstream labels(fs::path(dir) / "labels.tsv", std::ios::binary);
  if (!labels) data_error("missing labels.tsv in " + dir);

  Dataset ds;
  std::string line;
  int line_no = 0;
  while (std::getline(labels, line)) {
    ++line_no;
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      data_error("labels.tsv line " + std::to_string(line_no) + ": missing tab");
    }
    std::string name = line.substr(0, tab);
    std::string digits = line.substr(tab + 1);
    RawSample s;
    for (char c : digits) {
      if (c < '0' || c > '9') {
        data_error("labels.tsv line " + std::to_string(line_no) +
                   ": non-digit label character");
      }
      s.target.push_back(c - '0');
    }
    s.image = read_pgm((fs::path(dir) / "images" / (name + ".pgm")).string());
    ds.samples.push_back(std::move(s));
  }

  std::ifstream extents(fs::path(dir) / "extents.tsv", std::ios::binary);
  if (extents) {
    line_no = 0;
    while (std::getline(extents, line)) {
      ++line_no;
      if (line.empty()) continue;
      size_t tab = line.find('\t');
      if (tab == std::string::npos) {
        data_error("extents.tsv line " + std::to_string(line_no) + ": missing tab");
      }
      size_t idx = 0;
      try {
        idx = std::stoul(line.substr(0, tab));
      } catch (const std::exception&) {
        data_error("extents.tsv line " + std::to_string(line_no) + ": bad index");
      }
      if (idx >= ds.samples.size()) {
        data_error("extents.tsv line " + std::to_string(line_no) +
                   ": index out of range");
      }
      std::stringstream rest(line.substr(tab + 1));
      std::string item;
      while (std::getline(rest, item, ';')) {
        GlyphExtent e;
        if (std::sscanf(item.c_str(), "%d,%d,%d", &e.start_col, &e.end_col,
                        &e.cls) != 3) {
          data_error("extents.tsv line " + std::to_string(line_no) +
                     ": bad extent triple");
        }
        ds.samples[idx].extents.push_back(e);
      }
    }
  }
  return ds;
}

std::vector<GlyphCrop> glyph_crops(const Dataset& ds) {
  std::vector<GlyphCrop> crops;
  for (const RawSample& s : ds.samples) {
    const int w = s.image.dim(1);
    for (const GlyphExtent& e : s.extents) {
      int center = (e.start_col + e.end_col) / 2;
      int x0 = center - kFrameWidth / 2;
      Tensor pixels({1, kFrameHeight, kFrameWidth});
      for (int y = 0; y < kFrameHeight; ++y) {
        for (int dx = 0; dx < kFrameWidth; ++dx) {
          int x = x0 + dx;
          pixels(0, y, dx) = (x >= 0 && x < w) ? s.image(y, x) : 0.0;
        }
      }
      crops.push_back({Frame{std::move(pixels)}, e.cls});
    }
  }
  return crops;
}

}  // namespace crnn
