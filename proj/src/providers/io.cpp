// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/providers/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "svreid/core/errors.hpp"

namespace svreid {

namespace {

constexpr char kMagic[4] = {'S', 'V', 'R', 'B'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kMaxDim = 16384;
constexpr std::uint32_t kMaxFrames = 10'000'000;
constexpr std::uint32_t kMaxCandidates = 1'000'000;

class Writer {
 public:
  explicit Writer(const std::string& path) : path_(path), tmp_(path + ".tmp"), out_(tmp_, std::ios::binary) {
    if (!out_) throw FormatError("cannot open for writing: " + path, 0);
  }
  void u32(std::uint32_t v) { out_.write(reinterpret_cast<const char*>(&v), 4); }
  void f32(float v) { out_.write(reinterpret_cast<const char*>(&v), 4); }
  void f32s(const float* p, std::size_t n) {
    out_.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * 4));
  }
  void bytes(const char* p, std::size_t n) { out_.write(p, static_cast<std::streamsize>(n)); }
  void commit() {
    out_.flush();
    if (!out_) throw FormatError("write failed: " + path_, 0);
    out_.close();
    std::filesystem::rename(tmp_, path_);
  }

 private:
  std::string path_;
  std::string tmp_;
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) throw FormatError("cannot open: " + path, 0);
  }
  std::uint64_t offset() const { return offset_; }
  void bytes(char* p, std::size_t n, const char* what) {
    in_.read(p, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw FormatError(std::string("truncated file while reading ") + what, offset_);
    }
    offset_ += n;
  }
  std::uint32_t u32(const char* what) {
    std::uint32_t v = 0;
    bytes(reinterpret_cast<char*>(&v), 4, what);
    return v;
  }
  void f32s(float* p, std::size_t n, const char* what) {
    bytes(reinterpret_cast<char*>(p), n * 4, what);
  }

 private:
  std::ifstream in_;
  std::uint64_t offset_ = 0;
};

void check_finite(const std::vector<float>& values, std::uint64_t offset, const char* what) {
  for (float v : values) {
    if (!std::isfinite(v)) {
      throw FormatError(std::string("non-finite value in ") + what, offset);
    }
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

bool is_header(const std::string& line) {
  return !line.empty() && !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-');
}

double csv_num(const std::vector<std::string>& fields, std::size_t idx, int line_no,
               const std::string& path) {
  try {
    return std::stod(fields.at(idx));
  } catch (const std::exception&) {
    throw FormatError("bad numeric field in " + path + " line " + std::to_string(line_no),
                      static_cast<std::uint64_t>(line_no));
  }
}

}  // namespace

void save_frames(const std::string& path, const std::vector<FrameBundle>& frames) {
  Writer w(path);
  w.bytes(kMagic, 4);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(frames.size()));
  const int channels = frames.empty() ? 0 : frames[0].pyramid[0].channels();
  const int h0 = frames.empty() ? 0 : frames[0].pyramid[0].height();
  const int w0 = frames.empty() ? 0 : frames[0].pyramid[0].width();
  w.u32(static_cast<std::uint32_t>(channels));
  w.u32(static_cast<std::uint32_t>(h0));
  w.u32(static_cast<std::uint32_t>(w0));
  for (const auto& fb : frames) {
    for (int level = 0; level < kPyramidLevels; ++level) {
      const auto& m = fb.pyramid[static_cast<std::size_t>(level)];
      w.f32s(m.values().data(), m.values().size());
    }
    w.u32(static_cast<std::uint32_t>(fb.candidates.size()));
    for (const auto& d : fb.candidates) {
      w.f32(d.box.cx);
      w.f32(d.box.cy);
      w.f32(d.box.w);
      w.f32(d.box.h);
      w.f32(d.confidence);
      w.f32(static_cast<float>(d.class_id));
    }
    w.f32s(fb.rgb_histogram.data(), fb.rgb_histogram.size());
  }
  w.commit();
}

std::vector<FrameBundle> load_frames(const std::string& path) {
  Reader r(path);
  char magic[4] = {};
  r.bytes(magic, 4, "missing magic");
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError("bad magic (expected SVRB)", 0);
  }
  const std::uint32_t version = r.u32("version");
  if (version != kVersion) {
    throw FormatError("unsupported version " + std::to_string(version), 4);
  }
  const std::uint32_t n_frames = r.u32("frame count");
  const std::uint32_t channels = r.u32("channel count");
  const std::uint32_t h0 = r.u32("height");
  const std::uint32_t w0 = r.u32("width");
  if (n_frames > kMaxFrames || channels > kMaxDim || h0 > kMaxDim || w0 > kMaxDim) {
    throw FormatError("implausible header dimensions", r.offset());
  }

  int hs[kPyramidLevels];
  int ws[kPyramidLevels];
  hs[0] = static_cast<int>(h0);
  ws[0] = static_cast<int>(w0);
  for (int level = 1; level < kPyramidLevels; ++level) {
    hs[level] = (hs[level - 1] + 1) / 2;
    ws[level] = (ws[level - 1] + 1) / 2;
  }

  std::vector<FrameBundle> frames;
  frames.reserve(n_frames);
  for (std::uint32_t t = 0; t < n_frames; ++t) {
    FrameBundle fb;
    fb.frame_index = static_cast<int>(t);
    for (int level = 0; level < kPyramidLevels; ++level) {
      std::vector<float> values(static_cast<std::size_t>(channels) * hs[level] * ws[level]);
      const std::uint64_t off = r.offset();
      r.f32s(values.data(), values.size(), "feature grid");
      check_finite(values, off, "feature grid");
      fb.pyramid[static_cast<std::size_t>(level)] = FeatureMap::from_values(
          static_cast<int>(channels), hs[level], ws[level], std::move(values));
    }
    const std::uint32_t n_cand = r.u32("candidate count");
    if (n_cand > kMaxCandidates) {
      throw FormatError("implausible candidate count", r.offset() - 4);
    }
    fb.candidates.reserve(n_cand);
    for (std::uint32_t i = 0; i < n_cand; ++i) {
      float raw[6];
      r.f32s(raw, 6, "candidate");
      Detection d;
      d.box = {raw[0], raw[1], raw[2], raw[3]};
      d.confidence = raw[4];
      d.class_id = static_cast<int>(raw[5]);
      d.frame_index = static_cast<int>(t);
      fb.candidates.push_back(d);
    }
    r.f32s(fb.rgb_histogram.data(), fb.rgb_histogram.size(), "histogram");
    frames.push_back(std::move(fb));
  }
  return frames;
}

void save_ground_truth_csv(const std::string& path, const GroundTruth& gt) {
  std::ostringstream os;
  os << "frame,id,cx,cy,w,h,conf,class,visible\n";
  for (const auto& r : gt.records) {
    os << r.frame_index << "," << r.object_id << "," << r.box.cx << "," << r.box.cy << ","
       << r.box.w << "," << r.box.h << ",1," << r.class_id << "," << (r.visible ? 1 : 0) << "\n";
  }
  atomic_write_text(path, os.str());
}

GroundTruth load_ground_truth_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open: " + path, 0);
  GroundTruth gt;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || (line_no == 1 && is_header(line))) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < 9) {
      throw FormatError("expected 9 CSV fields in " + path + " line " + std::to_string(line_no),
                        static_cast<std::uint64_t>(line_no));
    }
    GroundTruthRecord r;
    r.frame_index = static_cast<int>(csv_num(fields, 0, line_no, path));
    r.object_id = static_cast<int>(csv_num(fields, 1, line_no, path));
    r.box = {static_cast<float>(csv_num(fields, 2, line_no, path)),
             static_cast<float>(csv_num(fields, 3, line_no, path)),
             static_cast<float>(csv_num(fields, 4, line_no, path)),
             static_cast<float>(csv_num(fields, 5, line_no, path))};
    r.class_id = static_cast<int>(csv_num(fields, 7, line_no, path));
    r.visible = csv_num(fields, 8, line_no, path) != 0.0;
    gt.records.push_back(r);
  }
  return gt;
}

void save_detections_csv(const std::string& path, const std::vector<Detection>& dets) {
  std::ostringstream os;
  os << "frame,id,cx,cy,w,h,conf,class,visible\n";
  for (const auto& d : dets) {
    os << d.frame_index << ",-1," << d.box.cx << "," << d.box.cy << "," << d.box.w << ","
       << d.box.h << "," << d.confidence << "," << d.class_id << ",1\n";
  }
  atomic_write_text(path, os.str());
}

std::vector<Detection> load_detections_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open: " + path, 0);
  std::vector<Detection> dets;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || (line_no == 1 && is_header(line))) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < 8) {
      throw FormatError("expected >=8 CSV fields in " + path + " line " + std::to_string(line_no),
                        static_cast<std::uint64_t>(line_no));
    }
    Detection d;
    d.frame_index = static_cast<int>(csv_num(fields, 0, line_no, path));
    d.box = {static_cast<float>(csv_num(fields, 2, line_no, path)),
             static_cast<float>(csv_num(fields, 3, line_no, path)),
             static_cast<float>(csv_num(fields, 4, line_no, path)),
             static_cast<float>(csv_num(fields, 5, line_no, path))};
    d.confidence = static_cast<float>(csv_num(fields, 6, line_no, path));
    d.class_id = static_cast<int>(csv_num(fields, 7, line_no, path));
    dets.push_back(d);
  }
  return dets;
}

void save_tracks_csv(const std::string& path, const std::vector<TrackRecord>& records) {
  std::ostringstream os;
  os << "frame,track_id,cx,cy,w,h,conf,class,shot_id\n";
  for (const auto& r : records) {
    os << r.frame_index << "," << r.track_id << "," << r.box.cx << "," << r.box.cy << ","
       << r.box.w << "," << r.box.h << "," << r.confidence << "," << r.class_id << ","
       << r.shot_id << "\n";
  }
  atomic_write_text(path, os.str());
}

std::vector<TrackRecord> load_tracks_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open: " + path, 0);
  std::vector<TrackRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || (line_no == 1 && is_header(line))) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < 9) {
      throw FormatError("expected 9 CSV fields in " + path + " line " + std::to_string(line_no),
                        static_cast<std::uint64_t>(line_no));
    }
    TrackRecord r;
    r.frame_index = static_cast<int>(csv_num(fields, 0, line_no, path));
    r.track_id = static_cast<int>(csv_num(fields, 1, line_no, path));
    r.box = {static_cast<float>(csv_num(fields, 2, line_no, path)),
             static_cast<float>(csv_num(fields, 3, line_no, path)),
             static_cast<float>(csv_num(fields, 4, line_no, path)),
             static_cast<float>(csv_num(fields, 5, line_no, path))};
    r.confidence = static_cast<float>(csv_num(fields, 6, line_no, path));
    r.class_id = static_cast<int>(csv_num(fields, 7, line_no, path));
    r.shot_id = static_cast<int>(csv_num(fields, 8, line_no, path));
    records.push_back(r);
  }
  return records;
}

void atomic_write_text(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw FormatError("cannot open for writing: " + path, 0);
    f << content;
    f.flush();
    if (!f) throw FormatError("write failed: " + path, 0);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace svreid
