// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/core/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "svreid/core/errors.hpp"

namespace svreid {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected integer, got '" + v + "'");
  }
}

float parse_float(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const float x = std::stof(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected real, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on") return true;
  if (v == "0" || v == "false" || v == "off") return false;
  throw ConfigError("config key '" + key + "': expected boolean, got '" + v + "'");
}

std::set<int> parse_int_set(const std::string& key, const std::string& v) {
  std::set<int> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.insert(parse_int(key, trim(item)));
  }
  return out;
}

}  // namespace

FusionMode parse_fusion_mode(const std::string& s) {
  if (s == "off") return FusionMode::off;
  if (s == "none") return FusionMode::none;
  if (s == "ls") return FusionMode::ls;
  if (s == "ls+ll") return FusionMode::ls_ll;
  if (s == "ls+gs") return FusionMode::ls_gs;
  if (s == "full" || s == "ls+ll+gs") return FusionMode::full;
  throw ConfigError("unknown fusion mode '" + s + "' (expected off|none|ls|ls+ll|ls+gs|full)");
}

const char* fusion_mode_name(FusionMode m) {
  switch (m) {
    case FusionMode::off: return "off";
    case FusionMode::none: return "none";
    case FusionMode::ls: return "ls";
    case FusionMode::ls_ll: return "ls+ll";
    case FusionMode::ls_gs: return "ls+gs";
    case FusionMode::full: return "full";
  }
  return "full";
}

void PipelineConfig::validate() const {
  if (tau < 1) throw ConfigError("tau must be >= 1");
  if (!(hanning_threshold >= 0.0f && hanning_threshold < 1.0f))
    throw ConfigError("hanning_threshold must be in [0,1)");
  if (promote_frequency < 1) throw ConfigError("promote_frequency must be >= 1");
  if (global_capacity < 1) throw ConfigError("global_capacity must be >= 1");
  if (pool_capacity <= global_capacity)
    throw ConfigError("pool_capacity must exceed global_capacity");
  if (!(pool_match_threshold >= 0.0f && pool_match_threshold <= 1.0f))
    throw ConfigError("pool_match_threshold must be in [0,1]");
  if (!(nms_iou > 0.0f && nms_iou < 1.0f)) throw ConfigError("nms_iou must be in (0,1)");
  if (!(gate_threshold > 0.0f)) throw ConfigError("gate_threshold must be positive");
  if (max_age < 1) throw ConfigError("max_age must be >= 1");
  if (n_init < 1) throw ConfigError("n_init must be >= 1");
  if (topk < 0) throw ConfigError("topk must be >= 0 (0 selects the proportional default)");
  if (gallery_budget < 1) throw ConfigError("gallery_budget must be >= 1");
  if (!(shot_hist_threshold > 0.0f)) throw ConfigError("shot_hist_threshold must be positive");
  if (query_update_delta < 0.0f) throw ConfigError("query_update_delta must be >= 0");
  if (std::fabs(static_cast<double>(reid_weight) + face_weight - 1.0) > 1e-9)
    throw ConfigError("reid_weight + face_weight must equal 1");
  if (reid_weight < 0.0f || face_weight < 0.0f)
    throw ConfigError("reid_weight and face_weight must be non-negative");
  if (!(query_match_threshold >= 0.0f && query_match_threshold <= 1.0f))
    throw ConfigError("query_match_threshold must be in [0,1]");
  if (!(link_threshold >= -1.0f && link_threshold <= 1.0f))
    throw ConfigError("link_threshold must be in [-1,1]");
  if (sample_stride < 1) throw ConfigError("sample_stride must be >= 1");
  if (!(major_duration_frac >= 0.0f && major_duration_frac <= 1.0f))
    throw ConfigError("major_duration_frac must be in [0,1]");
  if (!(major_area_frac >= 0.0f && major_area_frac <= 1.0f))
    throw ConfigError("major_area_frac must be in [0,1]");
  if (kernel_backend != "auto" && kernel_backend != "scalar" && kernel_backend != "avx2")
    throw ConfigError("kernel_backend must be auto|scalar|avx2");
}

std::string PipelineConfig::serialize() const {
  std::ostringstream os;
  os << "tau=" << tau << "\n";
  os << "hanning_threshold=" << hanning_threshold << "\n";
  os << "promote_frequency=" << promote_frequency << "\n";
  os << "global_capacity=" << global_capacity << "\n";
  os << "pool_capacity=" << pool_capacity << "\n";
  os << "pool_match_threshold=" << pool_match_threshold << "\n";
  os << "nms_iou=" << nms_iou << "\n";
  os << "gate_threshold=" << gate_threshold << "\n";
  os << "max_age=" << max_age << "\n";
  os << "n_init=" << n_init << "\n";
  os << "topk=" << topk << "\n";
  os << "gallery_budget=" << gallery_budget << "\n";
  os << "shot_hist_threshold=" << shot_hist_threshold << "\n";
  os << "query_update_delta=" << query_update_delta << "\n";
  os << "reid_weight=" << reid_weight << "\n";
  os << "face_weight=" << face_weight << "\n";
  os << "query_match_threshold=" << query_match_threshold << "\n";
  os << "query_update=" << (query_update ? 1 : 0) << "\n";
  os << "link_threshold=" << link_threshold << "\n";
  os << "sample_stride=" << sample_stride << "\n";
  os << "major_duration_frac=" << major_duration_frac << "\n";
  os << "major_area_frac=" << major_area_frac << "\n";
  os << "person_classes=";
  bool first = true;
  for (int c : person_classes) {
    if (!first) os << ",";
    os << c;
    first = false;
  }
  os << "\n";
  os << "fusion=" << fusion_mode_name(fusion) << "\n";
  os << "kernel_backend=" << kernel_backend << "\n";
  return os.str();
}

void PipelineConfig::set(const std::string& key, const std::string& value) {
  if (key == "tau") tau = parse_int(key, value);
  else if (key == "hanning_threshold") hanning_threshold = parse_float(key, value);
  else if (key == "promote_frequency") promote_frequency = parse_int(key, value);
  else if (key == "global_capacity") global_capacity = parse_int(key, value);
  else if (key == "pool_capacity") pool_capacity = parse_int(key, value);
  else if (key == "pool_match_threshold") pool_match_threshold = parse_float(key, value);
  else if (key == "nms_iou") nms_iou = parse_float(key, value);
  else if (key == "gate_threshold") gate_threshold = parse_float(key, value);
  else if (key == "max_age") max_age = parse_int(key, value);
  else if (key == "n_init") n_init = parse_int(key, value);
  else if (key == "topk") topk = parse_int(key, value);
  else if (key == "gallery_budget") gallery_budget = parse_int(key, value);
  else if (key == "shot_hist_threshold") shot_hist_threshold = parse_float(key, value);
  else if (key == "query_update_delta") query_update_delta = parse_float(key, value);
  else if (key == "reid_weight") reid_weight = parse_float(key, value);
  else if (key == "face_weight") face_weight = parse_float(key, value);
  else if (key == "query_match_threshold") query_match_threshold = parse_float(key, value);
  else if (key == "query_update") query_update = parse_bool(key, value);
  else if (key == "link_threshold") link_threshold = parse_float(key, value);
  else if (key == "sample_stride") sample_stride = parse_int(key, value);
  else if (key == "major_duration_frac") major_duration_frac = parse_float(key, value);
  else if (key == "major_area_frac") major_area_frac = parse_float(key, value);
  else if (key == "person_classes") person_classes = parse_int_set(key, value);
  else if (key == "fusion") fusion = parse_fusion_mode(value);
  else if (key == "kernel_backend") kernel_backend = value;
  else throw ConfigError("unknown config key '" + key + "'");
}

PipelineConfig PipelineConfig::from_string(const std::string& text) {
  PipelineConfig cfg;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value, got '" + t + "'");
    }
    cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return from_string(ss.str());
}

}  // namespace svreid
