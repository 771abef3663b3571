// Copyright (c) 2026 The bevkit authors
// SPDX-License-Identifier: Apache-2.0

#include "bevkit/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {

using nlohmann::json;

void check_keys(const json& j, const char* context,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) {
    throw ConfigError(std::string(context) + " must be a JSON object");
  }
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!ok.count(item.key())) {
      throw ConfigError(std::string("unknown config key '") + item.key() +
                        "' in " + context);
    }
  }
}

template <typename T>
void get_to(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

void parse_crop(const json& j, CropBounds& c) {
  check_keys(j, "crop", {"x_min", "x_max", "y_min", "y_max", "z_min", "z_max"});
  get_to(j, "x_min", c.x_min);
  get_to(j, "x_max", c.x_max);
  get_to(j, "y_min", c.y_min);
  get_to(j, "y_max", c.y_max);
  get_to(j, "z_min", c.z_min);
  get_to(j, "z_max", c.z_max);
}

void parse_grid(const json& j, BevGrid& g) {
  check_keys(j, "grid", {"rows", "cols", "resolution", "x_max", "y_max"});
  get_to(j, "rows", g.rows);
  get_to(j, "cols", g.cols);
  get_to(j, "resolution", g.resolution);
  get_to(j, "x_max", g.x_max);
  get_to(j, "y_max", g.y_max);
}

void parse_encoder(const json& j, EncoderParams& e) {
  check_keys(j, "encoder", {"z_min", "z_max", "height3_cuts", "density_norm"});
  get_to(j, "z_min", e.z_min);
  get_to(j, "z_max", e.z_max);
  if (j.contains("height3_cuts")) {
    const auto cuts = j.at("height3_cuts").get<std::vector<double>>();
    if (cuts.size() != 4) {
      throw ConfigError("encoder.height3_cuts needs exactly 4 values");
    }
    std::copy(cuts.begin(), cuts.end(), e.height3_cuts.begin());
  }
  get_to(j, "density_norm", e.density_norm);
}

void parse_fov(const json& j, FovSettings& f) {
  check_keys(j, "fov", {"mode", "wedge_half_angle_deg", "sample_height"});
  get_to(j, "mode", f.mode);
  get_to(j, "wedge_half_angle_deg", f.wedge_half_angle_deg);
  get_to(j, "sample_height", f.sample_height);
}

void parse_range_split(const json& j, RangeSplitParams& r) {
  check_keys(j, "range_split",
             {"label_threshold", "inside_mask_max", "outside_mask_min",
              "inference_boundary"});
  get_to(j, "label_threshold", r.label_threshold);
  get_to(j, "inside_mask_max", r.inside_mask_max);
  get_to(j, "outside_mask_min", r.outside_mask_min);
  get_to(j, "inference_boundary", r.inference_boundary);
}

void parse_difficulty(const json& j, DifficultyTable& t) {
  check_keys(j, "eval.difficulty",
             {"min_bbox_height", "max_occlusion", "max_truncation"});
  auto fill = [&](const char* key, auto member) {
    if (!j.contains(key)) return;
    const auto v = j.at(key).get<std::vector<double>>();
    if (v.size() != t.levels.size()) {
      throw ConfigError(std::string("eval.difficulty.") + key +
                        " needs exactly 3 values");
    }
    for (std::size_t i = 0; i < v.size(); ++i) t.levels[i].*member = v[i];
  };
  fill("min_bbox_height", &DifficultyRule::min_bbox_height);
  fill("max_truncation", &DifficultyRule::max_truncation);
  if (j.contains("max_occlusion")) {
    const auto v = j.at("max_occlusion").get<std::vector<int>>();
    if (v.size() != t.levels.size()) {
      throw ConfigError("eval.difficulty.max_occlusion needs exactly 3 values");
    }
    for (std::size_t i = 0; i < v.size(); ++i) t.levels[i].max_occlusion = v[i];
  }
}

void parse_eval(const json& j, EvalConfig& e) {
  check_keys(j, "eval", {"iou_thresholds", "range_edges", "difficulty"});
  get_to(j, "iou_thresholds", e.iou_thresholds);
  get_to(j, "range_edges", e.range_edges);
  if (j.contains("difficulty")) parse_difficulty(j.at("difficulty"), e.difficulty);
}

void parse_sensor(const json& j, SensorModel& s) {
  check_keys(j, "sensor",
             {"horizontal_resolution_deg", "vertical_resolution_deg",
              "vertical_fov_min_deg", "vertical_fov_max_deg",
              "horizontal_fov_min_deg", "horizontal_fov_max_deg", "mount_height",
              "max_range", "range_noise_sigma"});
  get_to(j, "horizontal_resolution_deg", s.horizontal_resolution_deg);
  get_to(j, "vertical_resolution_deg", s.vertical_resolution_deg);
  get_to(j, "vertical_fov_min_deg", s.vertical_fov_min_deg);
  get_to(j, "vertical_fov_max_deg", s.vertical_fov_max_deg);
  get_to(j, "horizontal_fov_min_deg", s.horizontal_fov_min_deg);
  get_to(j, "horizontal_fov_max_deg", s.horizontal_fov_max_deg);
  get_to(j, "mount_height", s.mount_height);
  get_to(j, "max_range", s.max_range);
  get_to(j, "range_noise_sigma", s.range_noise_sigma);
}

}  // namespace

void FovSettings::validate() const {
  if (mode != "auto" && mode != "camera" && mode != "wedge" && mode != "none") {
    throw ConfigError("fov.mode must be auto, camera, wedge or none, got '" +
                      mode + "'");
  }
  if (!(wedge_half_angle_deg > 0.0 && wedge_half_angle_deg < 180.0)) {
    throw ConfigError("fov.wedge_half_angle_deg must lie in (0, 180)");
  }
}

void ToolConfig::validate() const {
  crop.validate();
  grid.validate();
  encoder.validate();
  fov.validate();
  range_split.validate();
  eval.validate();
  sensor.validate();
  if (!(nms_iou_threshold > 0.0 && nms_iou_threshold < 1.0)) {
    throw ConfigError("nms_iou_threshold must lie in (0, 1)");
  }
  if (workers < 0) throw ConfigError("workers must be non-negative");
}

ToolConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config",
             {"crop", "grid", "encoding", "encoder", "fov", "range_split", "eval",
              "sensor", "nms_iou_threshold", "seed", "workers"});
  ToolConfig c;
  if (j.contains("crop")) parse_crop(j.at("crop"), c.crop);
  if (j.contains("grid")) parse_grid(j.at("grid"), c.grid);
  if (j.contains("encoding")) {
    c.encoding = parse_encoding(j.at("encoding").get<std::string>());
  }
  if (j.contains("encoder")) parse_encoder(j.at("encoder"), c.encoder);
  if (j.contains("fov")) parse_fov(j.at("fov"), c.fov);
  if (j.contains("range_split")) parse_range_split(j.at("range_split"), c.range_split);
  if (j.contains("eval")) parse_eval(j.at("eval"), c.eval);
  if (j.contains("sensor")) parse_sensor(j.at("sensor"), c.sensor);
  get_to(j, "nms_iou_threshold", c.nms_iou_threshold);
  get_to(j, "seed", c.seed);
  get_to(j, "workers", c.workers);
  c.validate();
  return c;
}

ToolConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_json(const ToolConfig& config) {
  json j;
  j["crop"] = {{"x_min", config.crop.x_min}, {"x_max", config.crop.x_max},
               {"y_min", config.crop.y_min}, {"y_max", config.crop.y_max},
               {"z_min", config.crop.z_min}, {"z_max", config.crop.z_max}};
  j["grid"] = {{"rows", config.grid.rows},
               {"cols", config.grid.cols},
               {"resolution", config.grid.resolution},
               {"x_max", config.grid.x_max},
               {"y_max", config.grid.y_max}};
  j["encoding"] = encoding_name(config.encoding);
  j["encoder"] = {{"z_min", config.encoder.z_min},
                  {"z_max", config.encoder.z_max},
                  {"height3_cuts", config.encoder.height3_cuts},
                  {"density_norm", config.encoder.density_norm}};
  j["fov"] = {{"mode", config.fov.mode},
              {"wedge_half_angle_deg", config.fov.wedge_half_angle_deg},
              {"sample_height", config.fov.sample_height}};
  j["range_split"] = {{"label_threshold", config.range_split.label_threshold},
                      {"inside_mask_max", config.range_split.inside_mask_max},
                      {"outside_mask_min", config.range_split.outside_mask_min},
                      {"inference_boundary", config.range_split.inference_boundary}};
  std::vector<double> hgt, trunc;
  std::vector<int> occ;
  for (const DifficultyRule& r : config.eval.difficulty.levels) {
    hgt.push_back(r.min_bbox_height);
    occ.push_back(r.max_occlusion);
    trunc.push_back(r.max_truncation);
  }
  j["eval"] = {{"iou_thresholds", config.eval.iou_thresholds},
               {"range_edges", config.eval.range_edges},
               {"difficulty",
                {{"min_bbox_height", hgt},
                 {"max_occlusion", occ},
                 {"max_truncation", trunc}}}};
  j["sensor"] = {
      {"horizontal_resolution_deg", config.sensor.horizontal_resolution_deg},
      {"vertical_resolution_deg", config.sensor.vertical_resolution_deg},
      {"vertical_fov_min_deg", config.sensor.vertical_fov_min_deg},
      {"vertical_fov_max_deg", config.sensor.vertical_fov_max_deg},
      {"horizontal_fov_min_deg", config.sensor.horizontal_fov_min_deg},
      {"horizontal_fov_max_deg", config.sensor.horizontal_fov_max_deg},
      {"mount_height", config.sensor.mount_height},
      {"max_range", config.sensor.max_range},
      {"range_noise_sigma", config.sensor.range_noise_sigma}};
  j["nms_iou_threshold"] = config.nms_iou_threshold;
  j["seed"] = config.seed;
  j["workers"] = config.workers;
  return j.dump(2) + "\n";
}

}  // namespace bevkit
