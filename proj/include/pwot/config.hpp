#pragma once

// JSON configuration schema. Every key is optional; defaults match the
// C++ structs.
//
// ExperimentConfig:
//   tracker      TrackerConfig object
//   input        {"frames": DIR} | {"synthetic": SyntheticSpec} | {"scene": NAME, "seed": S}
//   slw          [x, y, w, h]
//   slw_margin   int
//   corruption   flip fraction in [0, 1]
//   seeds        [int, ...]
//   reseed_all   bool
//   stop_at_first_failure  bool
//   warmup_frames int
//   output       path of the CSV report
//
// TrackerConfig:
//   layout "GP1".."GP11" | "custom";  custom_layout {name, use_predictor,
//   colorspace, layers: [{rows, cols, sxp, syp, anchor: predicted|top1|top2|top3}]}
//   node_size, parallel {enabled, P, inner_node_size, outer_node_size},
//   colorspace rgb|ycbcr, ycbcr_scales [x,y,z], threshold_widen [x,y,z],
//   c_min, seed, kalman {q, r, initial_covariance}, history_capacity,
//   plausibility_factor, max_node_size, max_bank_mib
//
// SyntheticSpec:
//   preset (optional base scene), frame_size [w,h], frame_count,
//   background/target {mean:[r,g,b], std:[r,g,b]}, target_size [w,h],
//   path [{x, y, frame?}], pixel_noise, seed

#include <json.hpp>

#include "pwot/experiment.hpp"

namespace pwot {

TrackerConfig tracker_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrackerConfig& cfg);

LayoutSpec layout_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LayoutSpec& layout);

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SyntheticSpec& spec);

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

/// Reads and parses a JSON file. Throws ConfigError on I/O or parse errors.
nlohmann::json load_json_file(const std::filesystem::path& path);

}  // namespace pwot
