#include "pwot/config.hpp"

#include <fstream>

#include "pwot/errors.hpp"

namespace pwot {

using nlohmann::json;

namespace {

std::array<double, 3> triple(const json& j, const char* key, std::array<double, 3> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 3) {
    throw ConfigError(std::string("'") + key + "' must be an array of three numbers");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

Shape shape_of(const json& j, const char* key, Shape fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2) {
    throw ConfigError(std::string("'") + key + "' must be [width, height]");
  }
  return {v[0].get<int>(), v[1].get<int>()};
}

ColorDistribution color_of(const json& j, const ColorDistribution& fallback) {
  return {triple(j, "mean", fallback.mean), triple(j, "std", fallback.stddev)};
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
}

}  // namespace

LayoutSpec layout_from_json(const json& j) {
  return guarded([&] {
    LayoutSpec l;
    l.name = j.value("name", std::string("custom"));
    l.use_predictor = j.value("use_predictor", true);
    l.colorspace = colorspace_from_string(j.value("colorspace", std::string("ycbcr")));
    for (const auto& lj : j.at("layers")) {
      LayerSpec s;
      s.rows = lj.value("rows", 1);
      s.cols = lj.value("cols", 1);
      s.sxp = lj.value("sxp", 1);
      s.syp = lj.value("syp", 1);
      s.anchor = anchor_from_string(lj.value("anchor", std::string("predicted")));
      l.layers.push_back(s);
    }
    validate(l);
    return l;
  });
}

json to_json(const LayoutSpec& l) {
  json j{{"name", l.name}, {"use_predictor", l.use_predictor},
         {"colorspace", to_string(l.colorspace)}, {"layers", json::array()}};
  for (const auto& s : l.layers) {
    j["layers"].push_back({{"rows", s.rows}, {"cols", s.cols}, {"sxp", s.sxp}, {"syp", s.syp},
                           {"anchor", to_string(s.anchor)}});
  }
  return j;
}

TrackerConfig tracker_config_from_json(const json& j) {
  return guarded([&] {
    TrackerConfig c;
    c.layout = j.value("layout", c.layout);
    if (j.contains("custom_layout")) c.custom_layout = layout_from_json(j.at("custom_layout"));
    if (c.layout == "custom" && !c.custom_layout) {
      throw ConfigError("layout 'custom' requires a custom_layout object");
    }
    c.node_size = j.value("node_size", c.node_size);
    if (j.contains("parallel")) {
      const auto& p = j.at("parallel");
      c.parallel = p.value("enabled", true);
      c.parallel_params.central_fraction = p.value("P", c.parallel_params.central_fraction);
      c.parallel_params.inner_node_size = p.value("inner_node_size", c.parallel_params.inner_node_size);
      c.parallel_params.outer_node_size = p.value("outer_node_size", c.parallel_params.outer_node_size);
    }
    if (j.contains("colorspace")) c.colorspace = colorspace_from_string(j.at("colorspace"));
    c.ycbcr_scales = triple(j, "ycbcr_scales", c.ycbcr_scales);
    c.threshold_widen = triple(j, "threshold_widen", c.threshold_widen);
    c.c_min = j.value("c_min", c.c_min);
    c.seed = j.value("seed", c.seed);
    if (j.contains("kalman")) {
      const auto& k = j.at("kalman");
      c.kalman.process_noise = k.value("q", c.kalman.process_noise);
      c.kalman.measurement_noise = k.value("r", c.kalman.measurement_noise);
      c.kalman.initial_covariance = k.value("initial_covariance", c.kalman.initial_covariance);
    }
    c.history_capacity = j.value("history_capacity", c.history_capacity);
    c.plausibility_factor = j.value("plausibility_factor", c.plausibility_factor);
    c.max_node_size = j.value("max_node_size", c.max_node_size);
    if (j.contains("max_bank_mib")) c.max_bank_bytes = j.at("max_bank_mib").get<std::uint64_t>() << 20;
    validate(c);
    return c;
  });
}

json to_json(const TrackerConfig& c) {
  json j{{"layout", c.custom_layout ? std::string("custom") : c.layout},
         {"node_size", c.node_size},
         {"parallel",
          {{"enabled", c.parallel},
           {"P", c.parallel_params.central_fraction},
           {"inner_node_size", c.parallel_params.inner_node_size},
           {"outer_node_size", c.parallel_params.outer_node_size}}},
         {"colorspace", to_string(resolve_colorspace(c))},
         {"ycbcr_scales", c.ycbcr_scales},
         {"threshold_widen", c.threshold_widen},
         {"c_min", c.c_min},
         {"seed", c.seed},
         {"kalman",
          {{"q", c.kalman.process_noise},
           {"r", c.kalman.measurement_noise},
           {"initial_covariance", c.kalman.initial_covariance}}},
         {"history_capacity", c.history_capacity},
         {"plausibility_factor", c.plausibility_factor},
         {"max_node_size", c.max_node_size},
         {"max_bank_mib", c.max_bank_bytes >> 20}};
  if (c.custom_layout) j["custom_layout"] = to_json(*c.custom_layout);
  return j;
}

SyntheticSpec synthetic_spec_from_json(const json& j) {
  return guarded([&] {
    SyntheticSpec s = j.contains("preset") ? scene_preset(j.at("preset").get<std::string>())
                                           : SyntheticSpec{};
    s.frame_size = shape_of(j, "frame_size", s.frame_size);
    s.frame_count = j.value("frame_count", s.frame_count);
    if (j.contains("background")) s.background = color_of(j.at("background"), s.background);
    if (j.contains("target")) s.target = color_of(j.at("target"), s.target);
    s.target_size = shape_of(j, "target_size", s.target_size);
    if (j.contains("path")) {
      s.path.clear();
      for (const auto& w : j.at("path")) {
        Waypoint p{w.at("x").get<double>(), w.at("y").get<double>(), std::nullopt};
        if (w.contains("frame")) p.frame = w.at("frame").get<double>();
        s.path.push_back(p);
      }
    }
    s.pixel_noise = j.value("pixel_noise", s.pixel_noise);
    s.seed = j.value("seed", s.seed);
    validate(s);
    return s;
  });
}

json to_json(const SyntheticSpec& s) {
  json path = json::array();
  for (const auto& w : s.path) {
    json p{{"x", w.x}, {"y", w.y}};
    if (w.frame) p["frame"] = *w.frame;
    path.push_back(p);
  }
  return {{"frame_size", {s.frame_size.width, s.frame_size.height}},
          {"frame_count", s.frame_count},
          {"background", {{"mean", s.background.mean}, {"std", s.background.stddev}}},
          {"target", {{"mean", s.target.mean}, {"std", s.target.stddev}}},
          {"target_size", {s.target_size.width, s.target_size.height}},
          {"path", path},
          {"pixel_noise", s.pixel_noise},
          {"seed", s.seed}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  return guarded([&] {
    ExperimentConfig c;
    if (j.contains("tracker")) c.tracker = tracker_config_from_json(j.at("tracker"));
    if (j.contains("input")) {
      const auto& in = j.at("input");
      if (in.contains("frames")) c.frames_dir = in.at("frames").get<std::string>();
      if (in.contains("synthetic")) c.synthetic = synthetic_spec_from_json(in.at("synthetic"));
      if (in.contains("scene")) {
        c.synthetic = scene_preset(in.at("scene").get<std::string>(), in.value("seed", 1ULL));
      }
    }
    if (j.contains("slw")) {
      const auto& v = j.at("slw");
      if (!v.is_array() || v.size() != 4) throw ConfigError("'slw' must be [x, y, w, h]");
      c.slw = Rect{v[0].get<int>(), v[1].get<int>(), v[2].get<int>(), v[3].get<int>()};
    }
    c.slw_margin = j.value("slw_margin", c.slw_margin);
    c.corruption = j.value("corruption", c.corruption);
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    c.reseed_all = j.value("reseed_all", c.reseed_all);
    c.stop_at_first_failure = j.value("stop_at_first_failure", c.stop_at_first_failure);
    c.warmup_frames = j.value("warmup_frames", c.warmup_frames);
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    return c;
  });
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
}

}  // namespace pwot
