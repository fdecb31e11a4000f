#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pwot/geometry.hpp"
#include "pwot/image.hpp"

namespace pwot {

struct ColorDistribution {
  std::array<double, 3> mean{};
  std::array<double, 3> stddev{};
};

/// Target center at a given time. Waypoints without an explicit frame are
/// spread evenly so that the first sits at frame 0 and the last at
/// frame_count.
struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> frame;
};

struct SyntheticSpec {
  Shape frame_size{320, 240};
  int frame_count = 60;
  ColorDistribution background;
  ColorDistribution target;
  Shape target_size{40, 20};
  std::vector<Waypoint> path;
  double pixel_noise = 0.0;
  std::uint64_t seed = 1;
};

struct SyntheticSequence {
  std::vector<FramePixels> frames;
  std::vector<Rect> truth;  // target rectangle per frame
};

/// Real-valued target center at frame index `frame`.
std::array<double, 2> path_position(const SyntheticSpec& spec, int frame);

/// Target rectangle at frame index `frame`.
Rect truth_box(const SyntheticSpec& spec, int frame);

/// Throws ConfigError naming the first frame whose target leaves the frame,
/// or for an empty path, negative stds, or a non-positive frame count.
void validate(const SyntheticSpec& spec);

SyntheticSequence generate_synthetic_sequence(const SyntheticSpec& spec);

/// "easy", "low-contrast" or "maneuver".
SyntheticSpec scene_preset(const std::string& name, std::uint64_t seed = 1);
std::vector<std::string> scene_preset_names();

/// The truth box grown by `margin` pixels on every side.
inline Rect grow(const Rect& r, int margin) {
  return {r.x - margin, r.y - margin, r.w + 2 * margin, r.h + 2 * margin};
}

}  // namespace pwot
