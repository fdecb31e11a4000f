#include "pwot/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "pwot/errors.hpp"
#include "pwot/rng.hpp"

namespace pwot {

namespace {

std::vector<double> waypoint_times(const SyntheticSpec& spec) {
  const auto n = spec.path.size();
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (spec.path[i].frame) {
      t[i] = *spec.path[i].frame;
    } else {
      t[i] = n == 1 ? 0.0 : static_cast<double>(spec.frame_count) * i / (n - 1);
    }
  }
  return t;
}

std::uint8_t sample_channel(Rng& rng, double mean, double stddev) {
  const double v = stddev > 0.0 ? rng.normal(mean, stddev) : mean;
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

std::array<double, 2> path_position(const SyntheticSpec& spec, int frame) {
  if (spec.path.empty()) throw ConfigError("synthetic path has no waypoints");
  const auto t = waypoint_times(spec);
  const double f = frame;
  if (spec.path.size() == 1 || f <= t.front()) return {spec.path.front().x, spec.path.front().y};
  for (std::size_t i = 1; i < spec.path.size(); ++i) {
    if (f <= t[i]) {
      const double span = t[i] - t[i - 1];
      const double a = span > 0.0 ? (f - t[i - 1]) / span : 1.0;
      return {spec.path[i - 1].x + a * (spec.path[i].x - spec.path[i - 1].x),
              spec.path[i - 1].y + a * (spec.path[i].y - spec.path[i - 1].y)};
    }
  }
  return {spec.path.back().x, spec.path.back().y};
}

Rect truth_box(const SyntheticSpec& spec, int frame) {
  const auto p = path_position(spec, frame);
  return rect_centered_at({static_cast<int>(std::lround(p[0])), static_cast<int>(std::lround(p[1]))},
                          spec.target_size);
}

void validate(const SyntheticSpec& spec) {
  if (spec.frame_count < 1) throw ConfigError("synthetic frame_count must be >= 1");
  if (spec.frame_size.width < 1 || spec.frame_size.height < 1) {
    throw ConfigError("synthetic frame size must be positive");
  }
  if (spec.target_size.width < 1 || spec.target_size.height < 1) {
    throw ConfigError("synthetic target size must be positive");
  }
  if (spec.path.empty()) throw ConfigError("synthetic path has no waypoints");
  for (int c = 0; c < 3; ++c) {
    if (spec.background.stddev[c] < 0.0 || spec.target.stddev[c] < 0.0) {
      throw ConfigError("synthetic color distributions need std >= 0");
    }
  }
  if (spec.pixel_noise < 0.0) throw ConfigError("synthetic pixel noise must be >= 0");
  const Rect bounds{0, 0, spec.frame_size.width, spec.frame_size.height};
  for (int f = 0; f < spec.frame_count; ++f) {
    if (!bounds.contains(truth_box(spec, f))) {
      throw ConfigError("synthetic target leaves the frame at frame " + std::to_string(f));
    }
  }
}

SyntheticSequence generate_synthetic_sequence(const SyntheticSpec& spec) {
  validate(spec);
  SyntheticSequence seq;
  seq.frames.reserve(spec.frame_count);
  seq.truth.reserve(spec.frame_count);
  for (int f = 0; f < spec.frame_count; ++f) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(f)));
    const Rect box = truth_box(spec, f);
    FramePixels frame(spec.frame_size.width, spec.frame_size.height);
    for (int y = 0; y < frame.height(); ++y) {
      for (int x = 0; x < frame.width(); ++x) {
        const ColorDistribution& d = box.contains(Point{x, y}) ? spec.target : spec.background;
        Pixel3 px;
        for (int c = 0; c < 3; ++c) {
          const double sd = std::sqrt(d.stddev[c] * d.stddev[c] + spec.pixel_noise * spec.pixel_noise);
          px[c] = sample_channel(rng, d.mean[c], sd);
        }
        frame.set(x, y, px);
      }
    }
    seq.frames.push_back(std::move(frame));
    seq.truth.push_back(box);
  }
  return seq;
}

std::vector<std::string> scene_preset_names() { return {"easy", "low-contrast", "maneuver"}; }

SyntheticSpec scene_preset(const std::string& name, std::uint64_t seed) {
  SyntheticSpec s;
  s.seed = seed;
  s.frame_size = {320, 240};
  s.target_size = {40, 20};
  s.pixel_noise = 3.0;
  if (name == "easy") {
    // Light hull on a dark blue sea, 2 px/frame to the right.
    s.frame_count = 60;
    s.background = {{40, 80, 130}, {6, 6, 6}};
    s.target = {{170, 160, 150}, {6, 6, 6}};
    s.path = {{80, 120, 0.0}, {200, 120, 60.0}};
  } else if (name == "low-contrast") {
    s.frame_count = 60;
    s.background = {{70, 90, 110}, {8, 8, 8}};
    s.target = {{95, 105, 115}, {8, 8, 8}};
    s.path = {{80, 120, 0.0}, {200, 120, 60.0}};
  } else if (name == "maneuver") {
    // Instant direction change halfway through.
    s.frame_count = 50;
    s.background = {{40, 80, 130}, {6, 6, 6}};
    s.target = {{170, 160, 150}, {6, 6, 6}};
    s.path = {{70, 70, 0.0}, {190, 130, 25.0}, {90, 200, 50.0}};
  } else {
    throw ConfigError("unknown synthetic scene '" + name + "' (expected easy, low-contrast, maneuver)");
  }
  return s;
}

}  // namespace pwot
