#pragma once

// Hybrid threshold/edge segmentation: Prewitt-guided band sampling of the
// target, per-channel statistics, six-threshold rules in RGB or YCbCr, and
// region quantization to bit patterns.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pwot/geometry.hpp"
#include "pwot/image.hpp"
#include "pwot/wnn.hpp"

namespace pwot {

enum class Colorspace { Rgb, YCbCr };

std::string to_string(Colorspace cs);
Colorspace colorspace_from_string(const std::string& name);

/// Converts an RGB pixel into the given colorspace's channel order.
inline Pixel3 convert_pixel(Pixel3 rgb, Colorspace cs) {
  return cs == Colorspace::Rgb ? rgb : rgb_to_ycbcr(rgb);
}

struct ChannelStats {
  std::array<double, 3> mean{};
  std::array<double, 3> stddev{};
};

/// Inclusive [lower, upper] range on one channel.
struct ChannelRange {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double v) const { return v >= lower && v <= upper; }
  friend bool operator==(const ChannelRange&, const ChannelRange&) = default;
};

/// Six thresholds as three (upper, lower) pairs: (L1,L2), (L3,L4), (L5,L6).
///
/// RGB pairs act on R, G, B with scales x, y, z. YCbCr pairs act on Cr, Y, Cb
/// with scales x, y, z, in that order.
struct ThresholdSet {
  Colorspace colorspace = Colorspace::Rgb;
  std::array<ChannelRange, 3> pairs{};
  std::array<double, 3> scales{};

  /// Index into the converted pixel that pair i tests.
  static std::array<int, 3> pair_channels(Colorspace cs) {
    return cs == Colorspace::Rgb ? std::array{0, 1, 2} : std::array{2, 0, 1};
  }

  /// True when the pixel (already in this set's colorspace) passes all pairs.
  bool admits(Pixel3 converted) const {
    const auto ch = pair_channels(colorspace);
    return pairs[0].contains(converted[ch[0]]) && pairs[1].contains(converted[ch[1]]) &&
           pairs[2].contains(converted[ch[2]]);
  }
  bool admits_rgb(Pixel3 rgb) const { return admits(convert_pixel(rgb, colorspace)); }

  friend bool operator==(const ThresholdSet&, const ThresholdSet&) = default;
};

struct SampleBands {
  std::array<Point, 4> border{};  // p1 left, p2 right, p3 up, p4 down
  std::vector<Point> target;      // pf
  std::vector<Point> background;  // pw
};

/// 3x3 Prewitt gradient magnitude of grayscale luma at (x, y), with frame
/// coordinates clamped at the border.
double prewitt_magnitude(const FramePixels& frame, int x, int y);

/// Scans left, right, up and down from the SLW center and returns, for each
/// ray, the pixel of maximum Prewitt magnitude inside the SLW. Ties go to the
/// pixel nearest the center. Throws ConfigError for an SLW smaller than 5x5 or
/// not inside the frame.
std::array<Point, 4> prewitt_border_points(const FramePixels& frame, const Rect& slw);

/// Target band pf: segments p1-p2 and p3-p4 with a 2-pixel margin trimmed at
/// each end. Background sample pw: 3-pixel ring just outside the SLW, clipped.
SampleBands sample_bands(const FramePixels& frame, const Rect& slw,
                         const std::array<Point, 4>& border);

/// Pixels of `frame` at `points`, converted to `cs`.
std::vector<Pixel3> gather_pixels(const FramePixels& frame, std::span<const Point> points,
                                  Colorspace cs);

/// Per-channel mean and population standard deviation.
ChannelStats channel_stats(std::span<const Pixel3> pixels);

ThresholdSet thresholds_from_stats(const ChannelStats& stats, Colorspace cs,
                                   std::array<double, 3> scales);

/// RGB rule: mean +/- scale * std per channel, with (x, y, z) chosen from
/// {0.5, 1.0, ..., 4.0}^3 to maximise (pf fraction admitted) - (pw fraction
/// admitted). Ties keep the lexicographically smallest scales.
ThresholdSet thresholds_rgb(std::span<const Pixel3> target, std::span<const Pixel3> background);

/// Separation score used by thresholds_rgb.
double separation_score(const ThresholdSet& t, std::span<const Pixel3> target,
                        std::span<const Pixel3> background);

inline constexpr std::array<double, 3> kDefaultYCbCrScales{3.0, 3.0, 1.5};

/// YCbCr rule: Cr, Y, Cb pairs at mean +/- (x, y, z) * std.
ThresholdSet thresholds_ycbcr(const ChannelStats& stats_ycc,
                              std::array<double, 3> scales = kDefaultYCbCrScales);

/// Multiplies every pair's half-width by the matching factor, keeping the
/// pair's midpoint. Factors > 1 widen the ranges.
ThresholdSet widen(const ThresholdSet& t, std::array<double, 3> factors);

/// One bit per pixel, row-major: 1 iff every pair admits the pixel.
/// Throws ClippingError when the region is not inside the frame.
BitPattern quantize_region(const FramePixels& frame, const Rect& region, const ThresholdSet& t);

struct CorruptionSpec {
  double flip_fraction = 0.0;
  std::uint64_t seed = 0;
};

/// Flips exactly round(flip_fraction * length) distinct positions chosen by a
/// seeded partial Fisher-Yates draw.
BitPattern corrupt_bits(const BitPattern& pattern, const CorruptionSpec& spec);
void corrupt_bits_in_place(std::span<std::uint8_t> bits, const CorruptionSpec& spec);

/// Everything computed from frame 1 to freeze the quantization rule.
struct QuantizerModel {
  std::array<Point, 4> border{};
  SampleBands bands;
  ChannelStats target_stats;
  ChannelStats background_stats;
  ThresholdSet thresholds;
};

/// Bands, statistics and thresholds for the given SLW. For YCbCr the scales
/// are `ycbcr_scales`; for RGB they come from the grid search. `widen_factors`
/// is applied last.
QuantizerModel build_quantizer(const FramePixels& frame, const Rect& slw, Colorspace cs,
                               std::array<double, 3> ycbcr_scales = kDefaultYCbCrScales,
                               std::array<double, 3> widen_factors = {1.0, 1.0, 1.0});

}  // namespace pwot
