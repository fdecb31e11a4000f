#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pwot/geometry.hpp"

namespace pwot {

/// Three 8-bit channels. Channel meaning depends on context (R,G,B or Y,Cb,Cr).
using Pixel3 = std::array<std::uint8_t, 3>;

/// Row-major interleaved RGB frame, 8 bits per channel.
class FramePixels {
 public:
  FramePixels() = default;
  FramePixels(int width, int height);
  FramePixels(int width, int height, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  Shape shape() const { return {width_, height_}; }
  Rect bounds() const { return {0, 0, width_, height_}; }

  Pixel3 at(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set(int x, int y, Pixel3 p) {
    const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    data_[i] = p[0];
    data_[i + 1] = p[1];
    data_[i + 2] = p[2];
  }

  const std::vector<std::uint8_t>& data() const { return data_; }
  std::vector<std::uint8_t>& data() { return data_; }

  friend bool operator==(const FramePixels&, const FramePixels&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// BT.601 full-range, rounded to nearest and clamped. Output order (Y, Cb, Cr).
Pixel3 rgb_to_ycbcr(Pixel3 rgb);
/// Inverse of rgb_to_ycbcr, rounded and clamped.
Pixel3 ycbcr_to_rgb(Pixel3 ycc);

/// Real-valued BT.601 forward map, unrounded.
std::array<double, 3> rgb_to_ycbcr_exact(Pixel3 rgb);

inline double luma(Pixel3 rgb) { return 0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2]; }

}  // namespace pwot
