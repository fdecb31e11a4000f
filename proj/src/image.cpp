#include "pwot/image.hpp"

#include <cmath>

#include "pwot/errors.hpp"

namespace pwot {

std::string to_string(const Rect& r) {
  return std::to_string(r.x) + "," + std::to_string(r.y) + "," + std::to_string(r.w) + "," +
         std::to_string(r.h);
}

FramePixels::FramePixels(int width, int height)
    : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height * 3, 0) {
  if (width < 0 || height < 0) throw DimensionError("negative frame size");
}

FramePixels::FramePixels(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  const std::size_t expected = static_cast<std::size_t>(width) * height * 3;
  if (data_.size() != expected) {
    throw DimensionError("frame data length", expected, data_.size());
  }
}

namespace {

std::uint8_t to_channel(double v) {
  const double r = std::round(v);
  return static_cast<std::uint8_t>(r < 0.0 ? 0.0 : (r > 255.0 ? 255.0 : r));
}

}  // namespace

std::array<double, 3> rgb_to_ycbcr_exact(Pixel3 rgb) {
  const double r = rgb[0], g = rgb[1], b = rgb[2];
  return {0.299 * r + 0.587 * g + 0.114 * b,
          128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b,
          128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b};
}

Pixel3 rgb_to_ycbcr(Pixel3 rgb) {
  const auto v = rgb_to_ycbcr_exact(rgb);
  return {to_channel(v[0]), to_channel(v[1]), to_channel(v[2])};
}

Pixel3 ycbcr_to_rgb(Pixel3 ycc) {
  const double y = ycc[0], cb = ycc[1] - 128.0, cr = ycc[2] - 128.0;
  return {to_channel(y + 1.402 * cr), to_channel(y - 0.344136 * cb - 0.714136 * cr),
          to_channel(y + 1.772 * cb)};
}

}  // namespace pwot
