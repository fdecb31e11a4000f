#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pwot/geometry.hpp"
#include "pwot/image.hpp"

namespace pwot {

/// Binary P6, maxval 255. Throws IoError(Unreadable) on malformed input.
FramePixels read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const FramePixels& frame);

/// 8-bit RGB/RGBA/gray PNG, converted to RGB.
FramePixels read_png(const std::filesystem::path& path);

/// Dispatches on the file signature (P6 or PNG).
FramePixels read_frame(const std::filesystem::path& path);

struct FrameSequence {
  std::vector<std::filesystem::path> files;
  std::vector<FramePixels> frames;
};

/// Every .ppm/.png file in `dir`, in lexicographic name order. Throws IoError
/// with kind EmptyInput, Unreadable or DimensionMismatch.
FrameSequence load_frame_sequence(const std::filesystem::path& dir);

/// One-pixel rectangle outline, clipped to the frame.
void draw_box(FramePixels& frame, const Rect& box, Pixel3 color);

}  // namespace pwot
