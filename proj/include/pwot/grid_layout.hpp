#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pwot/geometry.hpp"
#include "pwot/quantizer.hpp"

namespace pwot {

/// Where a layer's lattice is centered each frame.
struct Anchor {
  enum class Kind { PredictedPosition, TopResponse };
  Kind kind = Kind::PredictedPosition;
  int rank = 0;  // 1..3 for TopResponse

  static Anchor predicted() { return {}; }
  static Anchor top_response(int rank) { return {Kind::TopResponse, rank}; }
  friend bool operator==(const Anchor&, const Anchor&) = default;
};

std::string to_string(const Anchor& a);
Anchor anchor_from_string(const std::string& s);

struct LayerSpec {
  int rows = 1;
  int cols = 1;
  int sxp = 1;  // center spacing along x, pixels
  int syp = 1;  // center spacing along y, pixels
  Anchor anchor;

  int count() const { return rows * cols; }
  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Ordered discriminator layers. Layer 0 is the coarse grid; later layers are
/// dense grids around the predicted position or the coarse top responses.
struct LayoutSpec {
  std::string name;
  std::vector<LayerSpec> layers;
  /// When false the coarse layer is centered on the last reported position
  /// instead of the Kalman prediction.
  bool use_predictor = true;
  /// Quantizer the preset was published with.
  Colorspace colorspace = Colorspace::Rgb;

  int center_count() const;
  friend bool operator==(const LayoutSpec&, const LayoutSpec&) = default;
};

/// Throws ConfigError if rows/cols/spacing are < 1, there are no layers, or a
/// TopResponse anchor has a rank outside 1..3 or sits on the coarse layer.
void validate(const LayoutSpec& layout);

/// GP1 ... GP11. Throws ConfigError naming the valid presets otherwise.
LayoutSpec preset(const std::string& name);
std::vector<std::string> preset_names();

struct Center {
  Point pos;
  int layer = 0;
  friend bool operator==(const Center&, const Center&) = default;
};

using CenterSet = std::vector<Center>;

/// rows x cols lattice whose centroid is the anchor, rounded toward negative
/// infinity when the extent is odd. Row-major order.
CenterSet instantiate_layer(const LayerSpec& layer, Point anchor, int layer_id = 0);

/// Bounding box of all lattice points of the layer around `anchor`.
Rect lattice_extent(const LayerSpec& layer, Point anchor);

/// Bounding rectangle of the search regions (slw-sized, centered at each
/// center). Not clipped.
Rect roi_of(const CenterSet& centers, Shape slw);

/// Moves `anchor` so every search region of the layer lies inside `frame`.
/// When the layer cannot fit on an axis, the lattice is aligned to the
/// frame's top-left on that axis.
Point clip_anchor(const LayerSpec& layer, Point anchor, Shape slw, const Rect& frame);

}  // namespace pwot
