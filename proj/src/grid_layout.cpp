#include "pwot/grid_layout.hpp"

#include <algorithm>

#include "pwot/errors.hpp"

namespace pwot {

namespace {

int floor_div(int a, int b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }

}  // namespace

std::string to_string(const Anchor& a) {
  if (a.kind == Anchor::Kind::PredictedPosition) return "predicted";
  return "top" + std::to_string(a.rank);
}

Anchor anchor_from_string(const std::string& s) {
  if (s == "predicted") return Anchor::predicted();
  if (s == "top1") return Anchor::top_response(1);
  if (s == "top2") return Anchor::top_response(2);
  if (s == "top3") return Anchor::top_response(3);
  throw ConfigError("unknown anchor '" + s + "' (expected predicted, top1, top2, top3)");
}

int LayoutSpec::center_count() const {
  int n = 0;
  for (const auto& l : layers) n += l.count();
  return n;
}

void validate(const LayoutSpec& layout) {
  if (layout.layers.empty()) throw ConfigError("layout '" + layout.name + "' has no layers");
  for (std::size_t i = 0; i < layout.layers.size(); ++i) {
    const LayerSpec& l = layout.layers[i];
    if (l.rows < 1 || l.cols < 1 || l.sxp < 1 || l.syp < 1) {
      throw ConfigError("layout '" + layout.name + "' layer " + std::to_string(i) +
                        ": rows, cols and spacings must be >= 1");
    }
    if (l.anchor.kind == Anchor::Kind::TopResponse) {
      if (i == 0) throw ConfigError("the coarse layer cannot be anchored at a top response");
      if (l.anchor.rank < 1 || l.anchor.rank > 3) {
        throw ConfigError("top-response anchor rank must be 1, 2 or 3");
      }
    }
  }
}

std::vector<std::string> preset_names() {
  return {"GP1", "GP2", "GP3", "GP4", "GP5", "GP6", "GP7", "GP8", "GP9", "GP10", "GP11"};
}

LayoutSpec preset(const std::string& name) {
  const LayerSpec coarse{20, 20, 5, 5, Anchor::predicted()};
  auto dense10 = [](Anchor a) { return LayerSpec{10, 10, 2, 2, a}; };
  auto dense5 = [](Anchor a) { return LayerSpec{5, 5, 1, 1, a}; };

  LayoutSpec l;
  l.name = name;
  if (name == "GP1") {
    l.layers = {{12, 12, 2, 2, Anchor::predicted()}};
    l.use_predictor = false;
  } else if (name == "GP2") {
    l.layers = {{20, 20, 2, 2, Anchor::predicted()}};
    l.use_predictor = false;
  } else if (name == "GP3") {
    l.layers = {{30, 30, 2, 2, Anchor::predicted()}};
    l.use_predictor = false;
  } else if (name == "GP4") {
    l.layers = {coarse};
    l.use_predictor = false;
  } else if (name == "GP5") {
    l.layers = {coarse};
  } else if (name == "GP6" || name == "GP7" || name == "GP8") {
    l.layers = {coarse, dense10(Anchor::predicted())};
  } else if (name == "GP9") {
    l.layers = {coarse, dense5(Anchor::predicted())};
  } else if (name == "GP10") {
    l.layers = {coarse, dense10(Anchor::predicted()), dense10(Anchor::top_response(1)),
                dense10(Anchor::top_response(2)), dense10(Anchor::top_response(3))};
  } else if (name == "GP11") {
    l.layers = {coarse, dense5(Anchor::predicted()), dense5(Anchor::top_response(1)),
                dense5(Anchor::top_response(2)), dense5(Anchor::top_response(3))};
  } else {
    std::string valid;
    for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError("unknown layout preset '" + name + "'; valid presets: " + valid);
  }
  // GP7 introduced the YCbCr quantizer; every later preset keeps it.
  const bool ycbcr = name == "GP7" || name == "GP8" || name == "GP9" || name == "GP10" ||
                     name == "GP11";
  l.colorspace = ycbcr ? Colorspace::YCbCr : Colorspace::Rgb;
  return l;
}

Rect lattice_extent(const LayerSpec& layer, Point anchor) {
  const int span_x = (layer.cols - 1) * layer.sxp;
  const int span_y = (layer.rows - 1) * layer.syp;
  // first = floor(anchor - span / 2)
  const int x0 = anchor.x + floor_div(-span_x, 2);
  const int y0 = anchor.y + floor_div(-span_y, 2);
  return {x0, y0, span_x + 1, span_y + 1};
}

CenterSet instantiate_layer(const LayerSpec& layer, Point anchor, int layer_id) {
  const Rect ext = lattice_extent(layer, anchor);
  CenterSet out;
  out.reserve(layer.count());
  for (int r = 0; r < layer.rows; ++r) {
    for (int c = 0; c < layer.cols; ++c) {
      out.push_back({{ext.x + c * layer.sxp, ext.y + r * layer.syp}, layer_id});
    }
  }
  return out;
}

Rect roi_of(const CenterSet& centers, Shape slw) {
  if (centers.empty()) return {};
  Rect roi = rect_centered_at(centers.front().pos, slw);
  for (const Center& c : centers) roi = bounding_union(roi, rect_centered_at(c.pos, slw));
  return roi;
}

Point clip_anchor(const LayerSpec& layer, Point anchor, Shape slw, const Rect& frame) {
  const Rect ext = lattice_extent(layer, anchor);
  const Rect first = rect_centered_at({ext.x, ext.y}, slw);
  const Rect roi{first.x, first.y, ext.w - 1 + slw.width, ext.h - 1 + slw.height};
  const Rect moved = shift_inside(roi, frame);
  return {anchor.x + (moved.x - roi.x), anchor.y + (moved.y - roi.y)};
}

}  // namespace pwot
