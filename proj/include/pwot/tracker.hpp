#pragma once

// Frame-by-frame tracker: every discriminator is trained on the frame-1 SLW
// pattern; each following frame the layered grid is evaluated around the
// predicted position and the strongest, sufficiently confident response
// reveals the target.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pwot/geometry.hpp"
#include "pwot/grid_layout.hpp"
#include "pwot/image.hpp"
#include "pwot/predictor.hpp"
#include "pwot/quantizer.hpp"
#include "pwot/wnn.hpp"

namespace pwot {

struct TrackerConfig {
  std::string layout = "GP5";
  std::optional<LayoutSpec> custom_layout;  // used instead of `layout` when set
  int node_size = 3;
  bool parallel = false;
  ParallelParams parallel_params;
  std::optional<Colorspace> colorspace;  // defaults to the layout's quantizer
  std::array<double, 3> ycbcr_scales = kDefaultYCbCrScales;
  std::array<double, 3> threshold_widen = {1.0, 1.0, 1.0};
  double c_min = 0.05;
  std::uint64_t seed = 1;
  KalmanParams kalman;
  std::size_t history_capacity = 10;
  double plausibility_factor = 3.0;
  int max_node_size = kDefaultMaxNodeSize;
  /// Upper bound on the discriminator bank's RAM, checked before allocation.
  std::uint64_t max_bank_bytes = std::uint64_t{4} << 30;
};

/// Throws ConfigError on invalid knobs.
void validate(const TrackerConfig& cfg);
LayoutSpec resolve_layout(const TrackerConfig& cfg);
Colorspace resolve_colorspace(const TrackerConfig& cfg);

struct LayerWinner {
  int layer = 0;
  Point center;
  int response = 0;
  friend bool operator==(const LayerWinner&, const LayerWinner&) = default;
};

struct TrackResult {
  long frame = 0;
  Rect box;  // SLW-sized, inside the frame
  Point predicted;
  int r1 = 0;
  int r2 = 0;
  std::optional<double> confidence;
  bool low_confidence = false;
  bool implausible = false;
  std::vector<LayerWinner> layer_winners;
  int evaluated_centers = 0;
  double wall_ms = 0.0;
};

/// (R1 - R2) / R1 over the two largest entries; a repeated maximum gives 0.
/// Empty optional when R1 is 0. Throws ConfigError for fewer than 2 entries.
std::optional<double> confidence(std::span<const int> responses);

double iou(const Rect& a, const Rect& b);
inline bool is_failure(const Rect& reported, const Rect& truth) {
  return iou(reported, truth) < 0.5;
}

class Tracker {
 public:
  /// Post-quantization hook applied to every evaluated region's bits, keyed by
  /// frame index and search-region center. Used to inject quantization errors.
  using RegionFilter = std::function<void(std::span<std::uint8_t> bits, long frame, Point center)>;
  using LowConfidenceHook = std::function<void(const TrackResult&)>;

  /// Builds the quantizer from the SLW, quantizes it and trains the
  /// discriminator on that pattern.
  Tracker(const FramePixels& first_frame, const Rect& slw, TrackerConfig config);

  TrackResult step(const FramePixels& frame);

  void set_region_filter(RegionFilter f) { region_filter_ = std::move(f); }
  void set_low_confidence_hook(LowConfidenceHook h) { low_confidence_hook_ = std::move(h); }

  const TrackerConfig& config() const { return config_; }
  const LayoutSpec& layout() const { return layout_; }
  const QuantizerModel& quantizer() const { return quantizer_; }
  const ThresholdSet& thresholds() const { return quantizer_.thresholds; }
  const BitPattern& training_pattern() const { return training_; }
  Shape slw_size() const { return slw_.shape(); }
  Rect initial_slw() const { return slw_; }
  Point roi_anchor() const { return roi_anchor_; }
  Point last_position() const { return last_position_; }
  const KalmanState& kalman() const { return kalman_; }
  const PositionHistory& history() const { return history_; }
  long frame_index() const { return frame_index_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Response of the shared (dense-layer) discriminator to a region pattern.
  /// Every discriminator in the bank holds the same memory, so this is the
  /// response of any of them.
  int respond(const BitPattern& pattern) const;
  /// Response of the coarse-layer discriminator bound to lattice slot `slot`.
  int respond_slot(std::size_t slot, const BitPattern& pattern) const;
  std::size_t bank_size() const { return bank_.size(); }
  /// Node count, i.e. the response to the training pattern itself.
  int max_response() const;
  /// Logical RAM bits of one discriminator, and of the coarse bank plus the
  /// dense-layer template.
  std::uint64_t discriminator_footprint_bits() const;
  std::uint64_t bank_footprint_bits() const;

  /// Canonical JSON dump of the full state (model memory hashed).
  std::string snapshot() const;

 private:
  using Model = std::variant<Discriminator, ParallelDiscriminator>;

  struct Evaluated {
    Point center;
    int layer = 0;
    int response = 0;
    std::size_t order = 0;
  };

  void quantize_cached(const FramePixels& frame, const Rect& region, BitPattern& out);

  TrackerConfig config_;
  LayoutSpec layout_;
  Rect slw_;
  Shape frame_shape_;
  QuantizerModel quantizer_;
  BitPattern training_;
  Model template_;           // evaluates dense-layer regions
  std::vector<Model> bank_;  // one per coarse-layer lattice slot
  KalmanState kalman_;
  PositionHistory history_;
  Point roi_anchor_;
  Point last_position_;
  long frame_index_ = 0;
  std::vector<std::string> warnings_;
  RegionFilter region_filter_;
  LowConfidenceHook low_confidence_hook_;

  std::vector<std::uint8_t> quant_cache_;  // 0/1, or 2 when not yet quantized this frame
};

}  // namespace pwot
