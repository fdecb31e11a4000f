#pragma once

// Experiment harness: runs the tracker over image or synthetic sequences,
// injects quantization errors, and produces per-frame reports and sweeps.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pwot/frame_io.hpp"
#include "pwot/synthetic.hpp"
#include "pwot/tracker.hpp"

namespace pwot {

struct ExperimentConfig {
  std::optional<std::filesystem::path> frames_dir;
  std::optional<SyntheticSpec> synthetic;
  /// Initial SLW. For synthetic input it defaults to the frame-0 truth box
  /// grown by slw_margin.
  std::optional<Rect> slw;
  int slw_margin = 2;
  TrackerConfig tracker;
  double corruption = 0.0;
  /// One run per seed. A seed always drives the corruption masks; with
  /// reseed_all it also replaces the synthetic scene seed and the mapping seed.
  std::vector<std::uint64_t> seeds{1};
  bool reseed_all = false;
  bool stop_at_first_failure = false;
  int warmup_frames = 3;
  std::optional<std::filesystem::path> output;
  bool dump_overlays = false;
};

void validate(const ExperimentConfig& cfg);

struct FrameRow {
  long frame = 0;
  Rect box;
  std::optional<Rect> truth;
  std::optional<double> iou;
  int r1 = 0;
  int r2 = 0;
  std::optional<double> confidence;
  bool low_confidence = false;
  double wall_ms = 0.0;
};

struct RunReport {
  std::uint64_t seed = 0;
  std::vector<FrameRow> rows;
  std::optional<long> first_failure;  // frame index, none when never below 0.5 IoU
  double mean_et_ms = 0.0;
  std::uint64_t discriminator_footprint_bits = 0;
  std::uint64_t bank_footprint_bits = 0;
  std::vector<std::string> warnings;
};

/// Frames survived: first_failure, or the number of frames when none.
long survived_frames(const RunReport& r, long frame_count);
long survived_frames(const std::optional<long>& first_failure, long frame_count);

/// Tracks one sequence. Frame 0 initializes the tracker with `slw`; its row
/// reports the SLW itself. `truth` may be empty (no IoU columns).
RunReport run_sequence(const std::vector<FramePixels>& frames, const std::vector<Rect>& truth,
                       const Rect& slw, const TrackerConfig& tracker, double corruption,
                       std::uint64_t corruption_seed, bool stop_at_first_failure = false,
                       int warmup_frames = 3,
                       const std::optional<std::filesystem::path>& overlay_dir = std::nullopt);

std::vector<RunReport> run_experiment(const ExperimentConfig& cfg);

/// CSV with header. Column order:
/// frame,box_x,box_y,box_w,box_h,truth_x,truth_y,truth_w,truth_h,iou,r1,r2,
/// confidence,low_confidence[,wall_ms]
std::string to_csv(const RunReport& r, bool include_timing = true);
std::string summary_json(const RunReport& r);

struct BenchRow {
  int node_size = 0;
  double mean_et_ms = 0.0;
  std::uint64_t node_footprint_bits = 0;  // 2^N, one RAM node
  std::uint64_t discriminator_footprint_bits = 0;
  std::uint64_t bank_footprint_bits = 0;
  std::optional<long> first_failure;
};

/// One run per node size on the same input (first seed of `base`).
std::vector<BenchRow> bench_node_sizes(const std::vector<int>& sizes, const ExperimentConfig& base);
std::string to_csv(const std::vector<BenchRow>& rows);

struct SweepCell {
  std::string variant;  // preset name, or "P=0.40", "N=3", "N=15"
  double corruption = 0.0;
  std::uint64_t seed = 0;
  std::optional<long> first_failure;
  long frame_count = 0;
};

struct SweepSummary {
  std::string variant;
  double corruption = 0.0;
  int runs = 0;
  int no_failure = 0;
  double median_survived = 0.0;
};

struct SweepReport {
  std::vector<SweepCell> cells;
  std::vector<SweepSummary> summary;

  const SweepCell* find(const std::string& variant, double corruption, std::uint64_t seed) const;
};

/// Cross product presets x corruption fractions x seeds.
SweepReport sweep_grids(const std::vector<std::string>& presets,
                        const std::vector<double>& corruptions, const ExperimentConfig& base);

/// Parallel tracker (inner/outer node sizes from base.tracker.parallel_params)
/// for every P, plus single-network baselines at the inner and outer node
/// sizes, for every corruption fraction and seed. Uses base's layout.
SweepReport sweep_parallel_fraction(const std::vector<double>& fractions,
                                    const std::vector<double>& corruptions,
                                    const ExperimentConfig& base);

std::string to_csv(const SweepReport& r);
std::string parallel_variant_name(double p);

/// Parses "a..b" ranges and comma lists: "1..4,8" -> {1,2,3,4,8}.
std::vector<int> parse_int_list(const std::string& s);
std::vector<double> parse_double_list(const std::string& s);

}  // namespace pwot
