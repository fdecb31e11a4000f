#include "pwot/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "pwot/errors.hpp"
#include "pwot/rng.hpp"

namespace pwot {

namespace fs = std::filesystem;

void validate(const ExperimentConfig& cfg) {
  if (cfg.frames_dir.has_value() == cfg.synthetic.has_value()) {
    throw ConfigError("experiment needs exactly one input: a frame directory or a synthetic spec");
  }
  if (cfg.frames_dir && !cfg.slw) throw ConfigError("frame-directory input requires an SLW");
  if (cfg.seeds.empty()) throw ConfigError("experiment needs at least one seed");
  if (!(cfg.corruption >= 0.0 && cfg.corruption <= 1.0)) {
    throw ConfigError("corruption fraction must lie in [0, 1]");
  }
  validate(cfg.tracker);
}

long survived_frames(const std::optional<long>& first_failure, long frame_count) {
  return first_failure ? *first_failure : frame_count;
}

long survived_frames(const RunReport& r, long frame_count) {
  return survived_frames(r.first_failure, frame_count);
}

RunReport run_sequence(const std::vector<FramePixels>& frames, const std::vector<Rect>& truth,
                       const Rect& slw, const TrackerConfig& tracker_cfg, double corruption,
                       std::uint64_t corruption_seed, bool stop_at_first_failure,
                       int warmup_frames, const std::optional<fs::path>& overlay_dir) {
  if (frames.empty()) throw IoError(IoError::Kind::EmptyInput, "no frames to track");
  if (!truth.empty() && truth.size() != frames.size()) {
    throw DimensionError("truth boxes per frame", frames.size(), truth.size());
  }

  Tracker tracker(frames.front(), slw, tracker_cfg);
  if (corruption > 0.0) {
    tracker.set_region_filter([corruption, corruption_seed](std::span<std::uint8_t> bits, long frame,
                                                             Point c) {
      corrupt_bits_in_place(bits, {corruption, derive_seed(corruption_seed,
                                                           static_cast<std::uint64_t>(frame),
                                                           static_cast<std::uint32_t>(c.x),
                                                           static_cast<std::uint32_t>(c.y))});
    });
  }

  RunReport report;
  report.warnings = tracker.warnings();
  report.discriminator_footprint_bits = tracker.discriminator_footprint_bits();
  report.bank_footprint_bits = tracker.bank_footprint_bits();

  auto record = [&](FrameRow row) {
    if (!truth.empty()) {
      row.truth = truth[row.frame];
      row.iou = iou(row.box, *row.truth);
      if (!report.first_failure && *row.iou < 0.5) report.first_failure = row.frame;
    }
    if (overlay_dir) {
      FramePixels overlay = frames[row.frame];
      if (row.truth) draw_box(overlay, *row.truth, {0, 255, 0});
      draw_box(overlay, row.box, {255, 0, 0});
      char name[32];
      std::snprintf(name, sizeof(name), "overlay_%05ld.ppm", row.frame);
      write_ppm(*overlay_dir / name, overlay);
    }
    report.rows.push_back(row);
  };

  FrameRow first;
  first.frame = 0;
  first.box = slw;
  first.r1 = tracker.max_response();
  record(first);

  double et_sum = 0.0, et_all = 0.0;
  int et_count = 0, et_all_count = 0;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (stop_at_first_failure && report.first_failure) break;
    const TrackResult r = tracker.step(frames[i]);
    FrameRow row;
    row.frame = r.frame;
    row.box = r.box;
    row.r1 = r.r1;
    row.r2 = r.r2;
    row.confidence = r.confidence;
    row.low_confidence = r.low_confidence;
    row.wall_ms = r.wall_ms;
    record(row);
    et_all += r.wall_ms;
    ++et_all_count;
    if (r.frame > warmup_frames) {
      et_sum += r.wall_ms;
      ++et_count;
    }
  }
  report.mean_et_ms = et_count > 0 ? et_sum / et_count
                                   : (et_all_count > 0 ? et_all / et_all_count : 0.0);
  return report;
}

namespace {

struct Input {
  std::vector<FramePixels> frames;
  std::vector<Rect> truth;
  Rect slw;
};

Input load_input(const ExperimentConfig& cfg, std::uint64_t seed) {
  Input in;
  if (cfg.frames_dir) {
    in.frames = load_frame_sequence(*cfg.frames_dir).frames;
    in.slw = *cfg.slw;
    return in;
  }
  SyntheticSpec spec = *cfg.synthetic;
  if (cfg.reseed_all) spec.seed = seed;
  SyntheticSequence seq = generate_synthetic_sequence(spec);
  in.frames = std::move(seq.frames);
  in.truth = std::move(seq.truth);
  in.slw = cfg.slw ? *cfg.slw : grow(in.truth.front(), cfg.slw_margin);
  return in;
}

TrackerConfig tracker_for_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  TrackerConfig t = cfg.tracker;
  if (cfg.reseed_all) t.seed = seed;
  return t;
}

std::uint64_t corruption_seed(std::uint64_t seed) { return derive_seed(seed, 0xC0FFEE); }

// Inputs are regenerated only when the seed changes the scene.
class InputCache {
 public:
  explicit InputCache(const ExperimentConfig& cfg) : cfg_(cfg) {}
  const Input& get(std::uint64_t seed) {
    const std::uint64_t key = (cfg_.reseed_all && cfg_.synthetic) ? seed : 0;
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, load_input(cfg_, seed)).first;
    return it->second;
  }

 private:
  const ExperimentConfig& cfg_;
  std::map<std::uint64_t, Input> cache_;
};

std::string fmt(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

void summarize(SweepReport& report) {
  std::map<std::pair<std::string, double>, std::vector<const SweepCell*>> groups;
  std::vector<std::pair<std::string, double>> order;
  for (const auto& c : report.cells) {
    auto key = std::make_pair(c.variant, c.corruption);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&c);
  }
  for (const auto& key : order) {
    const auto& cells = groups[key];
    SweepSummary s;
    s.variant = key.first;
    s.corruption = key.second;
    s.runs = static_cast<int>(cells.size());
    std::vector<long> survived;
    for (const SweepCell* c : cells) {
      s.no_failure += !c->first_failure;
      survived.push_back(survived_frames(c->first_failure, c->frame_count));
    }
    std::sort(survived.begin(), survived.end());
    const auto n = survived.size();
    s.median_survived = n % 2 ? survived[n / 2] : 0.5 * (survived[n / 2 - 1] + survived[n / 2]);
    report.summary.push_back(s);
  }
}

}  // namespace

std::vector<RunReport> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  InputCache inputs(cfg);
  std::vector<RunReport> reports;
  for (std::uint64_t seed : cfg.seeds) {
    const Input& in = inputs.get(seed);
    std::optional<fs::path> overlays;
    if (cfg.dump_overlays && cfg.output) {
      overlays = cfg.output->parent_path() / ("overlays_seed" + std::to_string(seed));
      fs::create_directories(*overlays);
    }
    RunReport r = run_sequence(in.frames, in.truth, in.slw, tracker_for_seed(cfg, seed),
                               cfg.corruption, corruption_seed(seed), cfg.stop_at_first_failure,
                               cfg.warmup_frames, overlays);
    r.seed = seed;
    reports.push_back(std::move(r));
  }
  return reports;
}

std::string to_csv(const RunReport& r, bool include_timing) {
  std::ostringstream out;
  out << "frame,box_x,box_y,box_w,box_h,truth_x,truth_y,truth_w,truth_h,iou,r1,r2,confidence,"
         "low_confidence";
  if (include_timing) out << ",wall_ms";
  out << "\n";
  for (const FrameRow& row : r.rows) {
    out << row.frame << ',' << row.box.x << ',' << row.box.y << ',' << row.box.w << ','
        << row.box.h << ',';
    if (row.truth) {
      out << row.truth->x << ',' << row.truth->y << ',' << row.truth->w << ',' << row.truth->h;
    } else {
      out << ",,,";
    }
    out << ',' << (row.iou ? fmt(*row.iou) : "") << ',' << row.r1 << ',' << row.r2 << ','
        << (row.confidence ? fmt(*row.confidence) : "") << ',' << (row.low_confidence ? 1 : 0);
    if (include_timing) out << ',' << fmt(row.wall_ms, 4);
    out << "\n";
  }
  return out.str();
}

std::string summary_json(const RunReport& r) {
  nlohmann::json j;
  j["seed"] = r.seed;
  j["frames"] = r.rows.size();
  j["first_failure"] = r.first_failure ? nlohmann::json(*r.first_failure) : nlohmann::json(nullptr);
  j["mean_et_ms"] = r.mean_et_ms;
  j["discriminator_footprint_bits"] = r.discriminator_footprint_bits;
  j["peak_memory_estimate_bits"] = r.bank_footprint_bits;
  j["warnings"] = r.warnings;
  return j.dump(2);
}

std::vector<BenchRow> bench_node_sizes(const std::vector<int>& sizes, const ExperimentConfig& base) {
  validate(base);
  InputCache inputs(base);
  const std::uint64_t seed = base.seeds.front();
  const Input& in = inputs.get(seed);
  std::vector<BenchRow> rows;
  for (int n : sizes) {
    TrackerConfig t = tracker_for_seed(base, seed);
    t.parallel = false;
    t.node_size = n;
    const RunReport r = run_sequence(in.frames, in.truth, in.slw, t, base.corruption,
                                     corruption_seed(seed), false, base.warmup_frames);
    BenchRow row;
    row.node_size = n;
    row.mean_et_ms = r.mean_et_ms;
    row.node_footprint_bits = std::uint64_t{1} << n;
    row.discriminator_footprint_bits = r.discriminator_footprint_bits;
    row.bank_footprint_bits = r.bank_footprint_bits;
    row.first_failure = r.first_failure;
    rows.push_back(row);
  }
  return rows;
}

std::string to_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "node_size,mean_et_ms,node_footprint_bits,discriminator_footprint_bits,"
         "bank_footprint_bits,first_failure\n";
  for (const auto& r : rows) {
    out << r.node_size << ',' << fmt(r.mean_et_ms, 4) << ',' << r.node_footprint_bits << ','
        << r.discriminator_footprint_bits << ',' << r.bank_footprint_bits << ','
        << (r.first_failure ? std::to_string(*r.first_failure) : "none") << "\n";
  }
  return out.str();
}

const SweepCell* SweepReport::find(const std::string& variant, double corruption,
                                   std::uint64_t seed) const {
  for (const auto& c : cells) {
    if (c.variant == variant && c.seed == seed && std::abs(c.corruption - corruption) < 1e-12) {
      return &c;
    }
  }
  return nullptr;
}

SweepReport sweep_grids(const std::vector<std::string>& presets,
                        const std::vector<double>& corruptions, const ExperimentConfig& base) {
  validate(base);
  for (const auto& p : presets) preset(p);  // fail fast on unknown names
  InputCache inputs(base);
  SweepReport report;
  for (const auto& name : presets) {
    for (double f : corruptions) {
      for (std::uint64_t seed : base.seeds) {
        const Input& in = inputs.get(seed);
        TrackerConfig t = tracker_for_seed(base, seed);
        t.layout = name;
        t.custom_layout.reset();
        const RunReport r = run_sequence(in.frames, in.truth, in.slw, t, f, corruption_seed(seed),
                                         true, base.warmup_frames);
        report.cells.push_back({name, f, seed, r.first_failure, static_cast<long>(in.frames.size())});
      }
    }
  }
  summarize(report);
  return report;
}

std::string parallel_variant_name(double p) { return "P=" + fmt(p, 2); }

SweepReport sweep_parallel_fraction(const std::vector<double>& fractions,
                                    const std::vector<double>& corruptions,
                                    const ExperimentConfig& base) {
  validate(base);
  for (double p : fractions) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("P values must lie in [0, 1]");
  }
  InputCache inputs(base);
  SweepReport report;
  const ParallelParams pp = base.tracker.parallel_params;

  auto run = [&](const std::string& variant, TrackerConfig t, double f, std::uint64_t seed) {
    const Input& in = inputs.get(seed);
    const RunReport r = run_sequence(in.frames, in.truth, in.slw, t, f, corruption_seed(seed), true,
                                     base.warmup_frames);
    report.cells.push_back({variant, f, seed, r.first_failure, static_cast<long>(in.frames.size())});
  };

  for (double f : corruptions) {
    for (std::uint64_t seed : base.seeds) {
      TrackerConfig single = tracker_for_seed(base, seed);
      single.parallel = false;
      single.node_size = pp.inner_node_size;
      run("N=" + std::to_string(pp.inner_node_size), single, f, seed);
      single.node_size = pp.outer_node_size;
      run("N=" + std::to_string(pp.outer_node_size), single, f, seed);
      for (double p : fractions) {
        TrackerConfig par = tracker_for_seed(base, seed);
        par.parallel = true;
        par.parallel_params.central_fraction = p;
        run(parallel_variant_name(p), par, f, seed);
      }
    }
  }
  summarize(report);
  return report;
}

std::string to_csv(const SweepReport& r) {
  std::ostringstream out;
  out << "variant,corruption,seed,first_failure\n";
  for (const auto& c : r.cells) {
    out << c.variant << ',' << fmt(c.corruption, 4) << ',' << c.seed << ','
        << (c.first_failure ? std::to_string(*c.first_failure) : "none") << "\n";
  }
  return out.str();
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      if (const auto dots = item.find(".."); dots != std::string::npos) {
        const int a = std::stoi(item.substr(0, dots));
        const int b = std::stoi(item.substr(dots + 2));
        if (b < a) throw ConfigError("descending range '" + item + "'");
        for (int v = a; v <= b; ++v) out.push_back(v);
      } else {
        out.push_back(std::stoi(item));
      }
    }
  } catch (const std::logic_error&) {
    throw ConfigError("cannot parse integer list '" + s + "'");
  }
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      // "a..b:step"
      if (const auto dots = item.find(".."); dots != std::string::npos) {
        const auto colon = item.find(':', dots);
        const double a = std::stod(item.substr(0, dots));
        const double b = std::stod(item.substr(dots + 2, colon - dots - 2));
        const double step = colon == std::string::npos ? 0.1 : std::stod(item.substr(colon + 1));
        if (step <= 0.0 || b < a) throw ConfigError("bad range '" + item + "'");
        const int n = static_cast<int>(std::floor((b - a) / step + 1e-9));
        for (int i = 0; i <= n; ++i) out.push_back(std::round((a + i * step) * 1e9) / 1e9);
      } else {
        out.push_back(std::stod(item));
      }
    }
  } catch (const std::logic_error&) {
    throw ConfigError("cannot parse number list '" + s + "'");
  }
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

}  // namespace pwot
