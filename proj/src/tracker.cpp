#include "pwot/tracker.hpp"

#include <algorithm>
#include <chrono>
#include <map>

#include <json.hpp>

#include "pwot/errors.hpp"

namespace pwot {

void validate(const TrackerConfig& cfg) {
  if (!(cfg.c_min >= 0.0 && cfg.c_min < 1.0)) throw ConfigError("c_min must lie in [0, 1)");
  auto check_node = [&](int n) {
    if (n < 1 || n > cfg.max_node_size) {
      throw ConfigError("node size " + std::to_string(n) + " outside supported range [1, " +
                        std::to_string(cfg.max_node_size) + "]");
    }
  };
  if (cfg.parallel) {
    check_node(cfg.parallel_params.inner_node_size);
    check_node(cfg.parallel_params.outer_node_size);
    const double p = cfg.parallel_params.central_fraction;
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("central fraction P must lie in [0, 1]");
  } else {
    check_node(cfg.node_size);
  }
  if (cfg.history_capacity < 1) throw ConfigError("history capacity must be >= 1");
  if (cfg.kalman.measurement_noise < 0.0 || cfg.kalman.process_noise < 0.0) {
    throw ConfigError("Kalman noise scales must be non-negative");
  }
  validate(resolve_layout(cfg));
}

LayoutSpec resolve_layout(const TrackerConfig& cfg) {
  return cfg.custom_layout ? *cfg.custom_layout : preset(cfg.layout);
}

Colorspace resolve_colorspace(const TrackerConfig& cfg) {
  return cfg.colorspace ? *cfg.colorspace : resolve_layout(cfg).colorspace;
}

std::optional<double> confidence(std::span<const int> responses) {
  if (responses.size() < 2) throw ConfigError("confidence needs at least two responses");
  int r1 = std::numeric_limits<int>::min();
  int r2 = std::numeric_limits<int>::min();
  for (int r : responses) {
    if (r > r1) {
      r2 = r1;
      r1 = r;
    } else if (r > r2) {
      r2 = r;
    }
  }
  if (r1 <= 0) return std::nullopt;
  return static_cast<double>(r1 - r2) / r1;
}

double iou(const Rect& a, const Rect& b) {
  const Rect i = intersect(a, b);
  const double inter = static_cast<double>(i.empty() ? 0 : i.area());
  const double uni = static_cast<double>(a.area() + b.area()) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

namespace {

std::variant<Discriminator, ParallelDiscriminator> make_model(Shape region,
                                                              const TrackerConfig& cfg) {
  if (cfg.parallel) {
    return ParallelDiscriminator(region, cfg.parallel_params, cfg.seed, cfg.max_node_size);
  }
  return Discriminator(make_input_mapping(region.area(), cfg.node_size, cfg.seed,
                                          cfg.max_node_size));
}

Rect checked_slw(const FramePixels& frame, const Rect& slw, const TrackerConfig& cfg) {
  validate(cfg);
  if (slw.empty() || !frame.bounds().contains(slw)) {
    throw ConfigError("SLW " + to_string(slw) + " not inside frame " + to_string(frame.bounds()));
  }
  const int min_area = cfg.parallel ? 1 : cfg.node_size;
  if (slw.area() < min_area) {
    throw ConfigError("SLW area smaller than node size");
  }
  return slw;
}

Point round_point(const Eigen::Vector2d& v) {
  return {static_cast<int>(std::lround(v.x())), static_cast<int>(std::lround(v.y()))};
}

std::int64_t dist2(Point a, Point b) {
  const std::int64_t dx = a.x - b.x;
  const std::int64_t dy = a.y - b.y;
  return dx * dx + dy * dy;
}

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes, std::uint64_t h = 1469598103934665603ULL) {
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

Tracker::Tracker(const FramePixels& first_frame, const Rect& slw, TrackerConfig config)
    : config_(std::move(config)),
      layout_(resolve_layout(config_)),
      slw_(checked_slw(first_frame, slw, config_)),
      frame_shape_(first_frame.shape()),
      quantizer_(build_quantizer(first_frame, slw_, resolve_colorspace(config_),
                                 config_.ycbcr_scales, config_.threshold_widen)),
      training_(quantize_region(first_frame, slw_, quantizer_.thresholds)),
      template_(make_model(slw_.shape(), config_)),
      kalman_(slw_.center().x, slw_.center().y, config_.kalman),
      history_(config_.history_capacity),
      roi_anchor_(slw_.center()),
      last_position_(slw_.center()) {
  std::visit([&](auto& m) { m.train(training_); }, template_);
  const std::size_t slots = layout_.layers.front().count();
  const std::uint64_t bank_bytes = discriminator_footprint_bits() / 8 * (slots + 1);
  if (bank_bytes > config_.max_bank_bytes) {
    throw ConfigError("discriminator bank needs " + std::to_string(bank_bytes >> 20) +
                      " MiB, above the configured limit of " +
                      std::to_string(config_.max_bank_bytes >> 20) + " MiB");
  }
  bank_.reserve(slots);
  for (std::size_t i = 0; i < slots; ++i) {
    bank_.push_back(make_model(slw_.shape(), config_));
    std::visit([&](auto& m) { m.train(training_); }, bank_.back());
  }
  history_.push({0, static_cast<double>(last_position_.x), static_cast<double>(last_position_.y)});

  const std::size_t ones = training_.count_ones();
  if (ones == 0 || ones == training_.size()) {
    warnings_.push_back(std::string("training pattern is all ") + (ones == 0 ? "zeros" : "ones") +
                        "; the target model is uninformative");
  }
}

int Tracker::respond(const BitPattern& pattern) const {
  return std::visit([&](const auto& m) { return m.respond(pattern); }, template_);
}

int Tracker::respond_slot(std::size_t slot, const BitPattern& pattern) const {
  return std::visit([&](const auto& m) { return m.respond(pattern); }, bank_.at(slot));
}

int Tracker::max_response() const {
  return std::visit([](const auto& m) { return static_cast<int>(m.node_count()); }, template_);
}

std::uint64_t Tracker::discriminator_footprint_bits() const {
  return std::visit([](const auto& m) { return m.memory_footprint_bits(); }, template_);
}

std::uint64_t Tracker::bank_footprint_bits() const {
  return discriminator_footprint_bits() * (bank_.size() + 1);
}

void Tracker::quantize_cached(const FramePixels& frame, const Rect& region, BitPattern& out) {
  const ThresholdSet& t = quantizer_.thresholds;
  std::size_t i = 0;
  for (int y = region.y; y < region.bottom(); ++y) {
    std::uint8_t* row = quant_cache_.data() + static_cast<std::size_t>(y) * frame.width();
    for (int x = region.x; x < region.right(); ++x) {
      std::uint8_t& bit = row[x];
      if (bit == 2) bit = t.admits_rgb(frame.at(x, y)) ? 1 : 0;
      out[i++] = bit;
    }
  }
}

TrackResult Tracker::step(const FramePixels& frame) {
  const auto t0 = std::chrono::steady_clock::now();
  if (frame.shape() != frame_shape_) {
    throw DimensionError("frame size differs from the first frame", frame_shape_.area(),
                         frame.shape().area());
  }
  ++frame_index_;
  quant_cache_.assign(frame_shape_.area(), 2);

  TrackResult result;
  result.frame = frame_index_;

  const Eigen::Vector2d kalman_prediction = kalman_.predict();
  const Point predicted = layout_.use_predictor ? round_point(kalman_prediction) : last_position_;
  result.predicted = predicted;

  const Shape slw = slw_.shape();
  const Rect bounds = frame.bounds();

  std::map<Point, std::size_t> seen;  // center -> index into `evaluated`
  std::vector<Evaluated> evaluated;
  BitPattern region_bits(slw);

  auto evaluate_layer = [&](int layer_id, Point anchor) {
    const LayerSpec& spec = layout_.layers[layer_id];
    const Point clipped = clip_anchor(spec, anchor, slw, bounds);
    if (layer_id == 0) roi_anchor_ = clipped;
    std::optional<LayerWinner> best;
    const CenterSet centers = instantiate_layer(spec, clipped, layer_id);
    for (std::size_t slot = 0; slot < centers.size(); ++slot) {
      const Center& c = centers[slot];
      const Rect region = rect_centered_at(c.pos, slw);
      if (!bounds.contains(region)) continue;
      int response;
      if (auto it = seen.find(c.pos); it != seen.end()) {
        response = evaluated[it->second].response;
      } else {
        quantize_cached(frame, region, region_bits);
        if (region_filter_) region_filter_(region_bits.bits(), frame_index_, c.pos);
        response = layer_id == 0 ? respond_slot(slot, region_bits) : respond(region_bits);
        seen.emplace(c.pos, evaluated.size());
        evaluated.push_back({c.pos, layer_id, response, evaluated.size()});
      }
      if (!best || response > best->response ||
          (response == best->response && dist2(c.pos, predicted) < dist2(best->center, predicted))) {
        best = LayerWinner{layer_id, c.pos, response};
      }
    }
    if (best) result.layer_winners.push_back(*best);
  };

  auto ranked = [&](std::vector<Evaluated> v) {
    std::stable_sort(v.begin(), v.end(), [&](const Evaluated& a, const Evaluated& b) {
      if (a.response != b.response) return a.response > b.response;
      const auto da = dist2(a.center, predicted);
      const auto db = dist2(b.center, predicted);
      if (da != db) return da < db;
      return a.order < b.order;
    });
    return v;
  };

  evaluate_layer(0, predicted);
  if (evaluated.empty()) {
    throw TrackingLostError("no search region fits inside the frame at frame " +
                            std::to_string(frame_index_));
  }
  const std::vector<Evaluated> coarse_ranking = ranked(evaluated);

  for (int layer_id = 1; layer_id < static_cast<int>(layout_.layers.size()); ++layer_id) {
    const Anchor& a = layout_.layers[layer_id].anchor;
    if (a.kind == Anchor::Kind::PredictedPosition) {
      evaluate_layer(layer_id, predicted);
    } else if (a.rank <= static_cast<int>(coarse_ranking.size())) {
      evaluate_layer(layer_id, coarse_ranking[a.rank - 1].center);
    }
  }

  const std::vector<Evaluated> all = ranked(evaluated);
  result.evaluated_centers = static_cast<int>(all.size());
  const Evaluated& winner = all.front();
  result.r1 = winner.response;
  // The runner-up is the best region that would count as a different target
  // position (IoU < 0.5 with the winner's region). Immediate neighbours of the
  // winner overlap it almost entirely and are not competitors.
  const Rect winner_region = rect_centered_at(winner.center, slw);
  const auto rival = std::find_if(all.begin() + 1, all.end(), [&](const Evaluated& e) {
    return iou(rect_centered_at(e.center, slw), winner_region) < 0.5;
  });
  result.r2 = rival != all.end() ? rival->response : 0;
  const int pair[2] = {result.r1, result.r2};
  result.confidence = confidence(pair);

  result.implausible =
      !plausible_displacement(predicted, winner.center, slw, config_.plausibility_factor);
  const bool accepted = result.r1 > 0 && result.confidence &&
                        *result.confidence >= config_.c_min && !result.implausible;
  result.low_confidence = !accepted;

  if (accepted) {
    result.box = rect_centered_at(winner.center, slw);
    last_position_ = winner.center;
    history_.push({frame_index_, static_cast<double>(winner.center.x),
                   static_cast<double>(winner.center.y)});
    kalman_.update({static_cast<double>(winner.center.x), static_cast<double>(winner.center.y)});
  } else {
    result.box = shift_inside(rect_centered_at(predicted, slw), bounds);
    last_position_ = result.box.center();
  }

  result.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (result.low_confidence && low_confidence_hook_) low_confidence_hook_(result);
  return result;
}

std::string Tracker::snapshot() const {
  using nlohmann::json;
  json j;
  j["layout"] = layout_.name;
  j["slw"] = {slw_.x, slw_.y, slw_.w, slw_.h};
  j["frame_index"] = frame_index_;
  j["roi_anchor"] = {roi_anchor_.x, roi_anchor_.y};
  j["last_position"] = {last_position_.x, last_position_.y};
  const ThresholdSet& t = quantizer_.thresholds;
  j["colorspace"] = to_string(t.colorspace);
  for (const auto& p : t.pairs) j["thresholds"].push_back({p.lower, p.upper});
  j["scales"] = t.scales;
  j["training_hash"] = fnv1a(training_.bits());

  // The model is trained on one pattern, so its memory is determined by the
  // mapping and the cells at the training addresses.
  std::uint64_t h = 1469598103934665603ULL;
  auto hash_disc = [&](const Discriminator& d, std::span<const std::uint8_t> bits) {
    const auto& a = d.mapping().assignment;
    h = fnv1a({reinterpret_cast<const std::uint8_t*>(a.data()), a.size() * sizeof(a[0])}, h);
    for (std::size_t n = 0; n < d.node_count(); ++n) {
      const std::uint64_t addr = d.address_of(n, bits);
      const std::uint8_t cell = d.cell(n, addr);
      h = fnv1a({reinterpret_cast<const std::uint8_t*>(&addr), sizeof(addr)}, h);
      h = fnv1a({&cell, 1}, h);
    }
  };
  auto hash_model = [&](const Model& model) {
    std::visit(
        [&](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, Discriminator>) {
            hash_disc(m, training_.bits());
          } else {
            if (m.inner()) hash_disc(*m.inner(), project_bits(training_, m.partition().inner));
            if (m.outer()) hash_disc(*m.outer(), project_bits(training_, m.partition().outer));
          }
        },
        model);
  };
  hash_model(template_);
  for (const Model& m : bank_) hash_model(m);
  j["bank_size"] = bank_.size();
  j["model_hash"] = h;
  j["kalman_state"] = std::vector<double>(kalman_.state().data(), kalman_.state().data() + 4);
  j["kalman_cov"] =
      std::vector<double>(kalman_.covariance().data(), kalman_.covariance().data() + 16);
  for (const auto& e : history_.entries()) j["history"].push_back({e.frame, e.x, e.y});
  return j.dump();
}

}  // namespace pwot
