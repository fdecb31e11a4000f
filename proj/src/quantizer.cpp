#include "pwot/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pwot/errors.hpp"
#include "pwot/rng.hpp"

namespace pwot {

std::string to_string(Colorspace cs) { return cs == Colorspace::Rgb ? "rgb" : "ycbcr"; }

Colorspace colorspace_from_string(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "rgb") return Colorspace::Rgb;
  if (lower == "ycbcr") return Colorspace::YCbCr;
  throw ConfigError("unknown colorspace '" + name + "' (expected rgb or ycbcr)");
}

double prewitt_magnitude(const FramePixels& frame, int x, int y) {
  auto g = [&](int dx, int dy) {
    const int xx = std::clamp(x + dx, 0, frame.width() - 1);
    const int yy = std::clamp(y + dy, 0, frame.height() - 1);
    return luma(frame.at(xx, yy));
  };
  const double gx = (g(1, -1) + g(1, 0) + g(1, 1)) - (g(-1, -1) + g(-1, 0) + g(-1, 1));
  const double gy = (g(-1, 1) + g(0, 1) + g(1, 1)) - (g(-1, -1) + g(0, -1) + g(1, -1));
  return std::hypot(gx, gy);
}

std::array<Point, 4> prewitt_border_points(const FramePixels& frame, const Rect& slw) {
  if (slw.w < 5 || slw.h < 5) {
    throw ConfigError("SLW " + to_string(slw) + " smaller than 5x5");
  }
  if (!frame.bounds().contains(slw)) {
    throw ConfigError("SLW " + to_string(slw) + " not inside frame");
  }
  const Point c = slw.center();

  // Strict '>' keeps the first maximum met, which is the one nearest c.
  auto scan = [&](int dx, int dy) {
    Point best = c;
    double best_mag = prewitt_magnitude(frame, c.x, c.y);
    for (Point p{c.x + dx, c.y + dy}; slw.contains(p); p = {p.x + dx, p.y + dy}) {
      const double m = prewitt_magnitude(frame, p.x, p.y);
      if (m > best_mag) {
        best_mag = m;
        best = p;
      }
    }
    return best;
  };
  return {scan(-1, 0), scan(1, 0), scan(0, -1), scan(0, 1)};
}

namespace {

std::vector<Point> rasterize(Point a, Point b) {
  const int dx = b.x - a.x;
  const int dy = b.y - a.y;
  const int steps = std::max(std::abs(dx), std::abs(dy));
  std::vector<Point> out;
  out.reserve(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    if (steps == 0) {
      out.push_back(a);
      break;
    }
    const double t = static_cast<double>(i) / steps;
    out.push_back({a.x + static_cast<int>(std::lround(t * dx)),
                   a.y + static_cast<int>(std::lround(t * dy))});
  }
  return out;
}

std::vector<Point> trimmed(std::vector<Point> seg, std::size_t margin) {
  if (seg.size() <= 2 * margin) return {};
  return {seg.begin() + margin, seg.end() - margin};
}

void append_unique(std::vector<Point>& dst, const std::vector<Point>& src) {
  for (const Point& p : src) {
    if (std::find(dst.begin(), dst.end(), p) == dst.end()) dst.push_back(p);
  }
}

}  // namespace

SampleBands sample_bands(const FramePixels& frame, const Rect& slw,
                         const std::array<Point, 4>& border) {
  for (const Point& p : border) {
    if (!slw.contains(p)) throw ConfigError("border point outside SLW");
  }
  SampleBands bands;
  bands.border = border;

  constexpr std::size_t kMargin = 2;
  const auto h_seg = rasterize(border[0], border[1]);
  const auto v_seg = rasterize(border[2], border[3]);
  append_unique(bands.target, trimmed(h_seg, kMargin));
  append_unique(bands.target, trimmed(v_seg, kMargin));
  if (bands.target.empty()) {
    append_unique(bands.target, h_seg);
    append_unique(bands.target, v_seg);
  }
  if (bands.target.empty()) throw ConfigError("empty target band sample");

  constexpr int kRing = 3;
  const Rect outer = intersect({slw.x - kRing, slw.y - kRing, slw.w + 2 * kRing, slw.h + 2 * kRing},
                               frame.bounds());
  for (int y = outer.y; y < outer.bottom(); ++y) {
    for (int x = outer.x; x < outer.right(); ++x) {
      if (!slw.contains(Point{x, y})) bands.background.push_back({x, y});
    }
  }
  if (bands.background.empty()) {
    throw ConfigError("SLW " + to_string(slw) + " leaves no background ring inside the frame");
  }
  return bands;
}

std::vector<Pixel3> gather_pixels(const FramePixels& frame, std::span<const Point> points,
                                  Colorspace cs) {
  std::vector<Pixel3> out;
  out.reserve(points.size());
  for (const Point& p : points) out.push_back(convert_pixel(frame.at(p.x, p.y), cs));
  return out;
}

ChannelStats channel_stats(std::span<const Pixel3> pixels) {
  if (pixels.empty()) throw ConfigError("channel statistics of an empty pixel list");
  ChannelStats s;
  const double n = static_cast<double>(pixels.size());
  for (int c = 0; c < 3; ++c) {
    double sum = 0.0;
    for (const Pixel3& p : pixels) sum += p[c];
    const double mean = sum / n;
    double sq = 0.0;
    for (const Pixel3& p : pixels) sq += (p[c] - mean) * (p[c] - mean);
    s.mean[c] = mean;
    s.stddev[c] = std::sqrt(sq / n);
  }
  return s;
}

ThresholdSet thresholds_from_stats(const ChannelStats& stats, Colorspace cs,
                                   std::array<double, 3> scales) {
  ThresholdSet t;
  t.colorspace = cs;
  t.scales = scales;
  const auto ch = ThresholdSet::pair_channels(cs);
  for (int i = 0; i < 3; ++i) {
    const double m = stats.mean[ch[i]];
    const double half = std::abs(scales[i]) * stats.stddev[ch[i]];
    t.pairs[i] = {m - half, m + half};
  }
  return t;
}

double separation_score(const ThresholdSet& t, std::span<const Pixel3> target,
                        std::span<const Pixel3> background) {
  auto fraction = [&](std::span<const Pixel3> px) {
    if (px.empty()) return 0.0;
    std::size_t in = 0;
    for (const Pixel3& p : px) in += t.admits(p);
    return static_cast<double>(in) / px.size();
  };
  return fraction(target) - fraction(background);
}

ThresholdSet thresholds_rgb(std::span<const Pixel3> target, std::span<const Pixel3> background) {
  const ChannelStats stats = channel_stats(target);
  ThresholdSet best;
  double best_score = -2.0;
  for (int ix = 1; ix <= 8; ++ix) {
    for (int iy = 1; iy <= 8; ++iy) {
      for (int iz = 1; iz <= 8; ++iz) {
        const ThresholdSet t =
            thresholds_from_stats(stats, Colorspace::Rgb, {0.5 * ix, 0.5 * iy, 0.5 * iz});
        const double score = separation_score(t, target, background);
        if (score > best_score) {
          best_score = score;
          best = t;
        }
      }
    }
  }
  return best;
}

ThresholdSet thresholds_ycbcr(const ChannelStats& stats_ycc, std::array<double, 3> scales) {
  return thresholds_from_stats(stats_ycc, Colorspace::YCbCr, scales);
}

ThresholdSet widen(const ThresholdSet& t, std::array<double, 3> factors) {
  ThresholdSet out = t;
  for (int i = 0; i < 3; ++i) {
    const double mid = 0.5 * (t.pairs[i].lower + t.pairs[i].upper);
    const double half = 0.5 * (t.pairs[i].upper - t.pairs[i].lower) * std::abs(factors[i]);
    out.pairs[i] = {mid - half, mid + half};
    out.scales[i] = t.scales[i] * std::abs(factors[i]);
  }
  return out;
}

BitPattern quantize_region(const FramePixels& frame, const Rect& region, const ThresholdSet& t) {
  if (region.empty() || !frame.bounds().contains(region)) {
    throw ClippingError("region " + to_string(region) + " not inside frame " +
                        to_string(frame.bounds()));
  }
  BitPattern out(region.shape());
  std::size_t i = 0;
  for (int y = region.y; y < region.bottom(); ++y) {
    for (int x = region.x; x < region.right(); ++x) {
      out[i++] = t.admits_rgb(frame.at(x, y)) ? 1 : 0;
    }
  }
  return out;
}

void corrupt_bits_in_place(std::span<std::uint8_t> bits, const CorruptionSpec& spec) {
  const double f = std::clamp(spec.flip_fraction, 0.0, 1.0);
  const auto n = bits.size();
  const auto flips = static_cast<std::size_t>(std::llround(f * static_cast<double>(n)));
  if (flips == 0) return;
  if (flips == n) {
    for (auto& b : bits) b ^= 1u;
    return;
  }
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(spec.seed);
  for (std::size_t i = 0; i < flips; ++i) {
    std::swap(order[i], order[i + rng.below(n - i)]);
    bits[order[i]] ^= 1u;
  }
}

BitPattern corrupt_bits(const BitPattern& pattern, const CorruptionSpec& spec) {
  BitPattern out = pattern;
  corrupt_bits_in_place(out.bits(), spec);
  return out;
}

QuantizerModel build_quantizer(const FramePixels& frame, const Rect& slw, Colorspace cs,
                               std::array<double, 3> ycbcr_scales,
                               std::array<double, 3> widen_factors) {
  QuantizerModel q;
  q.border = prewitt_border_points(frame, slw);
  q.bands = sample_bands(frame, slw, q.border);
  const auto pf = gather_pixels(frame, q.bands.target, cs);
  const auto pw = gather_pixels(frame, q.bands.background, cs);
  q.target_stats = channel_stats(pf);
  q.background_stats = channel_stats(pw);
  q.thresholds = cs == Colorspace::Rgb ? thresholds_rgb(pf, pw)
                                       : thresholds_ycbcr(q.target_stats, ycbcr_scales);
  q.thresholds = widen(q.thresholds, widen_factors);
  return q;
}

}  // namespace pwot
