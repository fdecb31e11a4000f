#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "pwot/errors.hpp"
#include "pwot/quantizer.hpp"
#include "pwot/rng.hpp"
#include "support/oracles.hpp"

using namespace pwot;

namespace {

const Pixel3 kBg{30, 60, 200};
const Pixel3 kFg{220, 180, 40};

std::uint8_t clamp8(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

}  // namespace

TEST_CASE("ycbcr reference points") {
  CHECK(rgb_to_ycbcr({0, 0, 0}) == Pixel3{0, 128, 128});
  CHECK(rgb_to_ycbcr({255, 255, 255}) == Pixel3{255, 128, 128});
}

TEST_CASE("ycbcr agrees with the real-valued map on a seeded sample") {
  Rng rng(601);
  for (int i = 0; i < 100000; ++i) {
    const Pixel3 p{static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
                   static_cast<std::uint8_t>(rng.below(256))};
    const auto got = rgb_to_ycbcr(p);
    const auto ref = oracle::ycbcr_reference(p[0], p[1], p[2]);
    for (int c = 0; c < 3; ++c) REQUIRE(std::abs(got[c] - ref[c]) <= 1.0);
    const auto back = ycbcr_to_rgb(got);
    for (int c = 0; c < 3; ++c) REQUIRE(std::abs(int(back[c]) - int(p[c])) <= 1);
  }
}

TEST_CASE("prewitt magnitude matches explicit kernels") {
  Rng rng(4);
  FramePixels f(12, 9);
  for (auto& b : f.data()) b = static_cast<std::uint8_t>(rng.below(256));
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 12; ++x)
      CHECK(prewitt_magnitude(f, x, y) == doctest::Approx(oracle::prewitt_reference(f, x, y)));
}

TEST_CASE("border points land on the target's edges") {
  auto f = oracle::uniform_frame(100, 80, kBg);
  const Rect target{30, 25, 36, 20};
  oracle::fill_rect(f, target, kFg);
  const Rect slw{22, 18, 52, 34};
  const auto pts = prewitt_border_points(f, slw);
  CHECK(std::abs(pts[0].x - target.x) <= 1);
  CHECK(std::abs(pts[1].x - (target.right() - 1)) <= 1);
  CHECK(std::abs(pts[2].y - target.y) <= 1);
  CHECK(std::abs(pts[3].y - (target.bottom() - 1)) <= 1);
  const Point c = slw.center();
  CHECK(pts[0].y == c.y);
  CHECK(pts[2].x == c.x);
}

TEST_CASE("uniform frame ties resolve to the center") {
  const auto f = oracle::uniform_frame(60, 60, kBg);
  const Rect slw{10, 10, 30, 20};
  for (const Point& p : prewitt_border_points(f, slw)) CHECK(p == slw.center());
}

TEST_CASE("target flush to the SLW keeps points inside") {
  auto f = oracle::uniform_frame(80, 60, kBg);
  const Rect target{20, 20, 30, 16};
  oracle::fill_rect(f, target, kFg);
  for (const Point& p : prewitt_border_points(f, target)) CHECK(target.contains(p));
}

TEST_CASE("degenerate SLW") {
  const auto f = oracle::uniform_frame(40, 40, kBg);
  CHECK_THROWS_AS(prewitt_border_points(f, {5, 5, 4, 10}), ConfigError);
  CHECK_THROWS_AS(prewitt_border_points(f, {30, 30, 20, 20}), ConfigError);
}

TEST_CASE("band margins") {
  const auto f = oracle::uniform_frame(60, 60, kBg);
  const Rect slw{5, 10, 40, 20};
  const auto bands = sample_bands(f, slw, {Point{10, 20}, Point{30, 20}, Point{20, 12}, Point{20, 28}});
  std::set<Point> pf(bands.target.begin(), bands.target.end());
  for (int x = 12; x <= 28; ++x) CHECK(pf.count({x, 20}) == 1);
  CHECK(pf.count({11, 20}) == 0);
  CHECK(pf.count({29, 20}) == 0);
  for (int y = 14; y <= 26; ++y) CHECK(pf.count({20, y}) == 1);
  CHECK(pf.count({20, 13}) == 0);
  // Ring: (w+6)(h+6) - w*h pixels, none inside the SLW.
  CHECK(bands.background.size() == 46u * 26u - 40u * 20u);
  for (const Point& p : bands.background) CHECK_FALSE(slw.contains(p));
}

TEST_CASE("ring at the frame edge is clipped but nonempty") {
  const auto f = oracle::uniform_frame(50, 50, kBg);
  const Rect slw{0, 0, 20, 10};
  const auto bands = sample_bands(f, slw, {Point{2, 5}, Point{17, 5}, Point{10, 1}, Point{10, 8}});
  CHECK(bands.background.size() == 23u * 13u - 20u * 10u);
  for (const Point& p : bands.background) CHECK(f.bounds().contains(p));
}

TEST_CASE("two-tone frame separates pf and pw by color") {
  auto f = oracle::uniform_frame(120, 90, kBg);
  const Rect target{40, 30, 40, 20};
  oracle::fill_rect(f, target, kFg);
  const Rect slw{38, 28, 44, 24};
  const auto model = build_quantizer(f, slw, Colorspace::Rgb);
  for (const Point& p : model.bands.target) CHECK(f.at(p.x, p.y) == kFg);
  for (const Point& p : model.bands.background) CHECK(f.at(p.x, p.y) == kBg);
}

TEST_CASE("channel statistics") {
  const Pixel3 one[] = {{7, 8, 9}};
  const auto s1 = channel_stats(one);
  CHECK(s1.mean == std::array<double, 3>{7, 8, 9});
  CHECK(s1.stddev == std::array<double, 3>{0, 0, 0});
  const Pixel3 two[] = {{10, 10, 10}, {20, 20, 20}};
  const auto s2 = channel_stats(two);
  for (int c = 0; c < 3; ++c) {
    CHECK(s2.mean[c] == doctest::Approx(15));
    CHECK(s2.stddev[c] == doctest::Approx(5));
  }
  CHECK_THROWS(channel_stats(std::span<const Pixel3>{}));

  Rng rng(31);
  std::vector<Pixel3> px;
  const double mu[3] = {100, 140, 60}, sd[3] = {12, 5, 9};
  for (int i = 0; i < 20000; ++i)
    px.push_back({clamp8(rng.normal(mu[0], sd[0])), clamp8(rng.normal(mu[1], sd[1])),
                  clamp8(rng.normal(mu[2], sd[2]))});
  const auto s = channel_stats(px);
  for (int c = 0; c < 3; ++c) {
    // Rounding to integers adds variance 1/12 and shifts nothing on average.
    const double se = sd[c] / std::sqrt(20000.0);
    CHECK(std::abs(s.mean[c] - mu[c]) <= 3 * se + 1e-9);
    CHECK(std::abs(s.stddev[c] - std::sqrt(sd[c] * sd[c] + 1.0 / 12)) <= 3 * sd[c] / std::sqrt(2 * 20000.0));
  }
}

TEST_CASE("rgb grid search") {
  SUBCASE("perfect separation") {
    std::vector<Pixel3> pf(50, Pixel3{120, 120, 120}), pw(50, Pixel3{10, 240, 30});
    const auto t = thresholds_rgb(pf, pw);
    CHECK(t.admits({120, 120, 120}));
    CHECK_FALSE(t.admits({10, 240, 30}));
    CHECK(separation_score(t, pf, pw) == doctest::Approx(1.0));
  }
  SUBCASE("identical distributions tie at the smallest scales") {
    Rng rng(12);
    std::vector<Pixel3> px;
    for (int i = 0; i < 200; ++i)
      px.push_back({clamp8(rng.normal(100, 10)), clamp8(rng.normal(100, 10)), clamp8(rng.normal(100, 10))});
    const auto t = thresholds_rgb(px, px);
    CHECK(t.scales == std::array<double, 3>{0.5, 0.5, 0.5});
    CHECK(separation_score(t, px, px) == doctest::Approx(0.0));
  }
  SUBCASE("shifted background keeps almost all of the target") {
    Rng rng(13);
    const double sd = 6;
    std::vector<Pixel3> pf, pw;
    for (int i = 0; i < 5000; ++i) {
      pf.push_back({clamp8(rng.normal(100, sd)), clamp8(rng.normal(110, sd)), clamp8(rng.normal(90, sd))});
      pw.push_back({clamp8(rng.normal(100 + 6 * sd, sd)), clamp8(rng.normal(110 + 6 * sd, sd)),
                    clamp8(rng.normal(90 + 6 * sd, sd))});
    }
    const auto t = thresholds_rgb(pf, pw);
    const auto admitted = std::count_if(pf.begin(), pf.end(), [&](Pixel3 p) { return t.admits(p); });
    CHECK(static_cast<double>(admitted) / pf.size() >= 0.99);
  }
}

TEST_CASE("ycbcr threshold arithmetic") {
  ChannelStats s;
  s.mean = {128, 120, 100};  // Y, Cb, Cr
  s.stddev = {10, 2, 4};
  const auto t = thresholds_ycbcr(s);
  CHECK(t.colorspace == Colorspace::YCbCr);
  CHECK(t.pairs[0].lower == doctest::Approx(88));
  CHECK(t.pairs[0].upper == doctest::Approx(112));
  CHECK(t.pairs[1].lower == doctest::Approx(98));
  CHECK(t.pairs[1].upper == doctest::Approx(158));
  CHECK(t.pairs[2].lower == doctest::Approx(117));
  CHECK(t.pairs[2].upper == doctest::Approx(123));

  ChannelStats zero;
  zero.mean = {50, 60, 70};
  const auto point = thresholds_ycbcr(zero);
  CHECK(point.admits({50, 60, 70}));
  CHECK_FALSE(point.admits({51, 60, 70}));
  CHECK_FALSE(point.admits({50, 60, 69}));
}

TEST_CASE("ycbcr Cr range covers 3 sigma of gaussian pf") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    std::vector<Pixel3> px;
    for (int i = 0; i < 20000; ++i) px.push_back({clamp8(rng.normal(120, 8)), 128, clamp8(rng.normal(140, 6))});
    const auto t = thresholds_ycbcr(channel_stats(px));
    const auto in = std::count_if(px.begin(), px.end(), [&](Pixel3 p) { return t.pairs[0].contains(p[2]); });
    CHECK(static_cast<double>(in) / px.size() >= 0.995);
  }
}

TEST_CASE("thresholds are always ordered") {
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    ChannelStats s;
    for (int c = 0; c < 3; ++c) {
      s.mean[c] = rng.uniform() * 255;
      s.stddev[c] = rng.uniform() * 40;
    }
    for (auto cs : {Colorspace::Rgb, Colorspace::YCbCr}) {
      const auto t = thresholds_from_stats(s, cs, {rng.uniform() * 4, rng.uniform() * 4, rng.uniform() * 4});
      for (const auto& p : t.pairs) CHECK(p.upper >= p.lower);
      const auto w = widen(t, {rng.uniform() * 3, 1.0, 2.0});
      for (const auto& p : w.pairs) CHECK(p.upper >= p.lower);
    }
  }
}

TEST_CASE("quantize masks") {
  auto f = oracle::uniform_frame(30, 20, kBg);
  const Rect left{0, 0, 15, 20};
  oracle::fill_rect(f, left, kFg);
  const std::vector<Pixel3> fg(10, kFg);
  const auto t = thresholds_from_stats(channel_stats(fg), Colorspace::Rgb, {1, 1, 1});

  const Rect region{5, 2, 20, 10};
  const auto bits = quantize_region(f, region, t);
  CHECK(bits.shape() == region.shape());
  for (int y = 0; y < region.h; ++y)
    for (int x = 0; x < region.w; ++x) CHECK(bits.at(x, y) == (region.x + x < 15 ? 1 : 0));

  CHECK(quantize_region(f, {0, 0, 15, 20}, t).count_ones() == 300);
  CHECK(quantize_region(f, {15, 0, 15, 20}, t).count_ones() == 0);
  CHECK(quantize_region(f, region, t) == bits);
  CHECK_THROWS_AS(quantize_region(f, {20, 0, 15, 5}, t), ClippingError);
  CHECK_THROWS_AS(quantize_region(f, {-1, 0, 5, 5}, t), ClippingError);
}

TEST_CASE("widening never loses ones") {
  Rng rng(45);
  FramePixels f(40, 30);
  for (auto& b : f.data()) b = static_cast<std::uint8_t>(100 + rng.below(60));
  ChannelStats s;
  s.mean = {130, 130, 130};
  s.stddev = {8, 8, 8};
  for (auto cs : {Colorspace::Rgb, Colorspace::YCbCr}) {
    const auto t = thresholds_from_stats(s, cs, {1, 1, 1});
    std::size_t prev = quantize_region(f, f.bounds(), t).count_ones();
    for (double k = 1.25; k <= 4.0; k += 0.25) {
      const auto n = quantize_region(f, f.bounds(), widen(t, {k, k, k})).count_ones();
      CHECK(n >= prev);
      prev = n;
    }
  }
}

TEST_CASE("corruption flips an exact count") {
  Rng rng(6);
  BitPattern p({20, 20});
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<std::uint8_t>(rng.below(2));
  CHECK(corrupt_bits(p, {0.0, 1}) == p);
  const auto all = corrupt_bits(p, {1.0, 1});
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(all[i] == (p[i] ^ 1));
  CHECK(hamming_distance(p, corrupt_bits(p, {0.25, 9})) == 100);
  for (double f = 0.0; f <= 1.0; f += 0.037) {
    const auto expect = static_cast<std::size_t>(std::llround(f * 400));
    CHECK(hamming_distance(p, corrupt_bits(p, {f, 3})) == expect);
  }
  CHECK(corrupt_bits(p, {0.3, 5}) == corrupt_bits(p, {0.3, 5}));
  CHECK_FALSE(corrupt_bits(p, {0.3, 5}) == corrupt_bits(p, {0.3, 6}));
}
