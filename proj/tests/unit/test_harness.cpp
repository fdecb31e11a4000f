#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pwot/config.hpp"
#include "pwot/errors.hpp"
#include "pwot/experiment.hpp"
#include "pwot/frame_io.hpp"
#include "pwot/rng.hpp"
#include "pwot/synthetic.hpp"

using namespace pwot;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pwot_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

FramePixels noise_frame(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  FramePixels f(w, h);
  for (auto& b : f.data()) b = static_cast<std::uint8_t>(rng.below(256));
  return f;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("ppm round trip") {
  const auto dir = scratch_dir("ppm");
  const auto f = noise_frame(17, 11, 1);
  write_ppm(dir / "a.ppm", f);
  CHECK(read_ppm(dir / "a.ppm") == f);
  CHECK(read_frame(dir / "a.ppm") == f);
  std::ofstream(dir / "bad.ppm") << "P3\n1 1\n255\n0 0 0\n";
  CHECK_THROWS_AS(read_ppm(dir / "bad.ppm"), IoError);
}

TEST_CASE("frame directory errors") {
  const auto empty = scratch_dir("empty");
  try {
    load_frame_sequence(empty);
    FAIL("expected an error");
  } catch (const IoError& e) {
    CHECK(e.kind() == IoError::Kind::EmptyInput);
  }

  const auto mixed = scratch_dir("mixed");
  write_ppm(mixed / "f0.ppm", noise_frame(10, 10, 1));
  write_ppm(mixed / "f1.ppm", noise_frame(12, 10, 2));
  try {
    load_frame_sequence(mixed);
    FAIL("expected an error");
  } catch (const IoError& e) {
    CHECK(e.kind() == IoError::Kind::DimensionMismatch);
    CHECK(std::string(e.what()).find("f1.ppm") != std::string::npos);
  }

  const auto ok = scratch_dir("ok");
  write_ppm(ok / "b.ppm", noise_frame(8, 6, 2));
  write_ppm(ok / "a.ppm", noise_frame(8, 6, 1));
  std::ofstream(ok / "notes.txt") << "ignored";
  const auto seq = load_frame_sequence(ok);
  REQUIRE(seq.frames.size() == 2);
  CHECK(seq.files[0].filename() == "a.ppm");
  CHECK(seq.frames[0] == noise_frame(8, 6, 1));
}

TEST_CASE("synthetic scenes") {
  const auto spec = scene_preset("easy", 4);
  CHECK(spec.frame_count == 60);
  const auto a = generate_synthetic_sequence(spec);
  const auto b = generate_synthetic_sequence(spec);
  CHECK(a.frames == b.frames);
  CHECK(a.truth == b.truth);
  CHECK(a.frames.size() == 60);
  CHECK(generate_synthetic_sequence(scene_preset("easy", 5)).frames != a.frames);
  for (std::size_t i = 1; i < a.truth.size(); ++i) {
    CHECK(a.truth[i].x - a.truth[i - 1].x == 2);
    CHECK(a.truth[i].y == a.truth[0].y);
    CHECK(a.truth[i].shape() == Shape{40, 20});
  }
  for (const auto& name : scene_preset_names()) CHECK_NOTHROW(validate(scene_preset(name)));

  SyntheticSpec off = spec;
  off.path = {{50, 120, 0.0}, {400, 120, 60.0}};
  try {
    validate(off);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("frame") != std::string::npos);
  }
}

TEST_CASE("report rows and first failure agree") {
  ExperimentConfig cfg;
  cfg.synthetic = scene_preset("easy", 1);
  cfg.synthetic->frame_count = 20;
  cfg.synthetic->path = {{80, 120, 0.0}, {120, 120, 20.0}};
  cfg.tracker.layout = "GP5";
  cfg.seeds = {1, 2};
  const auto reports = run_experiment(cfg);
  REQUIRE(reports.size() == 2);
  for (const auto& r : reports) {
    CHECK(r.rows.size() == 20);
    const auto csv = lines(to_csv(r));
    CHECK(csv.size() == 21);
    CHECK(csv[0] == "frame,box_x,box_y,box_w,box_h,truth_x,truth_y,truth_w,truth_h,iou,r1,r2,confidence,"
                    "low_confidence,wall_ms");
    std::optional<long> first;
    for (const auto& row : r.rows)
      if (!first && *row.iou < 0.5) first = row.frame;
    CHECK(first == r.first_failure);
  }

  // Corruption with a forced failure: stop_at_first_failure truncates the report.
  cfg.corruption = 0.5;
  cfg.stop_at_first_failure = true;
  cfg.seeds = {3};
  const auto broken = run_experiment(cfg).front();
  if (broken.first_failure) CHECK(broken.rows.back().frame == *broken.first_failure);
}

TEST_CASE("reruns produce identical non-timing csv") {
  ExperimentConfig cfg;
  cfg.synthetic = scene_preset("maneuver", 1);
  cfg.synthetic->frame_count = 12;
  cfg.corruption = 0.15;
  cfg.seeds = {9};
  cfg.reseed_all = true;
  const auto a = to_csv(run_experiment(cfg).front(), false);
  const auto b = to_csv(run_experiment(cfg).front(), false);
  CHECK(a == b);
}

TEST_CASE("list parsing") {
  CHECK(parse_int_list("1..4,8") == std::vector<int>{1, 2, 3, 4, 8});
  CHECK(parse_int_list("5") == std::vector<int>{5});
  CHECK_THROWS_AS(parse_int_list("4..1"), ConfigError);
  CHECK_THROWS_AS(parse_int_list("x"), ConfigError);
  const auto d = parse_double_list("0.1..0.3:0.1,0.5");
  REQUIRE(d.size() == 4);
  CHECK(d[0] == doctest::Approx(0.1));
  CHECK(d[2] == doctest::Approx(0.3));
  CHECK(d[3] == doctest::Approx(0.5));
  CHECK(parallel_variant_name(0.4) == "P=0.40");
}

TEST_CASE("config json round trip") {
  TrackerConfig t;
  t.layout = "GP10";
  t.node_size = 5;
  t.parallel = true;
  t.parallel_params = {0.3, 2, 12};
  t.colorspace = Colorspace::YCbCr;
  t.c_min = 0.1;
  t.seed = 77;
  t.kalman.process_noise = 0.5;
  const auto back = tracker_config_from_json(to_json(t));
  CHECK(back.layout == "GP10");
  CHECK(back.node_size == 5);
  CHECK(back.parallel);
  CHECK(back.parallel_params == t.parallel_params);
  CHECK(back.colorspace == Colorspace::YCbCr);
  CHECK(back.seed == 77);
  CHECK(back.kalman.process_noise == 0.5);

  const auto gp11 = preset("GP11");
  CHECK(layout_from_json(to_json(gp11)) == gp11);

  const auto spec = scene_preset("maneuver", 3);
  const auto s2 = synthetic_spec_from_json(to_json(spec));
  CHECK(generate_synthetic_sequence(s2).frames == generate_synthetic_sequence(spec).frames);

  const auto e = experiment_config_from_json(nlohmann::json::parse(
      R"({"input": {"scene": "low-contrast", "seed": 4}, "corruption": 0.2, "seeds": [1, 2, 3],
          "tracker": {"layout": "GP11", "node_size": 3}})"));
  REQUIRE(e.synthetic.has_value());
  CHECK(e.seeds.size() == 3);
  CHECK(e.corruption == 0.2);
  CHECK(e.tracker.layout == "GP11");
  CHECK_THROWS_AS(experiment_config_from_json(nlohmann::json::parse(R"({"tracker": {"node_size": "x"}})")),
                  ConfigError);
}
