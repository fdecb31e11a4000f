// pwot: command-line front end for tracking, synthetic scenes, benchmarks and
// robustness sweeps.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pwot/config.hpp"
#include "pwot/errors.hpp"
#include "pwot/experiment.hpp"

namespace fs = std::filesystem;
using namespace pwot;

namespace {

int verbosity() {
  const char* v = std::getenv("PWOT_VERBOSE");
  return v ? std::atoi(v) : 0;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError(IoError::Kind::WriteFailed, "cannot write " + path.string());
  out << text;
}

void emit(const std::optional<std::string>& out, const std::string& text) {
  if (out) {
    write_text(*out, text);
  } else {
    std::cout << text;
  }
}

Rect parse_rect(const std::string& s) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stoi(item));
  if (v.size() != 4) throw ConfigError("--slw expects X,Y,W,H");
  return {v[0], v[1], v[2], v[3]};
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (int v : parse_int_list(s)) out.push_back(static_cast<std::uint64_t>(v));
  return out;
}

// Writes one CSV per run plus a JSON summary. With several runs the seed is
// appended to the file stem.
void write_reports(const std::vector<RunReport>& reports, const std::optional<std::string>& out) {
  for (const auto& r : reports) {
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    if (!out) {
      std::cout << to_csv(r);
      std::cerr << summary_json(r) << "\n";
      continue;
    }
    fs::path csv(*out);
    if (reports.size() > 1) {
      csv.replace_filename(csv.stem().string() + "_seed" + std::to_string(r.seed) +
                           csv.extension().string());
    }
    write_text(csv, to_csv(r));
    fs::path summary = csv;
    summary.replace_extension(".json");
    write_text(summary, summary_json(r));
    if (verbosity() > 0) std::cerr << "wrote " << csv << " and " << summary << "\n";
  }
}

struct CommonOptions {
  std::optional<std::string> config;
  std::optional<std::string> scene;
  std::optional<std::string> layout;
  std::optional<std::string> colorspace;
  std::optional<int> node_size;
  std::optional<double> corruption;
  std::optional<std::string> seeds;
  std::optional<std::string> out;
  std::optional<int> max_node_size;
  bool reseed_all = false;

  void add_to(CLI::App* app) {
    app->add_option("--config", config, "JSON experiment config");
    app->add_option("--scene", scene, "synthetic scene: easy, low-contrast, maneuver");
    app->add_option("--layout", layout, "grid preset GP1..GP11");
    app->add_option("--colorspace", colorspace, "rgb or ycbcr");
    app->add_option("--node-size", node_size, "RAM node address width N");
    app->add_option("--corruption", corruption, "bit flip fraction per region");
    app->add_option("--seeds", seeds, "seed list, e.g. 1..5");
    app->add_option("--max-node-size", max_node_size, "node size guard (default 24)");
    app->add_flag("--reseed-all", reseed_all, "seeds also vary scene and mapping");
    app->add_option("--out", out, "output path");
  }

  ExperimentConfig build(const std::string& default_scene) const {
    ExperimentConfig cfg;
    if (config) cfg = experiment_config_from_json(load_json_file(*config));
    if (scene || (!cfg.synthetic && !cfg.frames_dir)) {
      cfg.synthetic = scene_preset(scene.value_or(default_scene));
      cfg.frames_dir.reset();
    }
    if (layout) cfg.tracker.layout = *layout, cfg.tracker.custom_layout.reset();
    if (colorspace) cfg.tracker.colorspace = colorspace_from_string(*colorspace);
    if (node_size) cfg.tracker.node_size = *node_size;
    if (max_node_size) cfg.tracker.max_node_size = *max_node_size;
    if (corruption) cfg.corruption = *corruption;
    if (seeds) cfg.seeds = parse_seeds(*seeds);
    if (reseed_all) cfg.reseed_all = true;
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel WiSARD object tracker"};
  app.require_subcommand(1);

  // track
  auto* track = app.add_subcommand("track", "track a target through an image sequence");
  std::string frames_dir, slw_text;
  std::optional<std::string> track_config, track_out;
  bool dump_overlays = false;
  track->add_option("--frames", frames_dir, "directory of .ppm/.png frames")->required();
  track->add_option("--slw", slw_text, "initial selection window X,Y,W,H")->required();
  track->add_option("--config", track_config, "JSON experiment/tracker config");
  track->add_option("--out", track_out, "CSV report path");
  track->add_flag("--dump-overlays", dump_overlays, "write annotated PPM frames next to --out");

  // run
  auto* run = app.add_subcommand("run", "run an experiment config (synthetic or frames)");
  std::string run_config;
  std::optional<std::string> run_out;
  run->add_option("--config", run_config, "JSON experiment config")->required();
  run->add_option("--out", run_out, "CSV report path");
  bool run_overlays = false;
  run->add_flag("--dump-overlays", run_overlays, "write annotated PPM frames next to --out");

  // synth
  auto* synth = app.add_subcommand("synth", "write a synthetic sequence with ground truth");
  std::optional<std::string> synth_spec, synth_scene;
  std::optional<std::uint64_t> synth_seed;
  std::string synth_out;
  synth->add_option("--spec", synth_spec, "JSON synthetic spec");
  synth->add_option("--scene", synth_scene, "scene preset: easy, low-contrast, maneuver");
  synth->add_option("--seed", synth_seed, "scene seed");
  synth->add_option("--out", synth_out, "output directory")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "execution time and memory per node size");
  std::string sizes_text = "1..20";
  CommonOptions bench_opts;
  bench->add_option("--sizes", sizes_text, "node sizes, e.g. 1..20 or 2,3,8");
  bench_opts.add_to(bench);

  // sweep-grids
  auto* sweep_g = app.add_subcommand("sweep-grids", "first-failure frame per preset and corruption");
  std::string presets_text = "GP8,GP9,GP10,GP11", corr_text = "0,0.1,0.2";
  CommonOptions grid_opts;
  sweep_g->add_option("--presets", presets_text, "comma-separated presets");
  sweep_g->add_option("--corruptions", corr_text, "comma list or a..b:step");
  grid_opts.add_to(sweep_g);

  // sweep-parallel
  auto* sweep_p = app.add_subcommand("sweep-parallel", "parallel discriminator central fraction sweep");
  std::string p_text = "0.1..0.9:0.1", pcorr_text = "0.2";
  CommonOptions par_opts;
  int inner = 3, outer = 15;
  sweep_p->add_option("--P", p_text, "central fractions");
  sweep_p->add_option("--corruptions", pcorr_text, "corruption fractions");
  sweep_p->add_option("--inner-node-size", inner, "node size of the central network");
  sweep_p->add_option("--outer-node-size", outer, "node size of the peripheral network");
  par_opts.add_to(sweep_p);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*track) {
      ExperimentConfig cfg;
      if (track_config) {
        const auto j = load_json_file(*track_config);
        cfg = j.contains("tracker") || j.contains("input") ? experiment_config_from_json(j)
                                                           : ExperimentConfig{};
        if (!j.contains("tracker") && !j.contains("input")) cfg.tracker = tracker_config_from_json(j);
      }
      cfg.synthetic.reset();
      cfg.frames_dir = frames_dir;
      cfg.slw = parse_rect(slw_text);
      if (track_out) cfg.output = *track_out;
      cfg.dump_overlays = dump_overlays;
      write_reports(run_experiment(cfg), track_out);
    } else if (*run) {
      ExperimentConfig cfg = experiment_config_from_json(load_json_file(run_config));
      if (run_out) cfg.output = *run_out;
      cfg.dump_overlays = run_overlays;
      write_reports(run_experiment(cfg), cfg.output ? std::optional(cfg.output->string()) : std::nullopt);
    } else if (*synth) {
      SyntheticSpec spec = synth_spec ? synthetic_spec_from_json(load_json_file(*synth_spec))
                                      : scene_preset(synth_scene.value_or("easy"));
      if (synth_scene && synth_spec) throw ConfigError("use either --spec or --scene");
      if (synth_seed) spec.seed = *synth_seed;
      const SyntheticSequence seq = generate_synthetic_sequence(spec);
      fs::create_directories(synth_out);
      std::ostringstream truth;
      truth << "frame,x,y,w,h\n";
      for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%05zu.ppm", i);
        write_ppm(fs::path(synth_out) / name, seq.frames[i]);
        const Rect& b = seq.truth[i];
        truth << i << ',' << b.x << ',' << b.y << ',' << b.w << ',' << b.h << "\n";
      }
      write_text(fs::path(synth_out) / "truth.csv", truth.str());
      write_text(fs::path(synth_out) / "spec.json", to_json(spec).dump(2) + "\n");
      const Rect slw = grow(seq.truth.front(), 2);
      std::cout << "wrote " << seq.frames.size() << " frames to " << synth_out
                << "; suggested --slw " << to_string(slw) << "\n";
    } else if (*bench) {
      ExperimentConfig cfg = bench_opts.build("easy");
      if (!bench_opts.layout && !bench_opts.config) cfg.tracker.layout = "GP7";
      const auto sizes = parse_int_list(sizes_text);
      const int largest = *std::max_element(sizes.begin(), sizes.end());
      if (!bench_opts.max_node_size) cfg.tracker.max_node_size = std::max(cfg.tracker.max_node_size, largest);
      emit(bench_opts.out, to_csv(bench_node_sizes(sizes, cfg)));
    } else if (*sweep_g) {
      ExperimentConfig cfg = grid_opts.build("easy");
      std::vector<std::string> presets;
      std::stringstream ss(presets_text);
      for (std::string p; std::getline(ss, p, ',');) presets.push_back(p);
      const SweepReport r = sweep_grids(presets, parse_double_list(corr_text), cfg);
      emit(grid_opts.out, to_csv(r));
      for (const auto& s : r.summary) {
        std::cerr << s.variant << " corruption=" << s.corruption << " no_failure=" << s.no_failure
                  << "/" << s.runs << " median_survived=" << s.median_survived << "\n";
      }
    } else if (*sweep_p) {
      ExperimentConfig cfg = par_opts.build("low-contrast");
      if (!par_opts.layout && !par_opts.config) cfg.tracker.layout = "GP11";
      cfg.tracker.parallel_params.inner_node_size = inner;
      cfg.tracker.parallel_params.outer_node_size = outer;
      const SweepReport r =
          sweep_parallel_fraction(parse_double_list(p_text), parse_double_list(pcorr_text), cfg);
      emit(par_opts.out, to_csv(r));
      for (const auto& s : r.summary) {
        std::cerr << s.variant << " corruption=" << s.corruption << " no_failure=" << s.no_failure
                  << "/" << s.runs << " median_survived=" << s.median_survived << "\n";
      }
    }
  } catch (const pwot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
