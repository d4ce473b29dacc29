#include "cloudcomp/cli.hpp"

#include "cloudcomp/crast.hpp"
#include "cloudcomp/ppm.hpp"
#include "cloudcomp/resample.hpp"
#include "cloudcomp/scenegen.hpp"
#include "cloudcomp/vegindex.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace cloudcomp::cli {

namespace fs = std::filesystem;

namespace {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

std::vector<fs::path> as_paths(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

// Per-scene brackets: the configured bracket, or its adaptive refinement.
std::vector<CloudBracket> brackets_for(const ImageStack& stack, const RunConfig& cfg, Streams io) {
  const CloudBracket defaults = parse_bracket(cfg.bracket);
  std::vector<CloudBracket> out;
  for (const auto& img : stack) {
    out.push_back(cfg.adaptive ? adaptive_bracket(img, defaults, cfg.inflection) : defaults);
    if (cfg.adaptive) io.err << "  " << format_date(img.date()) << " bracket " << to_string(out.back()) << "\n";
  }
  return out;
}

MultibandImage run_composite(const RunConfig& cfg, Streams io) {
  const auto paths = as_paths(cfg.inputs);
  const ImageStack stack = load_stack(paths);
  const CompositeMethod method = parse_method(cfg.method);
  io.err << "composite: " << stack.size() << " scenes " << to_string(stack.extent()) << ", method "
         << method_name(method) << "\n";
  const auto brackets = brackets_for(stack, cfg, io);
  return composite(stack, method, brackets, Partition{cfg.workers});
}

void cmd_mask(const RunConfig& cfg, Streams io) {
  const auto img = read_raster(cfg.input);
  const CloudBracket b = cfg.adaptive ? adaptive_bracket(img, parse_bracket(cfg.bracket), cfg.inflection)
                                      : parse_bracket(cfg.bracket);
  io.err << "mask: bracket " << to_string(b) << ", cloud fraction " << cloud_fraction(img, b) << "\n";
  write_raster(mask_clouds(img, b, static_cast<Dn>(cfg.fill), Partition{cfg.workers}), cfg.output);
}

void cmd_composite(const RunConfig& cfg, Streams io) { write_raster(run_composite(cfg, io), cfg.output); }

void cmd_recomposite(const RunConfig& cfg, Streams io) {
  const auto paths = as_paths(cfg.inputs);
  const ImageStack composites = load_stack(paths);
  io.err << "recomposite: " << composites.size() << " composites\n";
  write_raster(recomposite(composites, parse_bracket(cfg.bracket), Partition{cfg.workers}), cfg.output);
}

void cmd_ndvi(const RunConfig& cfg, Streams) {
  write_ndvi(ndvi(read_raster(cfg.input), Partition{cfg.workers}), cfg.output);
}

void report_classes(const NdviRaster& nv, const ClassMap& cm, std::ostream& os, Partition part) {
  const auto counts = class_histogram(cm, part);
  for (std::size_t c = 0; c < kClassCount; ++c)
    os << class_name(static_cast<LandClass>(c)) << "=" << counts[c] << "\n";
  if (const auto s = ndvi_stats(nv, cm, part))
    os << std::setprecision(9) << "vegetated_mean=" << s->mean << "\nvegetated_min=" << s->min
       << "\nvegetated_max=" << s->max << "\nvegetated_count=" << s->count << "\n";
  else
    os << "vegetated_mean=none\n";
}

void cmd_classify(const RunConfig& cfg, Streams io) {
  const auto nv = read_ndvi(cfg.input);
  const Partition part{cfg.workers};
  const auto cm = classify(nv, ClassBreaks{}, cfg.hybrid_mode, part);
  write_classmap(cm, cfg.output);
  if (cfg.stats) report_classes(nv, cm, io.out, part);
}

void cmd_hist(const RunConfig& cfg, Streams io) {
  const auto h = band_histogram(read_raster(cfg.input), parse_band(cfg.band), Partition{cfg.workers});
  if (cfg.output.empty()) {
    write_histogram_csv(h, io.out);
    return;
  }
  std::ofstream f(cfg.output);
  if (!f) throw Error("cannot open '" + cfg.output + "' for writing");
  write_histogram_csv(h, f);
  if (!f.flush()) throw Error("write failure on '" + cfg.output + "'");
}

void cmd_bracket(const RunConfig& cfg, Streams io) {
  const auto img = read_raster(cfg.input);
  const auto defaults = parse_bracket(cfg.bracket);
  const auto lo = detect_inflection(band_histogram(img, Band::Red), cfg.inflection);
  io.err << "bracket: inflection " << (lo ? std::to_string(*lo) : std::string("none")) << "\n";
  io.out << to_string(adaptive_bracket(img, defaults, cfg.inflection)) << "\n";
}

void cmd_gen(const RunConfig& cfg, Streams io) {
  GenConfig gc = cfg.config_path.empty() ? GenConfig{} : load_gen_config(cfg.config_path);
  if (cfg.seed) {
    gc.scene.seed = *cfg.seed;
    gc.stack_seed = *cfg.seed + 1;
  }
  const fs::path dir = cfg.output;
  fs::create_directories(dir);
  const auto base = gen_base_scene(gc.scene);
  const auto gen = gen_cloudy_stack(base, gc.days, gc.clouds, gc.stack_seed);
  write_raster(base, dir / "base.crast");
  for (std::size_t d = 0; d < gen.stack.size(); ++d) {
    std::ostringstream name;
    name << "day_" << std::setw(2) << std::setfill('0') << d + 1 << ".crast";
    write_raster(gen.stack[d], dir / name.str());
  }
  write_masks(gen.truth.clouds, dir / "clouds.crast");
  write_masks(gen.truth.shadows, dir / "shadows.crast");
  io.err << "gen: " << gc.days << " days of " << to_string(base.size()) << " into " << dir.string() << "\n";
}

void cmd_score(const RunConfig& cfg, Streams io) {
  const auto composite = read_raster(cfg.input);
  auto base = read_raster(cfg.base_path);
  auto clouds = read_masks(cfg.clouds_path);
  auto shadows = cfg.shadows_path.empty() ? MaskStack(clouds.size(), clouds.layers(), clouds.date())
                                          : read_masks(cfg.shadows_path);
  const GroundTruth gt{std::move(base), std::move(clouds), std::move(shadows)};
  const auto s = score_composite(composite, gt, parse_bracket(cfg.bracket));
  io.out << std::setprecision(9) << "recovered_fraction=" << s.recovered_fraction
         << "\nresidual_cloud_fraction=" << s.residual_cloud_fraction
         << "\nexact_match_fraction=" << s.exact_match_fraction << "\n";
}

void cmd_export(const RunConfig& cfg, Streams) {
  const Partition part{cfg.workers};
  switch (read_crast_header(cfg.input).layout) {
    case Layout::Scene: export_ppm_fcc(read_raster(cfg.input), cfg.output, part); return;
    case Layout::Class: export_ppm_classmap(read_classmap(cfg.input), cfg.output, part); return;
    default: throw Error("export handles scenes and class maps only; classify NDVI first");
  }
}

void cmd_resample(const RunConfig& cfg, Streams) {
  switch (read_crast_header(cfg.input).layout) {
    case Layout::Scene: write_raster(resample_cubic(read_raster(cfg.input), cfg.scale), cfg.output); return;
    case Layout::Ndvi: write_ndvi(resample_cubic(read_ndvi(cfg.input), cfg.scale), cfg.output); return;
    default: throw Error("resample handles scenes and NDVI rasters only");
  }
}

void cmd_pipeline(const RunConfig& cfg, Streams io) {
  const Partition part{cfg.workers};
  const auto comp = run_composite(cfg, io);
  const auto nv = ndvi(comp, part);
  const auto cm = classify(nv, ClassBreaks{}, cfg.hybrid_mode, part);
  const std::string prefix = cfg.output;
  write_raster(comp, prefix + "_composite.crast");
  write_ndvi(nv, prefix + "_ndvi.crast");
  write_classmap(cm, prefix + "_class.crast");
  export_ppm_fcc(comp, prefix + "_fcc.ppm", part);
  export_ppm_classmap(cm, prefix + "_class.ppm", part);
  report_classes(nv, cm, io.err, part);
}

std::string check_bracket(const std::string& s) {
  try {
    parse_bracket(s);
    return {};
  } catch (const std::exception& e) {
    return e.what();
  }
}

void add_bracket(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--bracket", cfg.bracket, "Red-band cloud bracket lo:hi")->check(check_bracket, "lo:hi")
      ->capture_default_str();
}

void add_adaptive(CLI::App* sub, RunConfig& cfg) {
  sub->add_flag("--adaptive", cfg.adaptive, "Refine the bracket lower bound per scene from the Red histogram");
  sub->add_option("--start", cfg.inflection_start, "First DN searched for the inflection")
      ->check(CLI::Range(0u, 255u))
      ->capture_default_str();
  sub->add_option("--seg-width", cfg.inflection.seg_width, "Histogram segment width in DN")
      ->check(CLI::Range(1u, 255u))
      ->capture_default_str();
  sub->add_option("--slope", cfg.inflection.slope_thresh, "Slope threshold, per-mille of pixels per DN")
      ->capture_default_str();
}

void add_method(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("-m,--method", cfg.method, "Compositing method")
      ->required()
      ->check(CLI::IsMember({"max", "min-naive", "min-refined", "hybrid"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Cloud removal by time compositing of three-band (SWIR, NIR, RED) scenes", "cloudcomp"};
  app.require_subcommand(1);
  app.add_option("--workers", cfg.workers, "Worker threads for pixel-wise stages")
      ->check(CLI::Range(std::size_t{1}, std::size_t{256}))
      ->capture_default_str();

  using Handler = void (*)(const RunConfig&, Streams);
  std::vector<std::pair<CLI::App*, Handler>> handlers;
  const auto sub = [&](const char* name, const char* help, Handler h) {
    auto* s = app.add_subcommand(name, help);
    handlers.emplace_back(s, h);
    return s;
  };

  auto* mask = sub("mask", "Recode cloud pixels of one scene to 0 or 255 on all bands", cmd_mask);
  mask->add_option("-i,--input", cfg.input, "Input scene")->required();
  mask->add_option("-o,--output", cfg.output, "Output scene")->required();
  mask->add_option("--fill", cfg.fill, "Fill DN for cloud pixels")->check(CLI::IsMember({0, 255}))->capture_default_str();
  add_bracket(mask, cfg);
  add_adaptive(mask, cfg);

  auto* comp = sub("composite", "Composite a stack of dated scenes", cmd_composite);
  add_method(comp, cfg);
  add_bracket(comp, cfg);
  add_adaptive(comp, cfg);
  comp->add_option("-o,--output", cfg.output, "Output composite")->required();
  comp->add_option("inputs", cfg.inputs, "Input scenes")->required();

  auto* recomp = sub("recomposite", "Hybrid-composite earlier hybrid composites", cmd_recomposite);
  add_bracket(recomp, cfg);
  recomp->add_option("-o,--output", cfg.output, "Output composite")->required();
  recomp->add_option("inputs", cfg.inputs, "Input composites")->required();

  auto* nd = sub("ndvi", "Extract NDVI from a scene", cmd_ndvi);
  nd->add_option("-i,--input", cfg.input, "Input scene")->required();
  nd->add_option("-o,--output", cfg.output, "Output NDVI raster")->required();

  auto* cls = sub("classify", "Slice NDVI into water, cloud, fallow, moderate and dense", cmd_classify);
  cls->add_option("-i,--input", cfg.input, "Input NDVI raster")->required();
  cls->add_option("-o,--output", cfg.output, "Output class map")->required();
  cls->add_flag("--hybrid-mode", cfg.hybrid_mode, "Only NDVI exactly 0 is cloud");
  cls->add_flag("--stats", cfg.stats, "Print class counts and vegetated NDVI statistics");

  auto* hist = sub("hist", "Dump a band histogram as dn,count CSV", cmd_hist);
  hist->add_option("-i,--input", cfg.input, "Input scene")->required();
  hist->add_option("-o,--output", cfg.output, "Output CSV (default: standard output)");
  hist->add_option("--band", cfg.band, "swir, nir or red")
      ->check(CLI::IsMember({"swir", "nir", "red"}, CLI::ignore_case))
      ->capture_default_str();

  auto* br = sub("bracket", "Report the adaptive cloud bracket of a scene", cmd_bracket);
  br->add_option("-i,--input", cfg.input, "Input scene")->required();
  add_bracket(br, cfg);
  br->add_option("--start", cfg.inflection_start, "First DN searched for the inflection")
      ->check(CLI::Range(0u, 255u))
      ->capture_default_str();
  br->add_option("--seg-width", cfg.inflection.seg_width, "Histogram segment width in DN")
      ->check(CLI::Range(1u, 255u))
      ->capture_default_str();
  br->add_option("--slope", cfg.inflection.slope_thresh, "Slope threshold, per-mille of pixels per DN")
      ->capture_default_str();

  auto* gen = sub("gen", "Generate a synthetic cloudy stack with ground truth", cmd_gen);
  gen->add_option("-c,--config", cfg.config_path, "key = value scene/cloud config")->check(CLI::ExistingFile);
  gen->add_option("-o,--out-dir", cfg.output, "Output directory")->required();
  gen->add_option("--seed", cfg.seed, "Scene seed (stack seed is seed + 1)");

  auto* score = sub("score", "Score a composite against generator ground truth", cmd_score);
  score->add_option("composite", cfg.input, "Composite scene")->required();
  score->add_option("--base", cfg.base_path, "Ground-truth base scene")->required();
  score->add_option("--clouds", cfg.clouds_path, "Ground-truth cloud masks")->required();
  score->add_option("--shadows", cfg.shadows_path, "Ground-truth shadow masks");
  add_bracket(score, cfg);

  auto* exp = sub("export", "Export a scene (FCC 2,1,1) or class map as PPM", cmd_export);
  exp->add_option("-i,--input", cfg.input, "Input scene or class map")->required();
  exp->add_option("-o,--output", cfg.output, "Output PPM")->required();

  auto* rs = sub("resample", "Cubic-convolution resample of a scene or NDVI raster", cmd_resample);
  rs->add_option("-i,--input", cfg.input, "Input scene or NDVI raster")->required();
  rs->add_option("-o,--output", cfg.output, "Output raster")->required();
  rs->add_option("--scale", cfg.scale, "Scale factor")->required()->check(CLI::PositiveNumber);

  auto* pipe = sub("pipeline", "composite -> ndvi -> classify -> export in one run", cmd_pipeline);
  add_method(pipe, cfg);
  add_bracket(pipe, cfg);
  add_adaptive(pipe, cfg);
  pipe->add_flag("--hybrid-mode", cfg.hybrid_mode, "Only NDVI exactly 0 is cloud");
  pipe->add_option("-o,--output", cfg.output, "Output prefix")->required();
  pipe->add_option("inputs", cfg.inputs, "Input scenes")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kUsage;
  }

  for (const auto& [subcommand, handler] : handlers) {
    if (!subcommand->parsed()) continue;
    cfg.subcommand = subcommand->get_name();
    cfg.inflection.start = static_cast<Dn>(cfg.inflection_start);
    try {
      handler(cfg, Streams{out, err});
      return kOk;
    } catch (const std::exception& e) {
      err << cfg.subcommand << ": error: " << e.what() << "\n";
      return kDataError;
    }
  }
  err << app.help();
  return kUsage;
}

}  // namespace cloudcomp::cli
