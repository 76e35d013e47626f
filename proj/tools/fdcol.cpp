// fdcol: run the colouring pipeline, export artifacts, run verification suites.
//
// Shared options live on the top-level app and fall through from the
// subcommands, so a flat key=value config file (--config) can set any of them.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdcol/fdcol.hpp"

namespace fs = std::filesystem;
using namespace fdcol;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheck = 1;
constexpr int kExitConfig = 2;

struct Options {
  int dim = 2;
  std::int64_t window = 96;
  std::uint64_t seed = 1;
  std::string stage = "final";
  std::string format = "json";
  std::string out = "out";
  std::int64_t margin_scale = 8;
  unsigned threads = 1;
  bool allow_high_dim = false;
  std::size_t site_limit = kDefaultSiteLimit;
  bool all_stages = false;
  // verify
  std::string suite = "oracle1d";
  std::vector<int> dims;
  std::size_t seeds = 20;
  std::size_t inputs = 100;
  std::size_t trials = 0;
  std::string report;
  // export
  std::string artifact;
};

json options_json(const Options& o) {
  return {{"dim", o.dim},
          {"window", o.window},
          {"seed", o.seed},
          {"stage", o.stage},
          {"format", o.format},
          {"out", o.out},
          {"margin_scale", o.margin_scale},
          {"threads", o.threads},
          {"allow_high_dim", o.allow_high_dim},
          {"site_limit", o.site_limit},
          {"all_stages", o.all_stages}};
}

void check_dim_allowed(const Options& o) {
  if (o.dim < 1) throw std::invalid_argument("fdcol: dimension must be >= 1");
  if (o.dim > 3 && !o.allow_high_dim) throw std::invalid_argument("fdcol: dimension above 3 needs --allow-high-dim");
}

ManifestOutput write_grid(const Grid& g, const fs::path& path, Format f) {
  ImageInfo info;
  const std::string bytes = encode_grid(g, f, &info);
  write_file(path.string(), bytes);
  return {path.filename().string(), format_name(f), sha256_hex(bytes), info.note};
}

int cmd_run(const Options& o) {
  check_dim_allowed(o);
  const Stage until = parse_stage(o.stage);
  const Format fmt = parse_format(o.format);
  const PipelineSpec spec = PipelineSpec::make(o.dim, o.margin_scale);
  const Box interior = output_window(o.dim, o.window);
  check_feasible(spec, interior, until, o.site_limit);

  const PipelineResult r = run_pipeline(spec, o.seed, interior, until, o.threads);
  fs::create_directories(o.out);
  const std::string ext = format_name(fmt);

  RunManifest m;
  m.config = options_json(o);
  m.seed = o.seed;
  m.dim = o.dim;
  m.spec = spec_json(spec);
  m.timings = r.timings;
  m.threads = o.threads;
  for (const auto& [name, secs] : r.timings) m.stages.push_back(name);

  auto emit = [&](Stage s, const Grid& g) {
    if (s != until && !o.all_stages) return;
    m.outputs.push_back(write_grid(g, fs::path(o.out) / (stage_name(s) + "." + ext), fmt));
  };
  if (r.baseline) emit(Stage::baseline, to_grid(*r.baseline));
  if (r.nets) emit(Stage::nets, to_grid(r.nets->union_net));
  if (r.clusters) emit(Stage::clusters, to_grid(r.clusters->net));
  if (r.tiling) emit(Stage::tiling, to_grid(*r.tiling));
  if (r.patch) emit(Stage::patchwork, to_grid(r.patch->colours));
  if (r.final_colours) emit(Stage::final, *r.final_colours);
  write_file((fs::path(o.out) / "manifest.json").string(), m.to_json().dump(2) + "\n");

  std::vector<CheckReport> checks;
  if (r.baseline) checks.push_back(check_proper(*r.baseline, 1));
  if (r.final_colours) {
    checks.push_back(check_proper(*r.final_colours, 1));
    checks.push_back(check_max_value(*r.final_colours, std::int64_t{2 * o.dim + 1}, "colours <= 2d+1"));
  }
  for (const auto& [name, secs] : r.timings) std::cout << name << ": " << secs << " s\n";
  for (const auto& c : checks) std::cout << c.text() << "\n";
  for (const auto& out : m.outputs) std::cout << "wrote " << (fs::path(o.out) / out.file).string() << "\n";
  return all_pass(checks) ? kExitOk : kExitCheck;
}

int cmd_verify(const Options& o) {
  SuiteOptions so;
  if (!o.dims.empty()) so.dims = o.dims;
  for (int d : so.dims)
    if (d < 1 || d > 2) throw std::invalid_argument("fdcol: verification suites run in dimension 1 or 2");
  so.seeds = o.seeds;
  so.first_seed = o.seed;
  so.equivariance_inputs = o.inputs;
  so.window = o.window;
  so.margin_scale = o.margin_scale;
  so.threads = o.threads;
  if (o.trials) {
    so.mc_samples = so.line_sites = so.d1_trials = so.baseline_trials = o.trials;
    so.baseline_dependence_trials = std::min(so.baseline_dependence_trials, o.trials);
  }
  const auto reports = run_suite(o.suite, so);
  std::size_t failed = 0;
  for (const auto& r : reports) {
    std::cout << r.text() << "\n";
    failed += !r.pass;
  }
  std::cout << reports.size() - failed << "/" << reports.size() << " checks passed\n";
  if (!o.report.empty()) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    write_file(o.report, arr.dump(2) + "\n");
  }
  return failed ? kExitCheck : kExitOk;
}

int cmd_export(const Options& o) {
  if (o.artifact.empty()) throw std::invalid_argument("fdcol: export needs --artifact");
  const Format fmt = parse_format(o.format);
  if (o.artifact.rfind("law:", 0) == 0) {
    int q = 0;
    std::size_t n = 0;
    char colon = 0;
    std::istringstream is(o.artifact.substr(4));
    if (!(is >> q >> colon >> n) || colon != ':') throw std::invalid_argument("fdcol: law artifact is law:q:n");
    if (fmt != Format::json) throw std::invalid_argument("fdcol: law tables export as json only");
    if (n > kMaxExactLength) throw std::invalid_argument("fdcol: exact law limited to n <= " + std::to_string(kMaxExactLength));
    write_file(o.out, to_json(exact_sampler_law(q, n)).dump(2) + "\n");
    std::cout << "wrote " << o.out << "\n";
    return kExitOk;
  }
  const Grid g = read_grid(o.artifact);
  RunManifest m;
  m.config = {{"artifact", o.artifact}, {"format", o.format}, {"out", o.out}};
  m.dim = g.dim();
  m.stages = {"export"};
  const fs::path out(o.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  m.outputs.push_back(write_grid(g, out, fmt));
  write_file(o.out + ".manifest.json", m.to_json().dump(2) + "\n");
  if (!m.outputs.back().note.empty()) std::cout << "note: " << m.outputs.back().note << "\n";
  std::cout << "wrote " << o.out << "\n";
  return kExitOk;
}

int cmd_bound(const Options& o) {
  check_dim_allowed(o);
  std::cout << dependence_bound(PipelineSpec::make(o.dim, o.margin_scale)).text();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Finitely dependent, isometry-equivariant proper colourings of Z^d"};
  app.set_config("--config", "", "flat key=value file; flags override it");
  app.require_subcommand(1);
  app.add_option("--dim", o.dim, "lattice dimension")->capture_default_str();
  app.add_option("--window", o.window, "side of the output window")->capture_default_str();
  app.add_option("--seed", o.seed, "seed (first seed for suites)")->capture_default_str();
  app.add_option("--stage", o.stage, "baseline|nets|clusters|tiling|patchwork|final")->capture_default_str();
  app.add_option("--format", o.format, "pgm|ppm|csv|json")->capture_default_str();
  app.add_option("--out", o.out, "output directory (run) or file (export)")->capture_default_str();
  app.add_option("--margin-scale", o.margin_scale, "net margin in units of the net scale")->capture_default_str();
  app.add_option("--threads", o.threads, "worker threads")->capture_default_str()->check(CLI::Range(1u, 256u));
  app.add_flag("--allow-high-dim", o.allow_high_dim, "permit dimension above 3");
  app.add_option("--site-limit", o.site_limit, "largest input window in sites")->capture_default_str();

  auto* run = app.add_subcommand("run", "run the pipeline to a stage and write its grid and a manifest")->fallthrough();
  run->add_flag("--all-stages", o.all_stages, "write every computed stage");
  auto* verify = app.add_subcommand("verify", "run a verification suite")->fallthrough();
  verify->add_option("--suite", o.suite, "oracle1d|structure|equivariance|dependence|margins|all")->capture_default_str();
  verify->add_option("--dims", o.dims, "dimensions for structure, equivariance and margins");
  verify->add_option("--seeds", o.seeds, "seeds for structure and margins")->capture_default_str();
  verify->add_option("--inputs", o.inputs, "random inputs per equivariance stage")->capture_default_str();
  verify->add_option("--trials", o.trials, "override Monte Carlo and chi-square sample counts");
  verify->add_option("--report", o.report, "write reports as JSON");
  auto* exp = app.add_subcommand("export", "convert a grid file, or write an exact law table (law:q:n)")->fallthrough();
  exp->add_option("--artifact", o.artifact, "grid file or law:q:n")->required();
  app.add_subcommand("bound", "print the accumulated dependence bound")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  try {
    if (*run) return cmd_run(o);
    if (*verify) return cmd_verify(o);
    if (*exp) return cmd_export(o);
    return cmd_bound(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheck;
  }
}
