#pragma once

// End-to-end driver: window planning from the requested output box outwards,
// and the staged run from i.i.d. field to the final colouring.

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fdcol/lattice.hpp"
#include "fdcol/random_field.hpp"
#include "fdcol/site_config.hpp"
#include "fdcol/stage_isometry.hpp"
#include "fdcol/stage_translation.hpp"

namespace fdcol {

enum class Stage { baseline, nets, clusters, tiling, patchwork, final };

inline Stage parse_stage(const std::string& s) {
  if (s == "baseline") return Stage::baseline;
  if (s == "nets") return Stage::nets;
  if (s == "clusters") return Stage::clusters;
  if (s == "tiling") return Stage::tiling;
  if (s == "patchwork") return Stage::patchwork;
  if (s == "final") return Stage::final;
  throw std::invalid_argument("fdcol: unknown stage '" + s + "'");
}

inline std::string stage_name(Stage s) {
  switch (s) {
    case Stage::baseline: return "baseline";
    case Stage::nets: return "nets";
    case Stage::clusters: return "clusters";
    case Stage::tiling: return "tiling";
    case Stage::patchwork: return "patchwork";
    case Stage::final: return "final";
  }
  return "?";
}

/// Boxes each stage reads, from the final output box outwards.
struct Windows {
  Box interior;     // final colours
  Box patch;        // patch colours, read by colour reduction
  Box tiling;       // tile labels, read by patchwork
  Box cluster_out;  // cluster-thinned net, read by the tiling
  Box nets;         // J and the J_gamma
  Box arrows;       // W
  Box field;        // i.i.d. input

  /// Output box of a stage.
  const Box& output(Stage s) const {
    switch (s) {
      case Stage::baseline: return interior;
      case Stage::nets: return nets;
      case Stage::clusters: return cluster_out;
      case Stage::tiling: return tiling;
      case Stage::patchwork: return patch;
      case Stage::final: return interior;
    }
    return interior;
  }
};

inline Windows plan_windows(const PipelineSpec& spec, const Box& interior) {
  if (interior.empty()) throw std::invalid_argument("fdcol: empty output window");
  if (interior.dim() != spec.d) throw std::invalid_argument("fdcol: window dimension does not match spec");
  Windows w;
  w.interior = interior;
  w.patch = interior.grow(spec.reduce_margin);
  w.tiling = w.patch.grow(spec.patch_radius());
  w.cluster_out = w.tiling.grow(spec.tiling_cover);
  w.nets = w.cluster_out.grow(spec.cluster_radius());
  w.arrows = w.nets.grow(spec.net_margin());
  w.field = w.arrows.grow(spec.d);
  return w;
}

/// Output box [0, n-1]^d.
inline Box output_window(int d, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("fdcol: window side must be >= 1");
  return Box::cube(d, n);
}

inline constexpr std::size_t kDefaultSiteLimit = std::size_t{1} << 27;

/// Throws with the computed requirement when the run would need too many sites.
inline void check_feasible(const PipelineSpec& spec, const Box& interior, Stage until, std::size_t site_limit = kDefaultSiteLimit) {
  const Windows w = plan_windows(spec, interior);
  const Box& need = until == Stage::baseline ? w.interior : w.field;
  const std::size_t v = need.volume();
  if (v > site_limit)
    throw std::invalid_argument("fdcol: infeasible window: stage " + stage_name(until) + " needs the input box " + need.str() + " (" +
                                std::to_string(v) + " sites, side " + std::to_string(need.extent(0)) + "), limit is " +
                                std::to_string(site_limit) + " sites");
  if (until != Stage::baseline && until != Stage::nets) {
    // the offset table of the tiling covers B(b)
    const std::size_t table = Box::centred(spec.d, spec.tiling_cover).volume();
    if (table > site_limit) throw std::invalid_argument("fdcol: infeasible tiling radius " + std::to_string(spec.tiling_cover));
  }
}

struct PipelineResult {
  PipelineSpec spec;
  Windows windows;
  std::uint64_t seed = 0;
  Stage until = Stage::final;
  std::optional<SiteConfig<TupleColour>> baseline;
  std::optional<SymmetrizedNets> nets;
  std::optional<ClusterNet> clusters;
  std::optional<SiteConfig<std::int64_t>> tiling;
  std::optional<Patchwork> patch;
  std::optional<SiteConfig<std::int64_t>> final_colours;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
};

/// Fields used by the run with a given seed.
struct RunFields {
  SeededField master;
  SeededField distribute, cluster, patchwork, baseline;
  explicit RunFields(std::uint64_t seed)
      : master(seed),
        distribute(master.substream("distribute")),
        cluster(master.substream("cluster")),
        patchwork(master.substream("patchwork")),
        baseline(master.substream("baseline")) {}
};

/// Runs the pipeline up to `until` so that the output of that stage covers
/// the planned box; the final colours cover `interior` exactly.
inline PipelineResult run_pipeline(const PipelineSpec& spec, std::uint64_t seed, const Box& interior, Stage until = Stage::final,
                                   unsigned threads = 1) {
  using clock = std::chrono::steady_clock;
  PipelineResult r;
  r.spec = spec;
  r.seed = seed;
  r.until = until;
  r.windows = plan_windows(spec, interior);
  const RunFields f(seed);
  auto timed = [&](const std::string& name, auto&& body) {
    const auto t0 = clock::now();
    body();
    r.timings.emplace_back(name, std::chrono::duration<double>(clock::now() - t0).count());
  };

  if (until == Stage::baseline) {
    timed("baseline", [&] { r.baseline = baseline_product_colouring(f.baseline, interior); });
    return r;
  }
  timed("nets", [&] {
    const PairField w = distribute(sample(f.distribute, r.windows.field));
    r.nets = symmetrized_nets(w, spec.net_scale, spec.net_margin(), threads);
  });
  if (until == Stage::nets) return r;
  timed("clusters", [&] { r.clusters = cluster_net(r.nets->union_net, sample(f.cluster, r.windows.nets), spec); });
  if (until == Stage::clusters) return r;
  timed("tiling", [&] { r.tiling = orbit_tiling(r.clusters->net, spec); });
  if (until == Stage::tiling) return r;
  timed("patchwork", [&] { r.patch = patchwork(*r.tiling, sample(f.patchwork, r.windows.tiling), spec); });
  if (until == Stage::patchwork) return r;
  timed("reduce", [&] { r.final_colours = reduce_colours(encode_patch_colours(r.patch->colours), spec.reduce_margin); });
  return r;
}

}  // namespace fdcol
