#pragma once

// Verification suites shared by the CLI and the acceptance run. Each returns
// a flat list of reports; names carry the case being checked.

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "fdcol/hl1d.hpp"
#include "fdcol/lattice.hpp"
#include "fdcol/pipeline.hpp"
#include "fdcol/random_field.hpp"
#include "fdcol/site_config.hpp"
#include "fdcol/stage_isometry.hpp"
#include "fdcol/stage_translation.hpp"
#include "fdcol/verify.hpp"

namespace fdcol {

struct SuiteOptions {
  std::vector<int> dims{1, 2};
  std::size_t seeds = 20;
  std::uint64_t first_seed = 1;
  std::size_t equivariance_inputs = 100;
  std::size_t mc_samples = 1'000'000;
  std::size_t line_sites = 1'000'000;
  std::size_t d1_trials = 100'000;
  std::size_t baseline_trials = 1'000'000;
  std::size_t baseline_dependence_trials = 100'000;
  std::size_t oracle_max_n = 7;
  std::int64_t window = 96;     // side of the d = 2 structure interior
  std::int64_t d1_window = 4096;
  std::int64_t margin_scale = 8;
  unsigned threads = 1;
  double alpha = 1e-3;
};

namespace detail {

inline CheckReport flag(std::string name, bool pass, std::string note = {}) {
  CheckReport r{std::move(name)};
  r.pass = pass;
  r.note = std::move(note);
  return r;
}

inline CheckReport renamed(CheckReport r, const std::string& name) {
  r.name = name + " " + r.name;
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// 1D engine

/// Sampler law against the insertion-count law, exact k-dependence, spot values.
inline std::vector<CheckReport> suite_oracle_law(const SuiteOptions& o) {
  std::vector<CheckReport> out;
  for (int q : {3, 4})
    for (std::size_t n = 1; n <= o.oracle_max_n; ++n) {
      const LawTable law = exact_sampler_law(q, n);
      const std::string tag = "q=" + std::to_string(q) + " n=" + std::to_string(n);
      out.push_back(detail::flag("law=count " + tag, law == insertion_law(q, n)));
      out.push_back(detail::flag("total=1 " + tag, law.total() == 1));
      const std::size_t k = q == 4 ? 1 : 2;
      const auto dep = check_dependence(law, k);
      auto r = detail::flag("dependence k=" + std::to_string(k) + " " + tag, dep.independent(),
                            "max discrepancy " + rational_string(dep.max_discrepancy));
      r.counts["set_pairs"] = static_cast<double>(dep.pairs_checked);
      out.push_back(r);
      if (n >= 3) {
        const auto below = check_dependence(law, k - 1);
        out.push_back(detail::flag("dependent at k=" + std::to_string(k - 1) + " " + tag, !below.independent(),
                                   "max discrepancy " + rational_string(below.max_discrepancy)));
      }
    }
  const LawTable l3 = exact_sampler_law(4, 3);
  out.push_back(detail::flag("P(aba)=1/48", l3.at({1, 2, 1}) == Rational(1, 48), rational_string(l3.at({1, 2, 1}))));
  out.push_back(detail::flag("P(abc)=1/32", l3.at({1, 2, 3}) == Rational(1, 32), rational_string(l3.at({1, 2, 3}))));
  std::uint64_t sum = 0;
  for_each_proper_word(4, 3, [&](const std::vector<Colour>& w) { sum += insertion_count(w); });
  out.push_back(detail::flag("sum N = 192 at n=3", sum == 192, std::to_string(sum)));
  return out;
}

/// First and last n positions of the (n+1)-law reproduce the n-law.
inline std::vector<CheckReport> suite_oracle_consistency(const SuiteOptions& o) {
  std::vector<CheckReport> out;
  for (int q : {3, 4}) {
    LawTable prev = exact_sampler_law(q, 1);
    for (std::size_t n = 1; n + 1 <= o.oracle_max_n; ++n) {
      const LawTable next = exact_sampler_law(q, n + 1);
      std::vector<std::size_t> head(n), tail(n);
      for (std::size_t i = 0; i < n; ++i) {
        head[i] = i;
        tail[i] = i + 1;
      }
      const std::string tag = "q=" + std::to_string(q) + " n=" + std::to_string(n);
      out.push_back(detail::flag("head marginal " + tag, next.marginal(head) == prev));
      out.push_back(detail::flag("tail marginal " + tag, next.marginal(tail) == prev));
      prev = next;
    }
  }
  return out;
}

/// Monte Carlo fit of the sampler at q = 4, n = 5 and properness of long lines.
inline std::vector<CheckReport> suite_oracle_monte_carlo(const SuiteOptions& o) {
  std::vector<CheckReport> out;
  const LawTable law = exact_sampler_law(4, 5);
  std::map<std::vector<Colour>, std::size_t> index;
  std::vector<double> probs;
  for (const auto& [w, p] : law.probability) {
    index.emplace(w, probs.size());
    probs.push_back(p.get_d());
  }
  std::vector<double> obs(probs.size(), 0);
  const SeededField f = SeededField(o.first_seed).substream("monte-carlo");
  std::size_t improper = 0;
  for (std::size_t t = 0; t < o.mc_samples; ++t) {
    const auto w = sample_window(4, 5, f.eval(Site{static_cast<std::int64_t>(t)}));
    auto it = index.find(w.symbols);
    if (it == index.end()) {
      ++improper;
      continue;
    }
    obs[it->second] += 1;
  }
  auto r = detail::renamed(chi2_goodness_of_fit(obs, probs, o.alpha), "q=4 n=5 samples vs exact law");
  r.counts["outside_support"] = static_cast<double>(improper);
  r.pass = r.pass && improper == 0;
  out.push_back(r);
  for (int q : {3, 4}) {
    const auto line = sample_window(q, o.line_sites, f.substream(std::uint64_t(q)).eval(Site{0}));
    std::size_t bad = 0;
    for (std::size_t i = 1; i < line.symbols.size(); ++i) bad += line.symbols[i] == line.symbols[i - 1];
    auto lr = detail::flag("proper line q=" + std::to_string(q) + " length " + std::to_string(o.line_sites), bad == 0);
    lr.counts["violations"] = static_cast<double>(bad);
    out.push_back(lr);
  }
  return out;
}

// ---------------------------------------------------------------------------
// structure

/// A full run whose final colours cover `interior` grown by the reduce
/// margin, so that its patch colours also support the doubled-margin check
/// of colour reduction on `interior`.
inline PipelineResult structure_run(const PipelineSpec& spec, std::uint64_t seed, const Box& interior, unsigned threads) {
  return run_pipeline(spec, seed, interior.grow(spec.reduce_margin), Stage::final, threads);
}

/// Net, cluster, tiling and colouring invariants of one run.
inline std::vector<CheckReport> structure_checks(const PipelineResult& r) {
  const PipelineSpec& s = r.spec;
  const std::string tag = "d=" + std::to_string(s.d) + " seed=" + std::to_string(r.seed);
  std::vector<CheckReport> out;
  if (r.nets) {
    for (std::size_t k = 0; k < r.nets->per_gamma.size(); ++k) {
      SiteConfig<std::uint8_t> j = r.nets->per_gamma[k];
      j.margin = s.net_scale;
      out.push_back(detail::renamed(check_net(j, s.net_scale, s.net_scale), "J_gamma[" + std::to_string(k) + "] " + tag));
    }
  }
  if (r.clusters) {
    auto c = detail::flag("cluster size " + tag, static_cast<std::int64_t>(r.clusters->max_size) <= s.kappa);
    c.counts["max_size"] = static_cast<double>(r.clusters->max_size);
    c.counts["max_diameter"] = static_cast<double>(r.clusters->max_diameter);
    c.counts["clusters"] = static_cast<double>(r.clusters->clusters);
    c.pass = c.pass && r.clusters->max_diameter <= (s.kappa - 1) * s.cluster_scale;
    out.push_back(c);
    SiteConfig<std::uint8_t> net = r.clusters->net;
    net.margin = s.cluster_cover();
    out.push_back(detail::renamed(check_net(net, s.cluster_scale, s.cluster_cover()), "cluster net " + tag));
  }
  if (r.tiling) {
    out.push_back(detail::renamed(check_max_value(*r.tiling, s.label_bound, "labels"), tag));
    SiteConfig<std::int64_t> y = *r.tiling;
    y.margin = s.kappa * s.tiling_range;
    out.push_back(detail::renamed(check_tiling(y, s.tiling_range, s.kappa), tag));
  }
  if (r.patch) out.push_back(detail::renamed(check_proper(r.patch->colours, s.tiling_range), "patchwork " + tag));
  if (r.final_colours) {
    out.push_back(detail::renamed(check_proper(*r.final_colours, 1), "final " + tag));
    auto a = check_max_value(*r.final_colours, std::int64_t{2 * s.d + 1}, "final colours <= 2d+1");
    a.counts["alphabet"] = static_cast<double>(alphabet_size(*r.final_colours));
    out.push_back(detail::renamed(a, tag));
  }
  return out;
}

/// Colour reduction on `interior` at the default margin against twice it.
inline CheckReport reduce_margin_check(const PipelineResult& r, const Box& interior) {
  const auto patch = encode_patch_colours(r.patch->colours);
  auto rep = margin_stability([&](std::int64_t m) { return reduce_colours(crop(patch, interior.grow(m)), m); }, interior,
                              r.spec.reduce_margin);
  return detail::renamed(rep, "reduce_colours d=" + std::to_string(r.spec.d) + " seed=" + std::to_string(r.seed));
}

/// Greedy net extraction on `interior` at margin M = margin_scale * s against 2M,
/// over one range-s colouring of the larger window.
inline CheckReport net_margin_check(const PipelineSpec& spec, std::uint64_t seed, const Box& interior) {
  const std::int64_t m = spec.net_margin();
  const RangeColouring x = range_colouring(SeededField(seed).substream("margins"), spec.net_scale, interior.grow(2 * m));
  auto rep = margin_stability([&](std::int64_t mm) { return net_extract(x, spec.net_scale, interior.grow(mm)); }, interior, m);
  return detail::renamed(rep, "net_extract d=" + std::to_string(spec.d) + " seed=" + std::to_string(seed));
}

inline Box centred_interior(int d, std::int64_t side) { return output_window(d, side); }

inline std::vector<CheckReport> suite_structure(const SuiteOptions& o, int d) {
  const PipelineSpec spec = PipelineSpec::make(d, o.margin_scale);
  const Box interior = centred_interior(d, d == 1 ? o.d1_window : o.window);
  std::vector<CheckReport> out;
  for (std::size_t i = 0; i < o.seeds; ++i) {
    const auto r = run_pipeline(spec, o.first_seed + i, interior, Stage::final, o.threads);
    for (auto& c : structure_checks(r)) out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<CheckReport> suite_margins(const SuiteOptions& o, int d) {
  const PipelineSpec spec = PipelineSpec::make(d, o.margin_scale);
  const Box interior = centred_interior(d, d == 1 ? o.d1_window : o.window);
  std::vector<CheckReport> out;
  for (std::size_t i = 0; i < o.seeds; ++i) {
    out.push_back(net_margin_check(spec, o.first_seed + i, interior));
    const auto r = run_pipeline(spec, o.first_seed + i, interior.grow(spec.reduce_margin), Stage::patchwork, o.threads);
    out.push_back(reduce_margin_check(r, interior));
  }
  return out;
}

// ---------------------------------------------------------------------------
// baseline and dependence

/// Product colouring: properness and alphabet on 64^2 windows.
inline std::vector<CheckReport> suite_baseline_structure(const SuiteOptions& o, std::size_t seeds = 100) {
  std::vector<CheckReport> out;
  std::size_t bad = 0, max_alpha = 0;
  CheckReport agg{"baseline d=2 proper, <= 16 symbols"};
  for (std::size_t i = 0; i < seeds; ++i) {
    const auto x = baseline_product_colouring(RunFields(o.first_seed + i).baseline, output_window(2, 64));
    const auto p = check_proper(x, 1);
    const std::size_t a = alphabet_size(x);
    max_alpha = std::max(max_alpha, a);
    if (!p.pass || a > 16) {
      ++bad;
      agg.witness("seed " + std::to_string(o.first_seed + i) + ": " + p.text());
    }
  }
  agg.counts["windows"] = static_cast<double>(seeds);
  agg.counts["failures"] = static_cast<double>(bad);
  agg.counts["max_alphabet"] = static_cast<double>(max_alpha);
  agg.pass = bad == 0;
  out.push_back(agg);
  return out;
}

inline std::vector<CheckReport> suite_baseline_dependence(const SuiteOptions& o) {
  std::vector<CheckReport> out;
  const Box window = output_window(2, 8);
  auto pair_at = [&](const Site& u, const Site& v) {
    return [=](std::uint64_t seed) {
      const auto x = baseline_product_colouring(RunFields(seed).baseline, window);
      return std::make_pair(encode_tuple(x.at(u)), encode_tuple(x.at(v)));
    };
  };
  auto far = chi2_pair_independence(pair_at(Site{3, 3}, Site{3, 5}), o.baseline_trials, o.first_seed, o.alpha);
  out.push_back(detail::renamed(far, "baseline d=2 |u-v|=2"));
  auto near = chi2_pair_independence(pair_at(Site{3, 3}, Site{3, 4}), o.baseline_dependence_trials, o.first_seed, o.alpha);
  near.name = "baseline d=2 |u-v|=1 dependence detected";
  near.pass = near.p_value && *near.p_value < o.alpha;
  out.push_back(near);
  return out;
}

/// d = 1 end to end: two sites one beyond the accumulated bound, across seeds.
inline std::vector<CheckReport> suite_d1_dependence(const SuiteOptions& o) {
  const PipelineSpec spec = PipelineSpec::make(1, o.margin_scale);
  const BoundReport bound = dependence_bound(spec);
  const auto gap = static_cast<std::int64_t>(bound.total) + 1;
  const Box window(Site{0}, Site{gap});
  auto sampler = [&](std::uint64_t seed) {
    const auto r = run_pipeline(spec, seed, window);
    return std::make_pair(r.final_colours->at(Site{0}), r.final_colours->at(Site{gap}));
  };
  auto rep = chi2_pair_independence(sampler, o.d1_trials, o.first_seed, o.alpha);
  rep.params["distance"] = gap;
  return {detail::renamed(rep, "d=1 final colours at distance " + std::to_string(gap))};
}

// ---------------------------------------------------------------------------
// equivariance

/// Random distinct-with-high-probability priorities.
inline SiteConfig<std::int64_t> random_priorities(const SeededField& f, const Box& b) {
  return map_values(sample(f, b), [](const Uniform& u) { return static_cast<std::int64_t>(u.bits >> 1); });
}

namespace detail {

template <class Stage, class Input>
void equivariance_cases(CheckReport& agg, const std::vector<Isometry>& gens, Stage&& stage, const Input& input) {
  for (const auto& g : gens) {
    const auto r = check_equivariance(stage, g, input);
    agg.counts["checks"] += 1;
    agg.counts["mismatched_cells"] += r.counts.count("mismatches") ? r.counts.at("mismatches") : 0;
    if (!r.pass) {
      agg.pass = false;
      agg.counts["failures"] += 1;
      agg.witness(r.text());
    }
  }
}

}  // namespace detail

/// Exact equivariance of every deterministic stage in dimension d under all
/// origin-fixing isometries and unit translations.
inline std::vector<CheckReport> suite_equivariance(const SuiteOptions& o, int d) {
  const PipelineSpec spec = PipelineSpec::make(d, 0);
  std::vector<Isometry> gens = group_elements(d);
  for (const auto& t : unit_translations(d)) gens.push_back(t);
  const OrbitLabelling labels(d, spec.tiling_cover);
  const std::string tag = " d=" + std::to_string(d);

  std::vector<CheckReport> out;
  auto run = [&](const std::string& name, auto&& make_input, auto&& stage) {
    CheckReport agg{"equivariance " + name + tag};
    agg.counts["inputs"] = static_cast<double>(o.equivariance_inputs);
    agg.counts["generators"] = static_cast<double>(gens.size());
    agg.counts["checks"] = 0;
    agg.counts["mismatched_cells"] = 0;
    agg.counts["failures"] = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < o.equivariance_inputs; ++i) {
      const SeededField f = SeededField(o.first_seed + i).substream("equivariance/" + name);
      try {
        detail::equivariance_cases(agg, gens, stage, make_input(f));
      } catch (const std::exception& e) {
        agg.pass = false;
        agg.witness(std::string("exception: ") + e.what());
      }
    }
    agg.counts["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(agg);
  };

  const std::int64_t s = spec.net_scale, b = spec.tiling_cover;
  run(
      "distribute", [&](const SeededField& f) { return sample(f, Box::cube(d, d == 1 ? 12 : 7)); },
      [](const SiteConfig<Uniform>& u) { return distribute(u).config(); });
  run(
      "net_extract",
      [&](const SeededField& f) { return range_colouring(f, 2, Box::cube(d, d == 1 ? 40 : 16)).materialize(); },
      [](const SiteConfig<TupleColour>& x) { return net_extract(x, 2); });
  run(
      "symmetrized_nets",
      [&](const SeededField& f) { return distribute(f, Box::cube(d, d == 1 ? 64 : 40)).config(); },
      [&](const PairConfig& w) { return symmetrized_nets(w, s, 0).union_net; });

  const std::int64_t cl = d == 1 ? 48 : 160;
  run(
      "cluster_net",
      [&](const SeededField& f) {
        SiteConfig<std::uint8_t> j(Box::cube(d, cl), 0);
        for (std::int64_t k = 0; k < spec.kappa; ++k) {
          const auto net = net_extract(random_priorities(f.substream(std::uint64_t(k)), j.box), s);
          for (std::size_t i = 0; i < j.values.size(); ++i) j.values[i] |= net.values[i];
        }
        return std::make_pair(j, sample(f.substream("U"), j.box));
      },
      [&](const std::pair<SiteConfig<std::uint8_t>, SiteConfig<Uniform>>& in) {
        return cluster_net(in.first, in.second, spec.kappa, spec.cluster_scale).net;
      });

  const Box tile_box = Box::cube(d, 2 * b + 48);
  auto random_net = [&](const SeededField& f) {
    return net_extract(random_priorities(f.substream("net"), tile_box), spec.kappa * spec.tiling_range);
  };
  run("orbit_tiling", random_net, [&](const SiteConfig<std::uint8_t>& net) { return orbit_tiling(net, b, labels); });
  auto tiled = [&](const SeededField& f) {
    return std::make_pair(orbit_tiling(random_net(f), b, labels), sample(f.substream("U"), tile_box));
  };
  run("patchwork", tiled, [&](const std::pair<SiteConfig<std::int64_t>, SiteConfig<Uniform>>& in) {
    return patchwork(in.first, in.second, spec.kappa, spec.tiling_range).colours;
  });
  run(
      "reduce_colours",
      [&](const SeededField& f) {
        const auto in = tiled(f);
        return encode_patch_colours(patchwork(in.first, in.second, spec.kappa, spec.tiling_range).colours);
      },
      [](const SiteConfig<std::int64_t>& x) { return reduce_colours(x, 0); });
  return out;
}

// ---------------------------------------------------------------------------
// bookkeeping

inline std::vector<CheckReport> suite_bookkeeping(const SuiteOptions& o) {
  std::vector<CheckReport> out;
  struct Toy {
    std::int64_t k0;
    std::vector<std::int64_t> radii;
    std::int64_t expect;
  };
  // hand-checked: each radius-r stage adds 2r
  const std::vector<Toy> toys{{1, {3}, 7}, {1, {1, 2, 3}, 13}, {0, {2, 2, 2}, 12}, {2, {0, 5, 1}, 14}};
  for (const auto& t : toys) {
    std::vector<BigInt> rs(t.radii.begin(), t.radii.end());
    const BigInt k = compose_dependence(t.k0, rs);
    out.push_back(detail::flag("compose k0=" + std::to_string(t.k0) + " -> " + std::to_string(t.expect), k == t.expect, k.str()));
  }
  for (int d : o.dims) {
    const auto rep = dependence_bound(PipelineSpec::make(d, o.margin_scale));
    BigInt k = rep.stages.front().k_after;
    bool chain = true;
    for (std::size_t i = 1; i < rep.stages.size(); ++i) {
      k = compose_dependence(k, {rep.stages[i].radius});
      chain = chain && k == rep.stages[i].k_after;
    }
    chain = chain && k == rep.total;
    out.push_back(detail::flag("bound chain d=" + std::to_string(d), chain, "k = " + big_str(rep.total)));
    BigInt ref = 1;
    std::int64_t e = 1;
    for (int i = 0; i < d * d; ++i) e *= d;
    for (std::int64_t i = 0; i < e; ++i) ref *= 6;
    std::int64_t m = 70 * d;
    for (int i = 0; i < d; ++i) m *= 10;
    out.push_back(detail::flag("reference figures d=" + std::to_string(d), rep.reference_k == ref && rep.reference_m == m,
                               "m = " + std::to_string(rep.reference_m) + ", k = 6^" + std::to_string(rep.reference_exponent) + " = " +
                                   big_str(rep.reference_k)));
  }
  return out;
}

// ---------------------------------------------------------------------------

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"oracle1d", "structure", "equivariance", "dependence", "margins", "all"};
  return names;
}

/// Runs a named suite. Structure and margins run for every requested
/// dimension; dependence covers the d = 1 pipeline and the d = 2 baseline.
inline std::vector<CheckReport> run_suite(const std::string& name, const SuiteOptions& o) {
  std::vector<CheckReport> out;
  auto add = [&](std::vector<CheckReport> rs) {
    for (auto& r : rs) out.push_back(std::move(r));
  };
  const bool all = name == "all";
  bool known = all;
  if (all || name == "oracle1d") {
    known = true;
    add(suite_oracle_law(o));
    add(suite_oracle_consistency(o));
    add(suite_oracle_monte_carlo(o));
  }
  if (all || name == "structure") {
    known = true;
    for (int d : o.dims) add(suite_structure(o, d));
    if (std::find(o.dims.begin(), o.dims.end(), 2) != o.dims.end()) add(suite_baseline_structure(o));
  }
  if (all || name == "equivariance") {
    known = true;
    for (int d : o.dims) add(suite_equivariance(o, d));
  }
  if (all || name == "dependence") {
    known = true;
    add(suite_d1_dependence(o));
    add(suite_baseline_dependence(o));
    add(suite_bookkeeping(o));
  }
  if (all || name == "margins") {
    known = true;
    for (int d : o.dims) add(suite_margins(o, d));
  }
  if (!known) throw std::invalid_argument("fdcol: unknown suite '" + name + "'");
  return out;
}

}  // namespace fdcol
