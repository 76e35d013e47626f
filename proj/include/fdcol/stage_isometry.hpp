#pragma once

// Isometry-equivariant stages: the maximum of symmetrised nets, cluster
// thinning, orbit-label tiling, patchwork colouring and colour reduction,
// plus the dependence-distance bookkeeping for the whole chain.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <span>
#include <thread>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fdcol/lattice.hpp"
#include "fdcol/random_field.hpp"
#include "fdcol/site_config.hpp"
#include "fdcol/stage_translation.hpp"

namespace fdcol {

/// Scales of the pipeline in dimension d. The hypotheses chain as follows:
/// the kappa symmetrised nets are (s, s)-nets with s = kappa * m_c, so cluster
/// thinning yields an (m_c, 2 kappa m_c)-net; with m_c = kappa * m_t that is a
/// (kappa m_t, b)-net for b = 2 kappa^2 m_t, which is what the tiling needs.
struct PipelineSpec {
  int d = 1;
  std::int64_t kappa = 2;
  std::int64_t net_scale = 4;      // s
  std::int64_t cluster_scale = 2;  // m_c
  std::int64_t tiling_range = 1;   // m_t
  std::int64_t tiling_cover = 8;   // b
  std::int64_t label_bound = 8;    // largest orbit label at norm b
  std::int64_t margin_scale = 8;   // net margin in units of s
  std::int64_t reduce_margin = 8;
  int q = 4;

  static PipelineSpec make(int d, std::int64_t margin_scale = 8) {
    check_dim(d);
    if (margin_scale < 0) throw std::invalid_argument("fdcol: margin scale must be >= 0");
    PipelineSpec p;
    p.d = d;
    p.kappa = fdcol::kappa(d);
    p.tiling_range = 1;
    p.cluster_scale = p.kappa * p.tiling_range;
    p.net_scale = p.kappa * p.cluster_scale;
    p.tiling_cover = 2 * p.kappa * p.kappa * p.tiling_range;
    p.label_bound = orbit_count_upto(d, p.tiling_cover) - 1;
    p.margin_scale = margin_scale;
    p.reduce_margin = p.tiling_cover;
    return p;
  }

  std::int64_t net_margin() const { return margin_scale * net_scale; }
  std::int64_t cluster_radius() const { return kappa * cluster_scale; }
  std::int64_t patch_radius() const { return (kappa + 1) * tiling_range; }
  /// Net-clause parameters of the cluster-thinned net.
  std::int64_t cluster_cover() const { return 2 * kappa * cluster_scale; }
};

// ---------------------------------------------------------------------------
// symmetrised nets

/// G: the translation-equivariant net factor at scale s. Range-s colouring of
/// the field, greedy net extraction, then `margin` trimmed off every side.
inline SiteConfig<std::uint8_t> net_factor(SiteConfig<Uniform> field, std::int64_t s, std::int64_t margin) {
  const Box out = field.box.shrink(margin);
  if (out.empty()) throw std::invalid_argument("fdcol: window " + field.box.str() + " smaller than net margin " + std::to_string(margin));
  const Box whole = field.box;
  const RangeColouring x = range_colouring(std::move(field), s);
  return crop(net_extract(x, s, whole), out);
}

struct SymmetrizedNets {
  SiteConfig<std::uint8_t> union_net;             // J
  std::vector<SiteConfig<std::uint8_t>> per_gamma;  // J_gamma, canonical group order
};

/// J = max over gamma of gamma G(gamma^{-1} W_gamma), with W_gamma(x) = W(x, x + gamma rho).
/// `arrow(x, k)` returns W(x, x + gamma_k rho) for x in `box`.
template <class Arrow>
SymmetrizedNets symmetrized_nets(const Box& box, Arrow&& arrow, std::int64_t s, std::int64_t margin, unsigned threads = 1) {
  const int d = box.dim();
  const Group g(d);
  const Box out = box.shrink(margin);
  if (out.empty()) throw std::invalid_argument("fdcol: window " + box.str() + " smaller than net margin " + std::to_string(margin));
  SymmetrizedNets r;
  r.per_gamma.resize(g.size());
  auto branch = [&](std::size_t k) {
    const Isometry& gamma = g[k];
    const Box gbox = inverse(gamma).apply(box);
    SiteConfig<Uniform> f(gbox);
    std::size_t i = 0;
    for_each_site(gbox, [&](const Site& x) { f.values[i++] = arrow(gamma.apply(x), k); });
    r.per_gamma[k] = act(net_factor(std::move(f), s, margin), gamma, out);
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(g.size())));
  if (threads == 1) {
    for (std::size_t k = 0; k < g.size(); ++k) branch(k);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t k = t; k < g.size(); k += threads) branch(k);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  r.union_net = SiteConfig<std::uint8_t>(out, 0);
  for (const auto& j : r.per_gamma)
    for (std::size_t i = 0; i < j.values.size(); ++i) r.union_net.values[i] |= j.values[i];
  return r;
}

inline SymmetrizedNets symmetrized_nets(const PairField& w, std::int64_t s, std::int64_t margin, unsigned threads = 1) {
  return symmetrized_nets(w.box(), [&](const Site& x, std::size_t k) { return w.at(x, k); }, s, margin, threads);
}

inline SymmetrizedNets symmetrized_nets(const PairConfig& w, std::int64_t s, std::int64_t margin, unsigned threads = 1) {
  return symmetrized_nets(w.box, [&](const Site& x, std::size_t k) { return w.at(x, k); }, s, margin, threads);
}

inline SymmetrizedNets symmetrized_nets(const SeededField& u, const PipelineSpec& spec, const Box& window, unsigned threads = 1) {
  return symmetrized_nets(distribute(u, window), spec.net_scale, spec.net_margin(), threads);
}

// ---------------------------------------------------------------------------
// cluster thinning

struct ClusterNet {
  SiteConfig<std::uint8_t> net;
  std::size_t clusters = 0;
  std::size_t max_size = 0;
  std::int64_t max_diameter = 0;
};

/// Clusters are the components of supp(J) in Z^d[m]; each keeps only its site
/// with the largest U. Every output site's cluster lies within (k-1)m, so the
/// result is exact on J's box shrunk by k*m.
///
/// Throws if a cluster has more than k sites.
inline ClusterNet cluster_net(const SiteConfig<std::uint8_t>& j, const SiteConfig<Uniform>& u, std::int64_t k, std::int64_t m) {
  if (!u.box.contains(j.box)) throw std::invalid_argument("fdcol: cluster uniforms do not cover " + j.box.str());
  const Box out = j.box.shrink(k * m);
  if (out.empty()) throw std::invalid_argument("fdcol: window " + j.box.str() + " too small for cluster radius " + std::to_string(k * m));
  const int d = j.dim();

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> support, slot(j.values.size(), kNone);
  for (std::size_t i = 0; i < j.values.size(); ++i)
    if (j.values[i]) {
      slot[i] = support.size();
      support.push_back(i);
    }

  std::vector<std::size_t> parent(support.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::vector<Site> offsets;
  for (const Site& o : ball(d, m))
    if (Site::zero(d) < o) offsets.push_back(o);
  for (std::size_t i = 0; i < support.size(); ++i) {
    const Site x = j.box.site(support[i]);
    for (const Site& o : offsets) {
      const Site y = x + o;
      if (!j.box.contains(y)) continue;
      const std::size_t t = slot[j.box.index(y)];
      if (t == kNone) continue;
      const std::size_t a = find(i), b = find(t);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }

  // members grouped by root, each group in lexicographic order
  std::vector<std::pair<std::size_t, std::size_t>> by_root(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) by_root[i] = {find(i), i};
  std::sort(by_root.begin(), by_root.end());

  ClusterNet r;
  r.net = SiteConfig<std::uint8_t>(out, 0);
  std::vector<Site> sites;
  for (std::size_t a = 0; a < by_root.size();) {
    std::size_t b = a;
    sites.clear();
    for (; b < by_root.size() && by_root[b].first == by_root[a].first; ++b) sites.push_back(j.box.site(support[by_root[b].second]));
    a = b;
    ++r.clusters;
    if (static_cast<std::int64_t>(sites.size()) > k)
      throw std::runtime_error("fdcol: cluster of " + std::to_string(sites.size()) + " sites at " + sites.front().str() +
                               " exceeds bound " + std::to_string(k));
    r.max_size = std::max(r.max_size, sites.size());
    for (std::size_t p = 0; p < sites.size(); ++p)
      for (std::size_t q = p + 1; q < sites.size(); ++q) r.max_diameter = std::max(r.max_diameter, dist1(sites[p], sites[q]));
    // the first of equal maxima wins
    std::size_t best = 0;
    for (std::size_t p = 1; p < sites.size(); ++p)
      if (u.at(sites[p]).bits > u.at(sites[best]).bits) best = p;
    if (out.contains(sites[best])) r.net.at(sites[best]) = 1;
  }
  return r;
}

inline ClusterNet cluster_net(const SiteConfig<std::uint8_t>& j, const SiteConfig<Uniform>& u, const PipelineSpec& spec) {
  return cluster_net(j, u, spec.kappa, spec.cluster_scale);
}

// ---------------------------------------------------------------------------
// orbit tiling

/// Y(v) = min{label(v - u) : I(u) = 1, |v - u| <= b}; the closest net point
/// wins. Exact on I's box shrunk by b. Throws if a site there has no net
/// point within b.
inline SiteConfig<std::int64_t> orbit_tiling(const SiteConfig<std::uint8_t>& net, std::int64_t b, const OrbitLabelling& labels) {
  const int d = net.dim();
  if (labels.max_norm() < b) throw std::invalid_argument("fdcol: orbit labelling covers norm " + std::to_string(labels.max_norm()) + " < " + std::to_string(b));
  const Box out = net.box.shrink(b);
  if (out.empty()) throw std::invalid_argument("fdcol: window " + net.box.str() + " too small for tiling radius " + std::to_string(b));

  constexpr std::int64_t kUnset = std::numeric_limits<std::int64_t>::max();
  // labels on the cube [-b, b]^d, unset outside the ball
  const Box cube = Box::centred(d, b);
  std::vector<std::int64_t> table(cube.volume(), kUnset);
  for (const Site& o : ball(d, b)) table[cube.index(o)] = labels.label(o);

  SiteConfig<std::int64_t> y(out, kUnset);
  const int last = d - 1;
  for (std::size_t i = 0; i < net.values.size(); ++i) {
    if (!net.values[i]) continue;
    const Site u = net.box.site(i);
    Box rows = out.intersect(Box(u + cube.lo, u + cube.hi));
    if (rows.empty()) continue;
    rows.hi.c[last] = rows.lo.c[last];
    // paint the ball row by row along the last axis
    for_each_site(rows, [&](Site v) {
      std::int64_t r = b;
      for (int a = 0; a < last; ++a) r -= checked_abs(v.c[a] - u.c[a]);
      if (r < 0) return;
      const std::int64_t lo = std::max(out.lo.c[last], u.c[last] - r), hi = std::min(out.hi.c[last], u.c[last] + r);
      if (lo > hi) return;
      v.c[last] = lo;
      std::int64_t* dst = y.values.data() + out.index(v);
      const std::int64_t* src = table.data() + cube.index(v - u);
      for (std::int64_t k = 0; k <= hi - lo; ++k) dst[k] = std::min(dst[k], src[k]);
    });
  }
  for (std::size_t i = 0; i < y.values.size(); ++i)
    if (y.values[i] == kUnset)
      throw std::runtime_error("fdcol: no net point within " + std::to_string(b) + " of " + out.site(i).str());
  return y;
}

inline SiteConfig<std::int64_t> orbit_tiling(const SiteConfig<std::uint8_t>& net, const PipelineSpec& spec) {
  return orbit_tiling(net, spec.tiling_cover, OrbitLabelling(spec.d, spec.tiling_cover));
}

// ---------------------------------------------------------------------------
// tiles and patchwork

struct PatchColour {
  std::int64_t label = 0;
  std::int64_t rank = 0;
  friend auto operator<=>(const PatchColour&, const PatchColour&) = default;
};

namespace detail {

/// Same-value components in Z^d[m] as one flat list: tile t is
/// sites[start[t] .. start[t+1]), in lexicographic order.
struct TilePartition {
  std::vector<std::size_t> sites;
  std::vector<std::size_t> start{0};
  std::size_t count() const { return start.size() - 1; }
};

template <class T>
TilePartition tile_partition(const SiteConfig<T>& y, std::int64_t m) {
  const int d = y.dim();
  std::vector<Site> offsets;
  std::vector<std::ptrdiff_t> delta;
  for (const Site& o : ball(d, m))
    if (norm1(o) > 0) {
      offsets.push_back(o);
      std::ptrdiff_t dl = 0;
      for (int a = 0; a < d; ++a) dl += o.c[a] * static_cast<std::ptrdiff_t>(y.box.stride(a));
      delta.push_back(dl);
    }
  std::vector<char> seen(y.values.size(), 0);
  TilePartition out;
  out.sites.reserve(y.values.size());
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < y.values.size(); ++i) {
    if (seen[i]) continue;
    const std::size_t first = out.sites.size();
    seen[i] = 1;
    stack.push_back(i);
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      out.sites.push_back(a);
      const Site x = y.box.site(a);
      for (std::size_t o = 0; o < offsets.size(); ++o) {
        bool inside = true;
        for (int ax = 0; ax < d && inside; ++ax) {
          const std::int64_t z = x.c[ax] + offsets[o].c[ax];
          inside = z >= y.box.lo.c[ax] && z <= y.box.hi.c[ax];
        }
        if (!inside) continue;
        const auto c = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(a) + delta[o]);
        if (!seen[c] && y.values[c] == y.values[a]) {
          seen[c] = 1;
          stack.push_back(c);
        }
      }
    }
    std::sort(out.sites.begin() + static_cast<std::ptrdiff_t>(first), out.sites.end());
    out.start.push_back(out.sites.size());
  }
  return out;
}

}  // namespace detail

/// Same-label components of a label field in Z^d[m], as lists of linear
/// indices in lexicographic order. Tiles touching the box boundary may be
/// truncated.
template <class T>
std::vector<std::vector<std::size_t>> tiles(const SiteConfig<T>& y, std::int64_t m) {
  const auto p = detail::tile_partition(y, m);
  std::vector<std::vector<std::size_t>> out(p.count());
  for (std::size_t t = 0; t < p.count(); ++t)
    out[t].assign(p.sites.begin() + static_cast<std::ptrdiff_t>(p.start[t]), p.sites.begin() + static_cast<std::ptrdiff_t>(p.start[t + 1]));
  return out;
}

struct Patchwork {
  SiteConfig<PatchColour> colours;
  std::size_t max_tile = 0;
  std::size_t ties = 0;  // bit-equal uniforms inside a tile, broken by site order
};

/// X(v) = (Y(v), rank of U(v) within v's tile), rank 1 = largest. Exact on Y's
/// box shrunk by (c+1)m. Throws if a tile has more than c sites.
inline Patchwork patchwork(const SiteConfig<std::int64_t>& y, const SiteConfig<Uniform>& u, std::int64_t c, std::int64_t m) {
  if (!u.box.contains(y.box)) throw std::invalid_argument("fdcol: patchwork uniforms do not cover " + y.box.str());
  const Box out = y.box.shrink((c + 1) * m);
  if (out.empty()) throw std::invalid_argument("fdcol: window " + y.box.str() + " too small for patchwork");
  Patchwork r;
  r.colours = SiteConfig<PatchColour>(out);
  const auto part = detail::tile_partition(y, m);
  std::vector<std::uint64_t> key;
  std::vector<std::size_t> order;
  for (std::size_t t = 0; t < part.count(); ++t) {
    const std::span<const std::size_t> tile(part.sites.data() + part.start[t], part.start[t + 1] - part.start[t]);
    if (static_cast<std::int64_t>(tile.size()) > c)
      throw std::runtime_error("fdcol: tile of " + std::to_string(tile.size()) + " sites at " + y.box.site(tile.front()).str() +
                               " exceeds bound " + std::to_string(c));
    r.max_tile = std::max(r.max_tile, tile.size());
    key.clear();
    for (auto i : tile) key.push_back(u.values[u.box.index(y.box.site(i))].bits);
    order.resize(tile.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // equal uniforms keep site order
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] != key[b] ? key[a] > key[b] : a < b; });
    for (std::size_t p = 1; p < order.size(); ++p) r.ties += key[order[p]] == key[order[p - 1]];
    for (std::size_t p = 0; p < order.size(); ++p) {
      const Site v = y.box.site(tile[order[p]]);
      if (out.contains(v)) r.colours.values[out.index(v)] = {y.values[tile[order[p]]], static_cast<std::int64_t>(p + 1)};
    }
  }
  return r;
}

inline Patchwork patchwork(const SiteConfig<std::int64_t>& y, const SiteConfig<Uniform>& u, const PipelineSpec& spec) {
  return patchwork(y, u, spec.kappa, spec.tiling_range);
}

/// Integer code of a patch colour, above 2d+1 and increasing in (label, rank).
inline std::int64_t encode_patch_colour(const PatchColour& p, int d) {
  return 2 * d + 1 + p.label * kappa(d) + p.rank;
}

inline SiteConfig<std::int64_t> encode_patch_colours(const SiteConfig<PatchColour>& x) {
  const int d = x.dim();
  return map_values(x, [d](const PatchColour& p) { return encode_patch_colour(p, d); });
}

// ---------------------------------------------------------------------------
// colour reduction

/// Greedy reduction of a proper range-1 colouring to 2d+1 colours. Colours
/// above 2d+1 are visited in descending order; each site takes the least
/// value in 1..2d+1 missing among its 2d neighbours. Sites sharing a colour are
/// pairwise non-adjacent, so the order within a colour class does not matter.
///
/// Returns the result on the box shrunk by `margin`; the boundary layer is
/// only context.
inline SiteConfig<std::int64_t> reduce_colours(const SiteConfig<std::int64_t>& x, std::int64_t margin) {
  const int d = x.dim();
  const std::int64_t top = 2 * d + 1;
  const Box out = x.box.shrink(margin);
  if (out.empty()) throw std::invalid_argument("fdcol: window " + x.box.str() + " smaller than reduce margin " + std::to_string(margin));

  std::vector<std::ptrdiff_t> step(d);
  for (int a = 0; a < d; ++a) step[a] = static_cast<std::ptrdiff_t>(x.box.stride(a));
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    if (x.values[i] < 1) throw std::invalid_argument("fdcol: colour " + std::to_string(x.values[i]) + " at " + x.box.site(i).str() + " is not positive");
    const Site v = x.box.site(i);
    for (int a = 0; a < d; ++a)
      if (v.c[a] < x.box.hi.c[a] && x.values[i] == x.values[i + step[a]])
        throw std::invalid_argument("fdcol: improper input colouring at " + v.str());
    if (x.values[i] > top) todo.push_back(i);
  }
  std::sort(todo.begin(), todo.end(), [&](std::size_t a, std::size_t b) {
    return x.values[a] != x.values[b] ? x.values[a] > x.values[b] : a < b;
  });

  std::vector<std::int64_t> cur = x.values;
  for (std::size_t i : todo) {
    const Site v = x.box.site(i);
    std::uint32_t used = 0;
    for (int a = 0; a < d; ++a) {
      if (v.c[a] > x.box.lo.c[a] && cur[i - step[a]] <= top) used |= 1u << cur[i - step[a]];
      if (v.c[a] < x.box.hi.c[a] && cur[i + step[a]] <= top) used |= 1u << cur[i + step[a]];
    }
    std::int64_t c = 1;
    while (used & (1u << c)) ++c;
    cur[i] = c;
  }
  SiteConfig<std::int64_t> full(x.box);
  full.values = std::move(cur);
  return crop(full, out);
}

// ---------------------------------------------------------------------------
// dependence bookkeeping

using BigInt = boost::multiprecision::cpp_int;

/// A radius-r block factor of a k-dependent process is (k + 2r)-dependent.
inline BigInt compose_dependence(const BigInt& k0, const std::vector<BigInt>& radii) {
  BigInt k = k0;
  for (const auto& r : radii) k += 2 * r;
  return k;
}

struct BoundStage {
  std::string name;
  BigInt radius;
  BigInt k_after;
  std::string note;
};

struct BoundReport {
  int d = 1;
  std::vector<BoundStage> stages;
  BigInt total;
  BigInt empirical_total;  // with the net stage at its measured stability margin
  BigInt reference_k;      // 6^(d^(d^2))
  std::int64_t reference_exponent = 0;
  std::int64_t reference_m = 0;  // 70 d 10^d

  std::string text() const;
};

inline std::string big_str(const BigInt& v, std::size_t max_digits = 40) {
  std::string s = v.str();
  if (s.size() <= max_digits) return s;
  return s.substr(0, 6) + "...(" + std::to_string(s.size()) + " digits)";
}

inline std::string BoundReport::text() const {
  std::ostringstream os;
  os << "dependence bound, d=" << d << "\n";
  os << "  stage                radius                                    k\n";
  for (const auto& s : stages) {
    os << "  " << s.name << std::string(s.name.size() < 20 ? 20 - s.name.size() : 1, ' ') << " " << big_str(s.radius)
       << std::string(42 > big_str(s.radius).size() ? 42 - big_str(s.radius).size() : 1, ' ') << big_str(s.k_after);
    if (!s.note.empty()) os << "   (" << s.note << ")";
    os << "\n";
  }
  os << "  accumulated k: " << big_str(total) << "\n";
  os << "  with measured net margin: " << big_str(empirical_total) << "\n";
  os << "  reference: four-colour reduction scale m = 70d*10^d = " << reference_m << "\n";
  os << "  reference: k = 6^(d^(d^2)) = 6^" << reference_exponent << " = " << big_str(reference_k) << "\n";
  return os.str();
}

inline BigInt big_pow(BigInt base, std::uint64_t e) {
  BigInt r = 1;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

/// Stage-by-stage dependence distance of the pipeline under `spec`.
inline BoundReport dependence_bound(const PipelineSpec& spec) {
  BoundReport r;
  r.d = spec.d;
  const std::int64_t s = spec.net_scale;
  const std::size_t dirs = DirectionSet(spec.d, s).size();
  const BigInt tuple_colours = big_pow(spec.q, dirs);

  BigInt k = s;
  r.stages.push_back({"range colouring", 0, k, "lines are 1-dependent; |H| = " + std::to_string(dirs)});
  auto add = [&](std::string name, BigInt radius, std::string note) {
    k += 2 * radius;
    r.stages.push_back({std::move(name), radius, k, std::move(note)});
  };
  const BigInt k_before_net = k;
  add("net extraction", tuple_colours * s, "cascade over 4^|H| colours at scale s");
  const BigInt tail_start = k;
  add("distribute", spec.d, "");
  add("cluster thinning", spec.cluster_radius(), "");
  add("orbit tiling", spec.tiling_cover, "");
  add("patchwork", spec.patch_radius(), "");
  add("colour reduction", BigInt(spec.label_bound + 1) * spec.kappa, "chains through distinct patch colours");
  r.total = k;
  r.empirical_total = k_before_net + 2 * BigInt(spec.net_margin()) + (k - tail_start);

  std::int64_t e = 1;
  for (int i = 0; i < spec.d * spec.d; ++i) e = checked_mul(e, spec.d);
  r.reference_exponent = e;
  r.reference_k = big_pow(6, static_cast<std::uint64_t>(e));
  std::int64_t p10 = 1;
  for (int i = 0; i < spec.d; ++i) p10 *= 10;
  r.reference_m = 70 * spec.d * p10;
  return r;
}

}  // namespace fdcol
