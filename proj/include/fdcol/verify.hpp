#pragma once

// Checkers: properness, nets, tilings, equivariance, chi-square tests and
// margin stability. All are pure functions returning a CheckReport.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "json.hpp"

#include "fdcol/lattice.hpp"
#include "fdcol/random_field.hpp"
#include "fdcol/site_config.hpp"
#include "fdcol/stage_isometry.hpp"

namespace fdcol {

using json = nlohmann::json;

struct CheckReport {
  std::string name;
  json params = json::object();
  bool pass = true;
  std::map<std::string, double> counts;
  std::vector<std::string> witnesses;
  std::optional<double> p_value;
  std::string note;

  static constexpr std::size_t kMaxWitnesses = 8;

  CheckReport() = default;
  explicit CheckReport(std::string n) : name(std::move(n)) {}

  void witness(std::string w) {
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(w));
  }

  json to_json() const {
    json j{{"name", name}, {"params", params}, {"pass", pass}, {"counts", counts}, {"witnesses", witnesses}};
    if (p_value) j["p_value"] = *p_value;
    if (!note.empty()) j["note"] = note;
    return j;
  }

  std::string text() const {
    std::ostringstream os;
    os << (pass ? "PASS " : "FAIL ") << name;
    if (!params.empty()) os << " " << params.dump();
    for (const auto& [k, v] : counts) os << " " << k << "=" << v;
    if (p_value) os << " p=" << *p_value;
    if (!note.empty()) os << " (" << note << ")";
    for (const auto& w : witnesses) os << "\n    witness: " << w;
    return os.str();
  }
};

inline bool all_pass(const std::vector<CheckReport>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const CheckReport& r) { return r.pass; });
}

namespace detail {

template <class T>
std::string value_str(const T& v) {
  if constexpr (std::is_same_v<T, TupleColour>) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(int(v[i]));
    return s + ")";
  } else if constexpr (std::is_same_v<T, PatchColour>) {
    return "(" + std::to_string(v.label) + "," + std::to_string(v.rank) + ")";
  } else if constexpr (std::is_same_v<T, Uniform>) {
    return std::to_string(v.bits);
  } else if constexpr (std::is_arithmetic_v<T>) {
    return std::to_string(+v);
  } else {
    return "?";
  }
}

/// Offsets o with 0 < |o| <= m and o > 0 lexicographically: one per unordered pair.
inline std::vector<Site> half_ball(int d, std::int64_t m) {
  std::vector<Site> out;
  const Site zero = Site::zero(d);
  for (const Site& o : ball(d, m))
    if (zero < o) out.push_back(o);
  return out;
}

}  // namespace detail

/// Every pair of distinct interior sites within distance m has distinct values.
template <class T>
CheckReport check_proper(const SiteConfig<T>& x, std::int64_t m) {
  CheckReport r{"proper"};
  r.params = {{"m", m}, {"window", x.box.str()}, {"margin", x.margin}};
  const Box in = x.interior();
  if (in.empty()) {
    r.pass = false;
    r.note = "empty interior";
    return r;
  }
  std::size_t pairs = 0, bad = 0;
  const auto offsets = detail::half_ball(x.dim(), m);
  for_each_site(in, [&](const Site& v) {
    const T& a = x.values[x.box.index(v)];
    for (const Site& o : offsets) {
      const Site w = v + o;
      if (!in.contains(w)) continue;
      ++pairs;
      if (a == x.values[x.box.index(w)]) {
        ++bad;
        r.witness(v.str() + " ~ " + w.str() + " both " + detail::value_str(a));
      }
    }
  });
  r.counts["pairs"] = static_cast<double>(pairs);
  r.counts["violations"] = static_cast<double>(bad);
  r.pass = bad == 0;
  return r;
}

/// Number of distinct values on the interior.
template <class T>
std::size_t alphabet_size(const SiteConfig<T>& x) {
  std::vector<T> vals;
  for_each_site(x.interior(), [&](const Site& v) { vals.push_back(x.values[x.box.index(v)]); });
  std::sort(vals.begin(), vals.end());
  return static_cast<std::size_t>(std::unique(vals.begin(), vals.end()) - vals.begin());
}

/// (a, b)-net: support pairwise more than a apart (whole window), and every
/// interior site within b of the support. Coverage needs margin >= b.
inline CheckReport check_net(const SiteConfig<std::uint8_t>& j, std::int64_t a, std::int64_t b) {
  CheckReport r{"net"};
  r.params = {{"a", a}, {"b", b}, {"window", j.box.str()}, {"margin", j.margin}};
  const int d = j.dim();
  std::size_t support = 0, close = 0;
  const auto offsets = detail::half_ball(d, a);
  for (std::size_t i = 0; i < j.values.size(); ++i) {
    if (!j.values[i]) continue;
    ++support;
    const Site v = j.box.site(i);
    for (const Site& o : offsets) {
      const Site w = v + o;
      if (j.box.contains(w) && j.values[j.box.index(w)]) {
        ++close;
        r.witness("separation: " + v.str() + " and " + w.str() + " at distance " + std::to_string(norm1(o)));
      }
    }
  }
  r.counts["support"] = static_cast<double>(support);
  r.counts["separation_violations"] = static_cast<double>(close);

  if (j.margin < b) {
    r.pass = false;
    r.note = "coverage undecidable: margin " + std::to_string(j.margin) + " < b = " + std::to_string(b);
    return r;
  }
  // multi-source BFS in the window; lattice paths realise the 1-norm inside a box
  std::vector<std::int64_t> dist(j.values.size(), -1);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < j.values.size(); ++i)
    if (j.values[i]) {
      dist[i] = 0;
      queue.push_back(i);
    }
  std::vector<std::ptrdiff_t> step(d);
  for (int ax = 0; ax < d; ++ax) step[ax] = static_cast<std::ptrdiff_t>(j.box.stride(ax));
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    if (dist[i] >= b) continue;
    const Site v = j.box.site(i);
    for (int ax = 0; ax < d; ++ax)
      for (int s : {-1, 1}) {
        const std::int64_t c = v.c[ax] + s;
        if (c < j.box.lo.c[ax] || c > j.box.hi.c[ax]) continue;
        const std::size_t n = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + s * step[ax]);
        if (dist[n] < 0) {
          dist[n] = dist[i] + 1;
          queue.push_back(n);
        }
      }
  }
  std::size_t uncovered = 0;
  std::int64_t worst = 0;
  for_each_site(j.interior(), [&](const Site& v) {
    const std::int64_t dv = dist[j.box.index(v)];
    if (dv < 0) {
      ++uncovered;
      r.witness("coverage: no support within " + std::to_string(b) + " of " + v.str());
    } else {
      worst = std::max(worst, dv);
    }
  });
  r.counts["uncovered"] = static_cast<double>(uncovered);
  r.counts["max_distance_to_support"] = static_cast<double>(worst);
  r.pass = close == 0 && uncovered == 0;
  return r;
}

/// Same-value components in Z^d[m] meeting the interior have at most `bound`
/// sites. Tiles are complete when margin >= bound * m.
template <class T>
CheckReport check_tiling(const SiteConfig<T>& y, std::int64_t m, std::int64_t bound) {
  CheckReport r{"tiling"};
  r.params = {{"m", m}, {"bound", bound}, {"window", y.box.str()}, {"margin", y.margin}};
  const Box in = y.interior();
  std::map<std::size_t, std::size_t> hist;
  std::int64_t max_diam = 0;
  std::size_t max_size = 0, bad = 0;
  for (const auto& tile : tiles(y, m)) {
    bool inside = false;
    for (auto i : tile) inside |= in.contains(y.box.site(i));
    if (!inside) continue;
    ++hist[tile.size()];
    max_size = std::max(max_size, tile.size());
    std::int64_t diam = 0;
    if (tile.size() <= 64)
      for (std::size_t a = 0; a < tile.size(); ++a)
        for (std::size_t b = a + 1; b < tile.size(); ++b) diam = std::max(diam, dist1(y.box.site(tile[a]), y.box.site(tile[b])));
    max_diam = std::max(max_diam, diam);
    if (static_cast<std::int64_t>(tile.size()) > bound) {
      ++bad;
      r.witness("tile of " + std::to_string(tile.size()) + " sites at " + y.box.site(tile.front()).str() + " with value " +
                detail::value_str(y.values[tile.front()]));
    }
  }
  for (const auto& [size, n] : hist) r.counts["size_" + std::to_string(size)] = static_cast<double>(n);
  r.counts["max_size"] = static_cast<double>(max_size);
  r.counts["max_diameter"] = static_cast<double>(max_diam);
  r.counts["violations"] = static_cast<double>(bad);
  if (y.margin < bound * m) r.note = "margin below bound*m: interior tiles may be truncated";
  r.pass = bad == 0;
  return r;
}

/// All values on the interior are at most `bound`.
template <class T>
CheckReport check_max_value(const SiteConfig<T>& y, T bound, std::string name = "max_value") {
  CheckReport r{std::move(name)};
  r.params = {{"bound", bound}, {"window", y.box.str()}};
  T worst{};
  bool first = true;
  std::size_t bad = 0;
  for_each_site(y.interior(), [&](const Site& v) {
    const T& x = y.values[y.box.index(v)];
    if (first || worst < x) worst = x;
    first = false;
    if (bound < x) {
      ++bad;
      r.witness(v.str() + " has " + detail::value_str(x));
    }
  });
  r.counts["max"] = static_cast<double>(worst);
  r.counts["violations"] = static_cast<double>(bad);
  r.pass = bad == 0;
  return r;
}

// ---------------------------------------------------------------------------
// equivariance

/// Joint action on a pair of inputs.
template <class A, class B>
std::pair<A, B> act(const std::pair<A, B>& p, const Isometry& theta) {
  return {act(p.first, theta), act(p.second, theta)};
}

namespace detail {
inline const Box& box_of(const PairConfig& c) { return c.box; }
template <class T>
const Box& box_of(const SiteConfig<T>& c) {
  return c.box;
}
template <class T>
std::size_t mismatches(const SiteConfig<T>& a, const SiteConfig<T>& b, CheckReport& r) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    if (!(a.values[i] == b.values[i])) {
      ++bad;
      r.witness("at " + a.box.site(i).str() + ": " + value_str(a.values[i]) + " vs " + value_str(b.values[i]));
    }
  return bad;
}
inline std::size_t mismatches(const PairConfig& a, const PairConfig& b, CheckReport& r) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    if (!(a.values[i] == b.values[i])) {
      ++bad;
      r.witness("at " + a.box.site(i / a.kappa).str() + " arrow " + std::to_string(i % a.kappa));
    }
  return bad;
}
}  // namespace detail

/// stage(theta x) == theta stage(x), cell by cell.
template <class Stage, class Input>
CheckReport check_equivariance(Stage&& stage, const Isometry& theta, const Input& input) {
  CheckReport r{"equivariance"};
  r.params = {{"theta", theta.str()}};
  const auto lhs = stage(act(input, theta));
  const auto rhs = act(stage(input), theta);
  const Box& lb = detail::box_of(lhs);
  const Box& rb = detail::box_of(rhs);
  if (!(lb == rb)) {
    r.pass = false;
    r.note = "window mismatch: " + lb.str() + " vs " + rb.str();
    return r;
  }
  const std::size_t bad = detail::mismatches(lhs, rhs, r);
  r.counts["cells"] = static_cast<double>(lhs.values.size());
  r.counts["mismatches"] = static_cast<double>(bad);
  r.pass = bad == 0;
  return r;
}

// ---------------------------------------------------------------------------
// chi-square tests

inline double chi2_upper_tail(double stat, double df) {
  if (df <= 0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(df), stat));
}

/// Goodness of fit of counts to exact probabilities. Cells with expected
/// count below 5 are pooled into one.
inline CheckReport chi2_goodness_of_fit(const std::vector<double>& observed, const std::vector<double>& probs, double alpha = 1e-3) {
  CheckReport r{"chi2_goodness_of_fit"};
  double total = 0;
  for (double o : observed) total += o;
  double stat = 0, pool_o = 0, pool_e = 0;
  std::size_t cells = 0, pooled = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = probs[i] * total;
    if (e < 5) {
      pool_o += observed[i];
      pool_e += e;
      ++pooled;
      if (e == 0 && observed[i] > 0) {
        r.witness("cell " + std::to_string(i) + " has probability 0 but was observed");
        r.pass = false;
      }
      continue;
    }
    stat += (observed[i] - e) * (observed[i] - e) / e;
    ++cells;
  }
  if (pool_e >= 5) {
    stat += (pool_o - pool_e) * (pool_o - pool_e) / pool_e;
    ++cells;
  }
  const double p = chi2_upper_tail(stat, static_cast<double>(cells) - 1);
  r.params = {{"alpha", alpha}};
  r.counts["samples"] = total;
  r.counts["cells"] = static_cast<double>(cells);
  r.counts["pooled_cells"] = static_cast<double>(pooled);
  r.counts["statistic"] = stat;
  r.p_value = p;
  r.pass = r.pass && p > alpha;
  return r;
}

/// Uniformity of values in [0, 1) over equal-width bins.
inline CheckReport chi2_uniform(const std::vector<double>& values, std::size_t bins = 64, double alpha = 1e-3) {
  std::vector<double> obs(bins, 0), probs(bins, 1.0 / static_cast<double>(bins));
  for (double v : values) obs[std::min(bins - 1, static_cast<std::size_t>(v * static_cast<double>(bins)))] += 1;
  CheckReport r = chi2_goodness_of_fit(obs, probs, alpha);
  r.name = "chi2_uniform";
  return r;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

/// Pearson chi-square test of independence on a contingency table of value
/// pairs. Rare categories are pooled per side before testing.
inline CheckReport chi2_independence(const std::vector<std::pair<std::int64_t, std::int64_t>>& pairs, double alpha = 1e-3) {
  CheckReport r{"chi2_pair_independence"};
  r.params = {{"alpha", alpha}};
  const double n = static_cast<double>(pairs.size());
  std::map<std::int64_t, double> ra, rb;
  for (const auto& [a, b] : pairs) {
    ra[a] += 1;
    rb[b] += 1;
  }
  // merge the rarest category of either side into that side's pool until
  // every expected cell count reaches 5
  constexpr std::int64_t kPool = std::numeric_limits<std::int64_t>::min();
  std::map<std::int64_t, std::int64_t> ma, mb;
  for (const auto& [k, c] : ra) ma[k] = k;
  for (const auto& [k, c] : rb) mb[k] = k;
  std::size_t merged_a = 0, merged_b = 0;
  auto rarest = [](const std::map<std::int64_t, double>& m) {
    return std::min_element(m.begin(), m.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
  };
  while (ra.size() > 1 && rb.size() > 1) {
    auto a = rarest(ra), b = rarest(rb);
    if (a->second * b->second / n >= 5) break;
    const bool left = a->second <= b->second;
    auto& marg = left ? ra : rb;
    auto& map = left ? ma : mb;
    auto it = left ? a : b;
    if (it->first == kPool) {
      // the pool itself is rarest: fold in the next rarest category
      double best = std::numeric_limits<double>::infinity();
      for (auto jt = marg.begin(); jt != marg.end(); ++jt)
        if (jt->first != kPool && jt->second < best) {
          best = jt->second;
          it = jt;
        }
    }
    const std::int64_t key = it->first;
    marg[kPool] += it->second;
    marg.erase(key);
    for (auto& [orig, to] : map)
      if (to == key) to = kPool;
    ++(left ? merged_a : merged_b);
  }
  std::map<std::pair<std::int64_t, std::int64_t>, double> table;
  std::map<std::int64_t, double> ca, cb;
  for (const auto& [a, b] : pairs) {
    const auto x = ma[a], y = mb[b];
    table[{x, y}] += 1;
    ca[x] += 1;
    cb[y] += 1;
  }
  double stat = 0;
  std::size_t low = 0;
  for (const auto& [x, fx] : ca)
    for (const auto& [y, fy] : cb) {
      const double e = fx * fy / n;
      if (e < 5) ++low;
      auto it = table.find({x, y});
      const double o = it == table.end() ? 0 : it->second;
      stat += (o - e) * (o - e) / e;
    }
  const double df = static_cast<double>((ca.size() - 1) * (cb.size() - 1));
  r.counts["trials"] = n;
  r.counts["rows"] = static_cast<double>(ca.size());
  r.counts["cols"] = static_cast<double>(cb.size());
  r.counts["merged_categories"] = static_cast<double>(merged_a + merged_b);
  r.counts["cells_expected_below_5"] = static_cast<double>(low);
  r.counts["statistic"] = stat;
  r.counts["df"] = df;
  if (merged_a + merged_b > 0) r.note = "rare categories merged";
  if (df == 0) {
    r.note = "degenerate table after merging";
    r.p_value = 1.0;
    return r;
  }
  r.p_value = chi2_upper_tail(stat, df);
  r.pass = *r.p_value > alpha;
  return r;
}

/// Joint law of (X(u), X(v)) over seeds first..first+trials-1; `sampler(seed)`
/// returns the pair of values.
template <class Sampler>
CheckReport chi2_pair_independence(Sampler&& sampler, std::size_t trials, std::uint64_t first_seed = 0, double alpha = 1e-3) {
  if (trials < 10000) throw std::invalid_argument("fdcol: pair independence needs at least 10^4 trials");
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  pairs.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) pairs.push_back(sampler(first_seed + t));
  return chi2_independence(pairs, alpha);
}

// ---------------------------------------------------------------------------
// margin stability

/// `stage(margin)` computes a configuration covering `interior` using the
/// given margin; compares margin against 2*margin on the interior.
template <class Stage>
CheckReport margin_stability(Stage&& stage, const Box& interior, std::int64_t margin) {
  CheckReport r{"margin_stability"};
  r.params = {{"margin", margin}, {"interior", interior.str()}};
  const auto a = stage(margin);
  const auto b = stage(2 * margin);
  std::size_t changed = 0, cells = 0;
  for_each_site(interior, [&](const Site& v) {
    ++cells;
    const auto& x = a.at(v);
    const auto& y = b.at(v);
    if (!(x == y)) {
      ++changed;
      r.witness(v.str() + ": " + detail::value_str(x) + " vs " + detail::value_str(y));
    }
  });
  r.counts["cells"] = static_cast<double>(cells);
  r.counts["changed"] = static_cast<double>(changed);
  r.counts["changed_fraction"] = cells ? static_cast<double>(changed) / static_cast<double>(cells) : 0.0;
  r.pass = changed == 0;
  return r;
}

}  // namespace fdcol
