#pragma once

// Translation-equivariant stages: the line-product range-m colouring, greedy
// net extraction, and the axis-product baseline colouring.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fdcol/hl1d.hpp"
#include "fdcol/lattice.hpp"
#include "fdcol/random_field.hpp"
#include "fdcol/site_config.hpp"

namespace fdcol {

/// Per-direction colours in canonical direction order; compared lexicographically.
using TupleColour = std::vector<Colour>;

/// Anything that can report colour components of the sites of its box. The
/// colour of a site is the tuple of its components, ordered lexicographically.
template <class S>
concept ColourSource = requires(const S& s, std::size_t j, std::span<const std::size_t> idx, std::span<std::int64_t> out) {
  { s.box() } -> std::convertible_to<Box>;
  { s.num_components() } -> std::convertible_to<std::size_t>;
  s.component(j, idx, out);
};

/// Range-m colouring built from one 1D colouring per line: for every
/// direction h of the direction set and every line of direction h meeting the
/// window, the window sampler (q = 4) is run once over the segment of the line
/// inside the window. The segment's randomness is the field value at its first
/// site (the end reached by stepping along -h), split by a label of h, so the
/// colouring commutes with translations of (field, window).
///
/// Colours are evaluated lazily, one direction at a time.
class RangeColouring {
 public:
  RangeColouring(SiteConfig<Uniform> field, DirectionSet dirs, int q = 4)
      : field_(std::move(field)), dirs_(std::move(dirs)), q_(q) {
    if (field_.box.empty()) throw std::invalid_argument("fdcol: range colouring on an empty window");
    check_colour_count(q_, false);
    for (const Site& h : dirs_.dirs()) {
      labels_.push_back(label("line", h));
      std::ptrdiff_t off = 0;
      for (int a = 0; a < h.dim; ++a) off += h.c[a] * static_cast<std::ptrdiff_t>(field_.box.stride(a));
      strides_.push_back(off);
    }
  }

  const Box& box() const { return field_.box; }
  std::size_t num_components() const { return dirs_.size(); }
  const DirectionSet& directions() const { return dirs_; }
  int colours_per_line() const { return q_; }

  struct Segment {
    std::size_t start;   // linear index of the first site
    std::int64_t index;  // position of the queried site in the segment
    std::int64_t length;
  };

  Segment segment(std::size_t j, const Site& v) const {
    const Site& h = dirs_[j];
    const Box& b = field_.box;
    std::int64_t back = std::numeric_limits<std::int64_t>::max(), fwd = back;
    for (int a = 0; a < h.dim; ++a) {
      if (h.c[a] > 0) {
        back = std::min(back, (v.c[a] - b.lo.c[a]) / h.c[a]);
        fwd = std::min(fwd, (b.hi.c[a] - v.c[a]) / h.c[a]);
      } else if (h.c[a] < 0) {
        back = std::min(back, (b.hi.c[a] - v.c[a]) / -h.c[a]);
        fwd = std::min(fwd, (v.c[a] - b.lo.c[a]) / -h.c[a]);
      }
    }
    const auto idx = static_cast<std::ptrdiff_t>(b.index(v));
    return {static_cast<std::size_t>(idx - back * strides_[j]), back, back + fwd + 1};
  }

  /// Colour of the 1D word along direction j, for the given linear indices.
  void component(std::size_t j, std::span<const std::size_t> sites, std::span<std::int64_t> out) const {
    // words are cached per call, keyed by segment start; dense table for big batches
    std::vector<Colour> symbols;
    auto sample_at = [&](std::size_t start, std::int64_t length) {
      const auto offset = static_cast<std::uint32_t>(symbols.size());
      const auto w = sample_window(q_, static_cast<std::size_t>(length), field_.values[start].split(labels_[j]));
      symbols.insert(symbols.end(), w.symbols.begin(), w.symbols.end());
      return offset;
    };
    if (sites.size() * 16 >= field_.size()) {
      std::vector<std::uint32_t> slot(field_.size(), kNone);
      for (std::size_t i = 0; i < sites.size(); ++i) {
        const Segment seg = segment(j, field_.box.site(sites[i]));
        if (slot[seg.start] == kNone) slot[seg.start] = sample_at(seg.start, seg.length);
        out[i] = symbols[slot[seg.start] + static_cast<std::size_t>(seg.index)];
      }
    } else {
      std::unordered_map<std::size_t, std::uint32_t> slot;
      for (std::size_t i = 0; i < sites.size(); ++i) {
        const Segment seg = segment(j, field_.box.site(sites[i]));
        auto it = slot.find(seg.start);
        if (it == slot.end()) it = slot.emplace(seg.start, sample_at(seg.start, seg.length)).first;
        out[i] = symbols[it->second + static_cast<std::size_t>(seg.index)];
      }
    }
  }

  TupleColour tuple(const Site& v) const {
    TupleColour t(dirs_.size());
    const std::size_t idx = field_.box.index(v);
    std::int64_t c = 0;
    for (std::size_t j = 0; j < dirs_.size(); ++j) {
      component(j, std::span<const std::size_t>(&idx, 1), std::span<std::int64_t>(&c, 1));
      t[j] = static_cast<Colour>(c);
    }
    return t;
  }

  SiteConfig<TupleColour> materialize() const {
    SiteConfig<TupleColour> out(field_.box, TupleColour(dirs_.size()));
    std::vector<std::size_t> all(out.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::int64_t> col(all.size());
    for (std::size_t j = 0; j < dirs_.size(); ++j) {
      component(j, all, col);
      for (std::size_t i = 0; i < all.size(); ++i) out.values[i][j] = static_cast<Colour>(col[i]);
    }
    return out;
  }

 private:
  SiteConfig<Uniform> field_;
  DirectionSet dirs_;
  int q_;
  std::vector<std::uint64_t> labels_;
  std::vector<std::ptrdiff_t> strides_;
  static constexpr std::uint32_t kNone = 0xffffffffu;
};

inline RangeColouring range_colouring(SiteConfig<Uniform> field, std::int64_t m) {
  const int d = field.dim();
  return RangeColouring(std::move(field), DirectionSet(d, m));
}

inline RangeColouring range_colouring(const SeededField& field, std::int64_t m, const Box& window) {
  return range_colouring(sample(field, window), m);
}

/// Colour source over a materialised configuration: integral colours are a
/// single component, tuple colours one component per entry.
template <class T>
class ConfigColours {
 public:
  explicit ConfigColours(const SiteConfig<T>& c) : c_(&c) {
    if constexpr (!std::is_integral_v<T>) {
      width_ = c.values.empty() ? 0 : c.values.front().size();
      for (const auto& t : c.values)
        if (t.size() != width_) throw std::invalid_argument("fdcol: tuple colours of unequal length");
    }
  }
  const Box& box() const { return c_->box; }
  std::size_t num_components() const {
    if constexpr (std::is_integral_v<T>) return 1;
    else return width_;
  }
  void component(std::size_t j, std::span<const std::size_t> sites, std::span<std::int64_t> out) const {
    for (std::size_t i = 0; i < sites.size(); ++i) {
      if constexpr (std::is_integral_v<T>) out[i] = static_cast<std::int64_t>(c_->values[sites[i]]);
      else out[i] = static_cast<std::int64_t>(c_->values[sites[i]][j]);
    }
  }

 private:
  const SiteConfig<T>* c_;
  std::size_t width_ = 0;
};

namespace detail {

/// Spatial hash of region sites into cubes of side `side`, with intrusive
/// per-cell lists so members of one group can be bucketed and cleared cheaply.
class CellGrid {
 public:
  CellGrid(const Box& region, std::int64_t side) : d_(region.dim()), side_(std::max<std::int64_t>(side, 1)) {
    std::size_t total = 1;
    for (int a = d_ - 1; a >= 0; --a) {
      ncell_[a] = (region.extent(a) + side_ - 1) / side_;
      cstride_[a] = static_cast<std::int64_t>(total);
      total *= static_cast<std::size_t>(ncell_[a]);
    }
    head_.assign(total, -1);
    int count = 1;
    for (int a = 0; a < d_; ++a) count *= 3;
    for (int o = 0; o < count; ++o) {
      std::array<int, kMaxDim> off{};
      int t = o;
      for (int a = 0; a < d_; ++a) {
        off[a] = t % 3 - 1;
        t /= 3;
      }
      nbr_.push_back(off);
    }
    // own cell first: that is where a close partner is most likely
    std::stable_partition(nbr_.begin(), nbr_.end(), [&](const auto& off) {
      return std::all_of(off.begin(), off.begin() + d_, [](int x) { return x == 0; });
    });
  }

  std::int64_t side() const { return side_; }
  std::size_t num_cells() const { return head_.size(); }

  std::size_t cell_of(const std::int32_t* coord) const {
    std::int64_t id = 0;
    for (int a = 0; a < d_; ++a) id += (coord[a] / side_) * cstride_[a];
    return static_cast<std::size_t>(id);
  }

  void insert(std::size_t cell, std::int32_t member, std::vector<std::int32_t>& next) {
    if (head_[cell] == -1) touched_.push_back(cell);
    next[static_cast<std::size_t>(member)] = head_[cell];
    head_[cell] = member;
  }

  void clear() {
    for (auto c : touched_) head_[c] = -1;
    touched_.clear();
  }

  /// Calls f(member) for members in the 3^d cells around coord until f returns true.
  template <class F>
  bool any_near(const std::int32_t* coord, const std::vector<std::int32_t>& next, F&& f) const {
    std::array<std::int64_t, kMaxDim> cc{};
    for (int a = 0; a < d_; ++a) cc[a] = coord[a] / side_;
    for (const auto& off : nbr_) {
      std::int64_t id = 0;
      bool ok = true;
      for (int a = 0; a < d_; ++a) {
        const std::int64_t c = cc[a] + off[a];
        if (c < 0 || c >= ncell_[a]) {
          ok = false;
          break;
        }
        id += c * cstride_[a];
      }
      if (!ok) continue;
      for (std::int32_t m = head_[static_cast<std::size_t>(id)]; m != -1; m = next[static_cast<std::size_t>(m)])
        if (f(m)) return true;
    }
    return false;
  }

 private:
  int d_;
  std::int64_t side_;
  std::array<std::int64_t, kMaxDim> ncell_{}, cstride_{};
  std::vector<std::int32_t> head_;
  std::vector<std::size_t> touched_;
  std::vector<std::array<int, kMaxDim>> nbr_;
};

}  // namespace detail

/// Greedy maximal independent set of Z^d[m] on `region`, visiting sites in
/// increasing colour order: a site is selected iff no already-selected site
/// lies within distance m. For a proper range-m colouring this is an
/// (m, m)-net on the part of the region far enough from its boundary.
///
/// The greedy outcome depends only on the order of pairs of sites within
/// distance m of each other, so colours are refined one component at a time
/// and only for groups of tied sites that still contain such a pair. Sites of
/// a group with no close partner keep an arbitrary relative order.
///
/// Throws if two sites within distance m share their whole colour.
template <ColourSource Source>
SiteConfig<std::uint8_t> net_extract(const Source& src, std::int64_t m, const Box& region) {
  if (m < 1) throw std::invalid_argument("fdcol: net_extract needs m >= 1");
  if (region.empty()) throw std::invalid_argument("fdcol: net_extract on an empty region");
  if (!src.box().contains(region))
    throw std::invalid_argument("fdcol: region " + region.str() + " outside colouring window " + src.box().str());
  const int d = region.dim();
  const std::size_t n = region.volume();
  if (n > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
    throw std::invalid_argument("fdcol: net_extract region too large");

  std::vector<std::size_t> src_index(n);
  std::vector<std::int32_t> coord(n * static_cast<std::size_t>(d));
  {
    std::size_t i = 0;
    for_each_site(region, [&](const Site& s) {
      src_index[i] = src.box().index(s);
      for (int a = 0; a < d; ++a) coord[i * d + a] = static_cast<std::int32_t>(s.c[a] - region.lo.c[a]);
      ++i;
    });
  }
  auto close = [&](std::int32_t x, std::int32_t y) {
    std::int64_t s = 0;
    for (int a = 0; a < d; ++a) s += std::abs(coord[static_cast<std::size_t>(x) * d + a] - coord[static_cast<std::size_t>(y) * d + a]);
    return s <= m;
  };

  detail::CellGrid grid(region, m);
  std::vector<std::size_t> cell(n);
  for (std::size_t i = 0; i < n; ++i) cell[i] = grid.cell_of(&coord[i * d]);
  std::vector<std::int32_t> next(n, -1);

  std::vector<std::int32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::int64_t> key(n);
  std::vector<std::int32_t> scratch(n);
  std::vector<char> flag(n, 0);

  using Range = std::pair<std::size_t, std::size_t>;
  std::vector<Range> active{{0, n}};
  const std::size_t ncomp = src.num_components();

  // split [s, e) into sites with and without a close partner inside it
  auto settle = [&](std::size_t s, std::size_t e, std::vector<Range>& out) {
    if (e - s < 2) return;
    for (std::size_t p = s; p < e; ++p) {
      const auto x = perm[p];
      grid.insert(cell[static_cast<std::size_t>(x)], x, next);
    }
    std::size_t hot = 0;
    for (std::size_t p = s; p < e; ++p) {
      const auto x = perm[p];
      flag[static_cast<std::size_t>(x)] =
          grid.any_near(&coord[static_cast<std::size_t>(x) * d], next, [&](std::int32_t y) { return y != x && close(x, y); });
      hot += flag[static_cast<std::size_t>(x)];
    }
    grid.clear();
    if (hot == 0) return;
    std::stable_partition(perm.begin() + static_cast<std::ptrdiff_t>(s), perm.begin() + static_cast<std::ptrdiff_t>(e),
                          [&](std::int32_t x) { return !flag[static_cast<std::size_t>(x)]; });
    out.emplace_back(e - hot, e);
  };

  std::vector<std::size_t> batch;
  std::vector<std::int64_t> vals;
  for (std::size_t j = 0; j < ncomp && !active.empty(); ++j) {
    batch.clear();
    for (auto [s, e] : active)
      for (std::size_t p = s; p < e; ++p) batch.push_back(src_index[static_cast<std::size_t>(perm[p])]);
    vals.resize(batch.size());
    src.component(j, batch, vals);
    {
      std::size_t b = 0;
      for (auto [s, e] : active)
        for (std::size_t p = s; p < e; ++p) key[static_cast<std::size_t>(perm[p])] = vals[b++];
    }
    std::vector<Range> refined;
    for (auto [s, e] : active) {
      auto first = perm.begin() + static_cast<std::ptrdiff_t>(s), last = perm.begin() + static_cast<std::ptrdiff_t>(e);
      std::int64_t lo = key[static_cast<std::size_t>(*first)], hi = lo;
      for (auto it = first; it != last; ++it) {
        lo = std::min(lo, key[static_cast<std::size_t>(*it)]);
        hi = std::max(hi, key[static_cast<std::size_t>(*it)]);
      }
      if (hi - lo < 4096) {
        // stable counting sort
        std::vector<std::size_t> count(static_cast<std::size_t>(hi - lo) + 2, 0);
        for (auto it = first; it != last; ++it) ++count[static_cast<std::size_t>(key[static_cast<std::size_t>(*it)] - lo) + 1];
        for (std::size_t c = 1; c < count.size(); ++c) count[c] += count[c - 1];
        for (auto it = first; it != last; ++it)
          scratch[s + count[static_cast<std::size_t>(key[static_cast<std::size_t>(*it)] - lo)]++] = *it;
        std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(s), scratch.begin() + static_cast<std::ptrdiff_t>(e), first);
      } else {
        std::stable_sort(first, last, [&](std::int32_t x, std::int32_t y) {
          return key[static_cast<std::size_t>(x)] < key[static_cast<std::size_t>(y)];
        });
      }
      std::size_t a = s;
      while (a < e) {
        std::size_t b = a + 1;
        while (b < e && key[static_cast<std::size_t>(perm[b])] == key[static_cast<std::size_t>(perm[a])]) ++b;
        settle(a, b, refined);
        a = b;
      }
    }
    active = std::move(refined);
  }
  if (!active.empty()) {
    const auto [s, e] = active.front();
    std::int32_t x = perm[s], y = -1;
    for (std::size_t p = s + 1; p < e && y < 0; ++p)
      if (close(x, perm[p])) y = perm[p];
    for (std::size_t p = s; p < e && y < 0; ++p) {
      x = perm[p];
      for (std::size_t r = p + 1; r < e; ++r)
        if (close(x, perm[r])) {
          y = perm[r];
          break;
        }
    }
    throw std::runtime_error("fdcol: corrupt input to net_extract: sites " + region.site(static_cast<std::size_t>(x)).str() +
                             " and " + region.site(static_cast<std::size_t>(y < 0 ? x : y)).str() + " within distance " +
                             std::to_string(m) + " share a colour");
  }

  SiteConfig<std::uint8_t> out(region, 0);
  std::fill(next.begin(), next.end(), -1);
  for (auto x : perm) {
    const bool blocked = grid.any_near(&coord[static_cast<std::size_t>(x) * d], next, [&](std::int32_t y) { return close(x, y); });
    if (!blocked) {
      out.values[static_cast<std::size_t>(x)] = 1;
      grid.insert(cell[static_cast<std::size_t>(x)], x, next);
    }
  }
  return out;
}

template <ColourSource Source>
SiteConfig<std::uint8_t> net_extract(const Source& src, std::int64_t m) {
  return net_extract(src, m, Box(src.box()));
}

template <class T>
SiteConfig<std::uint8_t> net_extract(const SiteConfig<T>& colours, std::int64_t m) {
  return net_extract(ConfigColours<T>(colours), m, colours.box);
}

/// Axis-product colouring: one 1D 4-colouring per axis-parallel line, combined
/// into the d-tuple (colour along e_1, ..., colour along e_d). Proper, with at
/// most 4^d colours; translation-invariant but not isometry-invariant in law.
inline SiteConfig<TupleColour> baseline_product_colouring(SiteConfig<Uniform> field) {
  const int d = field.dim();
  std::vector<Site> axes;
  for (int a = 0; a < d; ++a) axes.push_back(Site::unit(d, a));
  return RangeColouring(std::move(field), DirectionSet::from_list(d, axes)).materialize();
}

inline SiteConfig<TupleColour> baseline_product_colouring(const SeededField& field, const Box& window) {
  return baseline_product_colouring(sample(field, window));
}

/// Base-q code of a tuple colour with entries in 1..q (1 + sum (t_i - 1) q^i).
inline std::int64_t encode_tuple(const TupleColour& t, int q = 4) {
  std::int64_t code = 0;
  for (auto it = t.rbegin(); it != t.rend(); ++it) code = checked_add(checked_mul(code, q), *it - 1);
  return code + 1;
}

}  // namespace fdcol
