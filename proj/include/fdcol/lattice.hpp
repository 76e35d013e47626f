#pragma once

// Integer-lattice geometry: sites, boxes, the origin-fixing isometry group of
// Z^d (signed permutations), orbit labels, direction sets and lines.

#include <algorithm>
#include <array>
#include <cassert>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace fdcol {

inline constexpr int kMaxDim = 6;

// ---------------------------------------------------------------------------
// checked 64-bit arithmetic

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("fdcol: coordinate overflow in addition");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("fdcol: coordinate overflow in subtraction");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("fdcol: coordinate overflow in multiplication");
  return r;
}

inline std::int64_t checked_abs(std::int64_t a) {
  if (a == std::numeric_limits<std::int64_t>::min()) throw std::overflow_error("fdcol: coordinate overflow in abs");
  return a < 0 ? -a : a;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

inline void check_dim(int d) {
  if (d < 1 || d > kMaxDim)
    throw std::invalid_argument("fdcol: dimension must be in [1, " + std::to_string(kMaxDim) + "], got " +
                                std::to_string(d));
}

// ---------------------------------------------------------------------------
// Site

/// A point of Z^d with 64-bit coordinates. Arithmetic is overflow-checked.
struct Site {
  std::array<std::int64_t, kMaxDim> c{};
  int dim = 0;

  Site() = default;
  explicit Site(int d) : dim(d) { check_dim(d); }
  Site(std::initializer_list<std::int64_t> coords) : dim(static_cast<int>(coords.size())) {
    check_dim(dim);
    std::copy(coords.begin(), coords.end(), c.begin());
  }

  static Site zero(int d) { return Site(d); }
  static Site unit(int d, int axis, std::int64_t sign = 1) {
    Site s(d);
    s.c[axis] = sign;
    return s;
  }
  static Site filled(int d, std::int64_t v) {
    Site s(d);
    for (int i = 0; i < d; ++i) s.c[i] = v;
    return s;
  }

  std::int64_t operator[](int i) const { return c[i]; }
  std::int64_t& operator[](int i) { return c[i]; }

  friend bool operator==(const Site& a, const Site& b) {
    if (a.dim != b.dim) return false;
    for (int i = 0; i < a.dim; ++i)
      if (a.c[i] != b.c[i]) return false;
    return true;
  }

  // lexicographic
  friend std::strong_ordering operator<=>(const Site& a, const Site& b) {
    assert(a.dim == b.dim);
    for (int i = 0; i < a.dim; ++i)
      if (auto o = a.c[i] <=> b.c[i]; o != 0) return o;
    return std::strong_ordering::equal;
  }

  friend Site operator+(const Site& a, const Site& b) {
    assert(a.dim == b.dim);
    Site r(a.dim);
    for (int i = 0; i < a.dim; ++i) r.c[i] = checked_add(a.c[i], b.c[i]);
    return r;
  }
  friend Site operator-(const Site& a, const Site& b) {
    assert(a.dim == b.dim);
    Site r(a.dim);
    for (int i = 0; i < a.dim; ++i) r.c[i] = checked_sub(a.c[i], b.c[i]);
    return r;
  }
  friend Site operator-(const Site& a) { return Site::zero(a.dim) - a; }
  friend Site operator*(std::int64_t k, const Site& a) {
    Site r(a.dim);
    for (int i = 0; i < a.dim; ++i) r.c[i] = checked_mul(k, a.c[i]);
    return r;
  }

  std::string str() const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < dim; ++i) os << (i ? "," : "") << c[i];
    os << ')';
    return os.str();
  }
  friend std::ostream& operator<<(std::ostream& os, const Site& s) { return os << s.str(); }
};

/// 1-norm, the metric used everywhere in this library.
inline std::int64_t norm1(const Site& v) {
  std::int64_t s = 0;
  for (int i = 0; i < v.dim; ++i) s = checked_add(s, checked_abs(v.c[i]));
  return s;
}

inline std::int64_t dist1(const Site& a, const Site& b) { return norm1(a - b); }

struct SiteHash {
  std::size_t operator()(const Site& s) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(s.dim);
    for (int i = 0; i < s.dim; ++i) {
      h ^= static_cast<std::uint64_t>(s.c[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

// ---------------------------------------------------------------------------
// Box: axis-aligned window with inclusive bounds, row-major (last axis fastest)
// so that linear index order is lexicographic site order.

struct Box {
  Site lo, hi;

  Box() = default;
  Box(Site lo_, Site hi_) : lo(lo_), hi(hi_) {
    if (lo.dim != hi.dim) throw std::invalid_argument("fdcol: box corners differ in dimension");
  }

  /// Box [0, n-1]^d.
  static Box cube(int d, std::int64_t n) { return Box(Site::zero(d), Site::filled(d, n - 1)); }
  /// Box [-r, r]^d.
  static Box centred(int d, std::int64_t r) { return Box(Site::filled(d, -r), Site::filled(d, r)); }

  int dim() const { return lo.dim; }
  bool empty() const {
    for (int i = 0; i < dim(); ++i)
      if (hi.c[i] < lo.c[i]) return true;
    return false;
  }
  std::int64_t extent(int i) const { return empty() ? 0 : hi.c[i] - lo.c[i] + 1; }
  std::size_t volume() const {
    if (empty()) return 0;
    std::size_t v = 1;
    for (int i = 0; i < dim(); ++i) v *= static_cast<std::size_t>(extent(i));
    return v;
  }
  bool contains(const Site& s) const {
    for (int i = 0; i < dim(); ++i)
      if (s.c[i] < lo.c[i] || s.c[i] > hi.c[i]) return false;
    return true;
  }
  bool contains(const Box& b) const { return b.empty() || (contains(b.lo) && contains(b.hi)); }

  Box grow(std::int64_t r) const {
    Box b = *this;
    for (int i = 0; i < dim(); ++i) {
      b.lo.c[i] = checked_sub(b.lo.c[i], r);
      b.hi.c[i] = checked_add(b.hi.c[i], r);
    }
    return b;
  }
  Box shrink(std::int64_t r) const { return grow(-r); }

  Box intersect(const Box& o) const {
    Box b = *this;
    for (int i = 0; i < dim(); ++i) {
      b.lo.c[i] = std::max(lo.c[i], o.lo.c[i]);
      b.hi.c[i] = std::min(hi.c[i], o.hi.c[i]);
    }
    return b;
  }

  std::size_t stride(int axis) const {
    std::size_t s = 1;
    for (int i = dim() - 1; i > axis; --i) s *= static_cast<std::size_t>(extent(i));
    return s;
  }

  std::size_t index(const Site& s) const {
    assert(contains(s));
    std::size_t idx = 0;
    for (int i = 0; i < dim(); ++i) idx = idx * static_cast<std::size_t>(extent(i)) + static_cast<std::size_t>(s.c[i] - lo.c[i]);
    return idx;
  }

  Site site(std::size_t idx) const {
    Site s(dim());
    for (int i = dim() - 1; i >= 0; --i) {
      auto e = static_cast<std::size_t>(extent(i));
      s.c[i] = lo.c[i] + static_cast<std::int64_t>(idx % e);
      idx /= e;
    }
    return s;
  }

  friend bool operator==(const Box& a, const Box& b) {
    if (a.empty() && b.empty()) return a.dim() == b.dim();
    return a.lo == b.lo && a.hi == b.hi;
  }

  std::string str() const { return "[" + lo.str() + ".." + hi.str() + "]"; }
};

/// Calls f(site) for each site of the box in lexicographic order.
template <class F>
void for_each_site(const Box& b, F&& f) {
  if (b.empty()) return;
  Site s = b.lo;
  const int d = b.dim();
  while (true) {
    f(static_cast<const Site&>(s));
    int i = d - 1;
    while (i >= 0) {
      if (s.c[i] < b.hi.c[i]) {
        ++s.c[i];
        break;
      }
      s.c[i] = b.lo.c[i];
      --i;
    }
    if (i < 0) return;
  }
}

// ---------------------------------------------------------------------------
// ball

namespace detail {
inline void ball_rec(int d, int axis, std::int64_t budget, Site& cur, std::vector<Site>& out) {
  if (axis == d) {
    out.push_back(cur);
    return;
  }
  for (std::int64_t x = -budget; x <= budget; ++x) {
    cur.c[axis] = x;
    ball_rec(d, axis + 1, budget - (x < 0 ? -x : x), cur, out);
  }
  cur.c[axis] = 0;
}
}  // namespace detail

/// All v with |v| <= r, in lexicographic order.
inline std::vector<Site> ball(int d, std::int64_t r) {
  check_dim(d);
  if (r < 0) throw std::invalid_argument("fdcol: ball radius must be non-negative");
  std::vector<Site> out;
  Site cur(d);
  detail::ball_rec(d, 0, r, cur, out);
  return out;
}

// ---------------------------------------------------------------------------
// Isometry

/// x -> (signs[i] * x[perm[i]] + shift[i])_i.
struct Isometry {
  int dim = 0;
  std::array<std::int8_t, kMaxDim> perm{};
  std::array<std::int8_t, kMaxDim> signs{};
  Site shift;

  static Isometry identity(int d) {
    check_dim(d);
    Isometry g;
    g.dim = d;
    for (int i = 0; i < d; ++i) {
      g.perm[i] = static_cast<std::int8_t>(i);
      g.signs[i] = 1;
    }
    g.shift = Site::zero(d);
    return g;
  }
  static Isometry translation(const Site& t) {
    Isometry g = identity(t.dim);
    g.shift = t;
    return g;
  }
  static Isometry swap_axes(int d, int a, int b) {
    Isometry g = identity(d);
    std::swap(g.perm[a], g.perm[b]);
    return g;
  }
  static Isometry flip_axis(int d, int a) {
    Isometry g = identity(d);
    g.signs[a] = -1;
    return g;
  }

  Site apply(const Site& v) const {
    assert(v.dim == dim);
    Site r(dim);
    for (int i = 0; i < dim; ++i) r.c[i] = checked_add(signs[i] * v.c[perm[i]], shift.c[i]);
    return r;
  }
  Site operator()(const Site& v) const { return apply(v); }

  /// Image of a box (a box again, since isometries permute and flip axes).
  Box apply(const Box& b) const {
    if (b.empty()) return b;
    Site a = apply(b.lo), c = apply(b.hi);
    Site lo(dim), hi(dim);
    for (int i = 0; i < dim; ++i) {
      lo.c[i] = std::min(a.c[i], c.c[i]);
      hi.c[i] = std::max(a.c[i], c.c[i]);
    }
    return Box(lo, hi);
  }

  bool fixes_origin() const {
    for (int i = 0; i < dim; ++i)
      if (shift.c[i] != 0) return false;
    return true;
  }

  Isometry linear() const {
    Isometry g = *this;
    g.shift = Site::zero(dim);
    return g;
  }

  friend bool operator==(const Isometry& a, const Isometry& b) {
    if (a.dim != b.dim || !(a.shift == b.shift)) return false;
    for (int i = 0; i < a.dim; ++i)
      if (a.perm[i] != b.perm[i] || a.signs[i] != b.signs[i]) return false;
    return true;
  }

  std::string str() const {
    std::ostringstream os;
    os << "x->(";
    for (int i = 0; i < dim; ++i) {
      os << (i ? "," : "") << (signs[i] < 0 ? "-" : "") << "x" << int(perm[i]) + 1;
      if (shift.c[i]) os << (shift.c[i] > 0 ? "+" : "") << shift.c[i];
    }
    os << ")";
    return os.str();
  }
};

/// compose(f, g)(v) = f(g(v)).
inline Isometry compose(const Isometry& f, const Isometry& g) {
  assert(f.dim == g.dim);
  Isometry h;
  h.dim = f.dim;
  h.shift = Site(f.dim);
  for (int i = 0; i < f.dim; ++i) {
    const int pf = f.perm[i];
    h.perm[i] = g.perm[pf];
    h.signs[i] = static_cast<std::int8_t>(f.signs[i] * g.signs[pf]);
    h.shift.c[i] = checked_add(f.signs[i] * g.shift.c[pf], f.shift.c[i]);
  }
  return h;
}

inline Isometry inverse(const Isometry& f) {
  Isometry h;
  h.dim = f.dim;
  h.shift = Site(f.dim);
  for (int i = 0; i < f.dim; ++i) {
    const int p = f.perm[i];
    h.perm[p] = static_cast<std::int8_t>(i);
    h.signs[p] = f.signs[i];
    h.shift.c[p] = -f.signs[i] * f.shift.c[i];
  }
  return h;
}

/// The vector (1, 2, ..., d); its images under the origin-fixing group are pairwise distinct.
inline Site rho(int d) {
  Site r(d);
  for (int i = 0; i < d; ++i) r.c[i] = i + 1;
  return r;
}

// ---------------------------------------------------------------------------
// The group of origin-fixing isometries.

/// Canonical enumeration of the 2^d d! signed permutations: permutations in
/// lexicographic order, and for each permutation the sign patterns in binary
/// counting order (bit for axis 0 most significant, set = negative). The
/// identity is element 0.
class Group {
 public:
  explicit Group(int d) : d_(d) {
    check_dim(d);
    std::array<std::int8_t, kMaxDim> p{};
    for (int i = 0; i < d; ++i) p[i] = static_cast<std::int8_t>(i);
    do {
      for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        Isometry g = Isometry::identity(d);
        g.perm = p;
        for (int i = 0; i < d; ++i) g.signs[i] = ((mask >> (d - 1 - i)) & 1u) ? -1 : 1;
        elems_.push_back(g);
      }
    } while (std::next_permutation(p.begin(), p.begin() + d));

    const Site r = rho(d);
    for (const auto& g : elems_) arrows_.push_back(g.apply(r));
    for (std::size_t i = 0; i < arrows_.size(); ++i) {
      auto [it, fresh] = arrow_index_.emplace(arrows_[i], i);
      if (!fresh) throw std::logic_error("fdcol: images of rho are not distinct");
    }
  }

  int dim() const { return d_; }
  std::size_t size() const { return elems_.size(); }
  const Isometry& operator[](std::size_t i) const { return elems_[i]; }
  const std::vector<Isometry>& elements() const { return elems_; }

  /// gamma * rho for element i.
  const Site& arrow(std::size_t i) const { return arrows_[i]; }
  const std::vector<Site>& arrows() const { return arrows_; }

  /// Index of the element g with g*rho == offset, or -1.
  std::ptrdiff_t arrow_index(const Site& offset) const {
    auto it = arrow_index_.find(offset);
    return it == arrow_index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
  }

  /// Index of the linear part of g (shift ignored).
  std::size_t index_of(const Isometry& g) const {
    auto i = arrow_index(g.linear().apply(rho(d_)));
    assert(i >= 0);
    return static_cast<std::size_t>(i);
  }

  std::size_t compose_index(std::size_t a, std::size_t b) const { return index_of(compose(elems_[a], elems_[b])); }
  std::size_t inverse_index(std::size_t a) const { return index_of(inverse(elems_[a])); }

 private:
  int d_;
  std::vector<Isometry> elems_;
  std::vector<Site> arrows_;
  std::unordered_map<Site, std::size_t, SiteHash> arrow_index_;
};

/// kappa(d) = 2^d d!.
inline std::int64_t kappa(int d) {
  check_dim(d);
  std::int64_t k = 1;
  for (int i = 1; i <= d; ++i) k *= 2 * i;
  return k;
}

inline std::vector<Isometry> group_elements(int d) { return Group(d).elements(); }

/// Unit translations along every axis, both signs.
inline std::vector<Isometry> unit_translations(int d) {
  std::vector<Isometry> out;
  for (int i = 0; i < d; ++i)
    for (int s : {1, -1}) out.push_back(Isometry::translation(Site::unit(d, i, s)));
  return out;
}

// ---------------------------------------------------------------------------
// Orbit labelling

/// Labels the orbits of the origin-fixing group on the ball B(max_norm).
///
/// Orbits are ordered by 1-norm and, among equal norms, by their
/// lexicographically smallest member. That member is (-a1, ..., -ad) where
/// a1 >= ... >= ad >= 0 are the sorted absolute coordinates, so within a norm
/// orbits come in decreasing lexicographic order of (a1, ..., ad): for d = 2,
/// norm 2, {(+-2,0),(0,+-2)} precedes {(+-1,+-1)}.
class OrbitLabelling {
 public:
  using Key = std::array<std::int64_t, kMaxDim>;

  OrbitLabelling(int d, std::int64_t max_norm) : d_(d), max_norm_(max_norm) {
    check_dim(d);
    if (max_norm < 0) throw std::invalid_argument("fdcol: orbit labelling needs max_norm >= 0");
    for (std::int64_t n = 0; n <= max_norm; ++n) {
      Key k{};
      enumerate(n, 0, n, k);
    }
  }

  int dim() const { return d_; }
  std::int64_t max_norm() const { return max_norm_; }
  std::size_t num_labels() const { return reps_.size(); }

  static Key key_of(const Site& v) {
    Key k{};
    for (int i = 0; i < v.dim; ++i) k[i] = checked_abs(v.c[i]);
    std::sort(k.begin(), k.begin() + v.dim, std::greater<>());
    return k;
  }

  std::int64_t label(const Site& v) const {
    if (norm1(v) > max_norm_)
      throw std::out_of_range("fdcol: site " + v.str() + " outside labelled ball of radius " + std::to_string(max_norm_));
    return index_.at(key_of(v));
  }

  /// Lexicographically smallest member of orbit `label`.
  Site representative(std::int64_t label) const {
    const Key& k = reps_.at(static_cast<std::size_t>(label));
    Site s(d_);
    for (int i = 0; i < d_; ++i) s.c[i] = -k[i];
    return s;
  }

  std::int64_t norm_of(std::int64_t label) const {
    const Key& k = reps_.at(static_cast<std::size_t>(label));
    return std::accumulate(k.begin(), k.begin() + d_, std::int64_t{0});
  }

  /// Number of sites in the orbit.
  std::int64_t orbit_size(std::int64_t label) const {
    const Key& k = reps_.at(static_cast<std::size_t>(label));
    std::int64_t n = 1;
    for (int i = 1; i <= d_; ++i) n *= i;
    int run = 1;
    for (int i = 1; i <= d_; ++i) {
      if (i < d_ && k[i] == k[i - 1]) {
        ++run;
      } else {
        for (int j = 2; j <= run; ++j) n /= j;
        run = 1;
      }
    }
    for (int i = 0; i < d_; ++i)
      if (k[i] != 0) n *= 2;
    return n;
  }

  /// Largest label among sites of norm exactly n.
  std::int64_t max_label_at_norm(std::int64_t n) const {
    if (n > max_norm_) throw std::out_of_range("fdcol: norm beyond labelled ball");
    Key k{};
    k[0] = n;  // (n,0,...,0) is the first orbit of norm n; the last is found by scanning
    std::int64_t best = index_.at(k);
    for (std::int64_t l = best; l < static_cast<std::int64_t>(reps_.size()) && norm_of(l) == n; ++l) best = l;
    return best;
  }

 private:
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = 1469598103934665603ULL;
      for (auto x : k) h = (h ^ static_cast<std::uint64_t>(x)) * 1099511628211ULL;
      return static_cast<std::size_t>(h);
    }
  };

  // parts in non-increasing order, largest part first descending
  void enumerate(std::int64_t remaining, int pos, std::int64_t cap, Key& k) {
    if (pos == d_) {
      if (remaining == 0) {
        index_.emplace(k, static_cast<std::int64_t>(reps_.size()));
        reps_.push_back(k);
      }
      return;
    }
    const int slots = d_ - pos;
    for (std::int64_t a = std::min(cap, remaining); a >= 0; --a) {
      if (a * slots < remaining) break;
      k[pos] = a;
      enumerate(remaining - a, pos + 1, a, k);
    }
    k[pos] = 0;
  }

  int d_;
  std::int64_t max_norm_;
  std::vector<Key> reps_;
  std::unordered_map<Key, std::int64_t, KeyHash> index_;
};

/// Number of orbits with norm <= n, i.e. sum over norms of partitions into at
/// most d parts. Avoids enumerating when n is large.
inline std::int64_t orbit_count_upto(int d, std::int64_t n) {
  check_dim(d);
  // p[k][j]: partitions of j into at most k parts
  std::vector<std::vector<std::int64_t>> p(d + 1, std::vector<std::int64_t>(n + 1, 0));
  for (int k = 0; k <= d; ++k) p[k][0] = 1;
  for (int k = 1; k <= d; ++k)
    for (std::int64_t j = 1; j <= n; ++j) p[k][j] = checked_add(p[k - 1][j], j >= k ? p[k][j - k] : 0);
  std::int64_t total = 0;
  for (std::int64_t j = 0; j <= n; ++j) total = checked_add(total, p[d][j]);
  return total;
}

// ---------------------------------------------------------------------------
// Directions and lines

/// Position of a site on a line {anchor + i*h}.
struct LinePosition {
  Site anchor;
  std::int64_t index;
};

/// Canonical anchor of the line through v with direction h: the line point
/// minimising (1-norm, lexicographic order).
inline LinePosition line_decompose(const Site& v, const Site& h) {
  assert(v.dim == h.dim);
  bool nonzero = false;
  for (int i = 0; i < h.dim; ++i) nonzero |= h.c[i] != 0;
  if (!nonzero) throw std::invalid_argument("fdcol: line direction must be non-zero");

  // |v + t h|_1 is convex piecewise linear in t; integer minimisers sit at
  // floor/ceil of the breakpoints -v_i/h_i.
  std::vector<std::int64_t> cand;
  for (int i = 0; i < h.dim; ++i) {
    if (h.c[i] == 0) continue;
    cand.push_back(floor_div(-v.c[i], h.c[i]));
    cand.push_back(ceil_div(-v.c[i], h.c[i]));
  }
  bool have = false;
  std::int64_t best_t = 0, best_n = 0;
  Site best;
  for (auto t : cand) {
    Site p = v + t * h;
    std::int64_t n = norm1(p);
    if (!have || n < best_n || (n == best_n && p < best)) {
      have = true;
      best_t = t;
      best_n = n;
      best = p;
    }
  }
  return {best, -best_t};
}

/// For every h with 0 < |h| <= m exactly one of h, -h: the one whose first
/// non-zero coordinate is positive. Kept in lexicographic order, which is the
/// canonical component order of tuple colours.
class DirectionSet {
 public:
  DirectionSet(int d, std::int64_t m) : d_(d), m_(m) {
    if (m < 1) throw std::invalid_argument("fdcol: direction set range must be >= 1");
    for (const Site& h : ball(d, m)) {
      int i = 0;
      while (i < d && h.c[i] == 0) ++i;
      if (i < d && h.c[i] > 0) {
        index_.emplace(h, dirs_.size());
        dirs_.push_back(h);
      }
    }
  }

  /// Direction set made of the given directions (used by the axis-product colouring).
  static DirectionSet from_list(int d, std::vector<Site> dirs) {
    DirectionSet s;
    s.d_ = d;
    s.m_ = 0;
    for (const auto& h : dirs) {
      s.m_ = std::max(s.m_, norm1(h));
      s.index_.emplace(h, s.dirs_.size());
      s.dirs_.push_back(h);
    }
    return s;
  }

  int dim() const { return d_; }
  std::int64_t range() const { return m_; }
  std::size_t size() const { return dirs_.size(); }
  const Site& operator[](std::size_t i) const { return dirs_[i]; }
  const std::vector<Site>& dirs() const { return dirs_; }

  std::ptrdiff_t find(const Site& h) const {
    auto it = index_.find(h);
    return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
  }

  LinePosition line_decompose(const Site& v, const Site& h) const {
    if (norm1(h) == 0 || norm1(h) > m_)
      throw std::invalid_argument("fdcol: direction " + h.str() + " outside B(" + std::to_string(m_) + ")\\{0}");
    if (find(h) < 0) throw std::invalid_argument("fdcol: direction " + h.str() + " is not in the direction set");
    return fdcol::line_decompose(v, h);
  }

 private:
  DirectionSet() = default;
  int d_ = 0;
  std::int64_t m_ = 0;
  std::vector<Site> dirs_;
  std::unordered_map<Site, std::size_t, SiteHash> index_;
};

}  // namespace fdcol
