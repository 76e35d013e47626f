#pragma once

// Deterministic stand-in for i.i.d. uniform fields. Every value is the output
// of a keyed SipHash-2-4 over a small message, so evaluation is a pure function
// of (seed, substream path, site) and is bit-identical across platforms.

#include <sodium.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fdcol/lattice.hpp"
#include "fdcol/site_config.hpp"

namespace fdcol {

namespace detail {

inline const unsigned char* hash_key() {
  static const unsigned char key[crypto_shorthash_KEYBYTES] = {'f', 'd', 'c', 'o', 'l', '-', 's', 'i',
                                                               'p', 'h', 'a', 's', 'h', '-', 'k', '1'};
  static const bool ready = [] {
    if (sodium_init() < 0) throw std::runtime_error("fdcol: libsodium initialisation failed");
    return true;
  }();
  (void)ready;
  return key;
}

inline std::uint64_t load_le64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

inline void store_le64(unsigned char* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}

inline std::uint64_t hash_bytes(const unsigned char* data, std::size_t len) {
  const unsigned char* key = hash_key();
  unsigned char out[crypto_shorthash_BYTES];
  crypto_shorthash(out, data, len, key);
  return load_le64(out);
}

/// SipHash over little-endian 64-bit words.
template <std::size_t N>
std::uint64_t hash_words(const std::array<std::uint64_t, N>& w, std::size_t count = N) {
  unsigned char buf[8 * N];
  for (std::size_t i = 0; i < count; ++i) store_le64(buf + 8 * i, w[i]);
  return hash_bytes(buf, 8 * count);
}

// domain tags
inline constexpr std::uint64_t kTagLabel = 0x4c41424cULL;   // "LABL"
inline constexpr std::uint64_t kTagSeed = 0x53454544ULL;    // "SEED"
inline constexpr std::uint64_t kTagSub = 0x53554253ULL;     // "SUBS"
inline constexpr std::uint64_t kTagSite = 0x53495445ULL;    // "SITE"
inline constexpr std::uint64_t kTagSplit = 0x53504c54ULL;   // "SPLT"

}  // namespace detail

/// Substream label from a name, optionally indexed.
inline std::uint64_t label(std::string_view name, std::uint64_t index = 0) {
  std::vector<unsigned char> buf(24 + name.size());
  detail::store_le64(buf.data(), detail::kTagLabel);
  detail::store_le64(buf.data() + 8, index);
  detail::store_le64(buf.data() + 16, name.size());
  std::memcpy(buf.data() + 24, name.data(), name.size());
  return detail::hash_bytes(buf.data(), buf.size());
}

/// Label for a lattice direction.
inline std::uint64_t label(std::string_view name, const Site& h) {
  std::uint64_t l = label(name, static_cast<std::uint64_t>(h.dim));
  for (int i = 0; i < h.dim; ++i) l = detail::hash_words<3>({detail::kTagLabel, l, static_cast<std::uint64_t>(h.c[i])});
  return l;
}

/// Stream of 64-bit draws: the SplitMix64 sequence started at a SipHash-derived
/// key. Draw i depends only on (key, i).
class Stream {
 public:
  explicit Stream(std::uint64_t key) : key_(key) {}

  std::uint64_t next() {
    std::uint64_t z = key_ + ++counter_ * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, n), unbiased (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("fdcol: below(0)");
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1p-53; }

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// A uniform value on [0, 1) carried as 64 hash bits; it can be split into
/// further independent-quality uniforms.
struct Uniform {
  std::uint64_t bits = 0;

  double value() const { return static_cast<double>(bits >> 11) * 0x1p-53; }
  Uniform split(std::uint64_t lab) const { return {detail::hash_words<3>({detail::kTagSplit, bits, lab})}; }
  Stream stream() const { return Stream(bits); }

  friend bool operator==(const Uniform&, const Uniform&) = default;
};

/// (seed, substream path, site) -> Uniform.
class SeededField {
 public:
  explicit SeededField(std::uint64_t seed) : seed_(seed), state_(detail::hash_words<2>({detail::kTagSeed, seed})) {}

  std::uint64_t seed() const { return seed_; }
  const std::string& path() const { return path_; }

  SeededField substream(std::uint64_t lab) const {
    SeededField f = *this;
    f.state_ = detail::hash_words<3>({detail::kTagSub, state_, lab});
    f.path_ += "/#" + std::to_string(lab);
    return f;
  }
  SeededField substream(std::string_view name) const {
    SeededField f = substream(label(name));
    f.path_ = path_ + "/" + std::string(name);
    return f;
  }

  Uniform eval(const Site& v) const {
    std::array<std::uint64_t, 3 + kMaxDim> w{};
    w[0] = detail::kTagSite;
    w[1] = state_;
    w[2] = static_cast<std::uint64_t>(v.dim);
    for (int i = 0; i < v.dim; ++i) w[3 + i] = static_cast<std::uint64_t>(v.c[i]);
    return {detail::hash_words(w, 3 + static_cast<std::size_t>(v.dim))};
  }
  double operator()(const Site& v) const { return eval(v).value(); }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  std::string path_;
};

/// Materialises a field on a box.
inline SiteConfig<Uniform> sample(const SeededField& f, const Box& b) {
  SiteConfig<Uniform> out(b);
  std::size_t i = 0;
  for_each_site(b, [&](const Site& s) { out.values[i++] = f.eval(s); });
  return out;
}

// ---------------------------------------------------------------------------
// Pair fields on Xi_d = {(x, y): y - x in Gamma rho}

/// Arrow values w(x, x + gamma_k rho) on a box, stored site-major.
struct PairConfig {
  Box box;
  std::size_t kappa = 0;
  std::vector<Uniform> values;

  PairConfig() = default;
  PairConfig(const Box& b, std::size_t k) : box(b), kappa(k), values(b.volume() * k) {}

  Uniform& at(const Site& x, std::size_t arrow) { return values[box.index(x) * kappa + arrow]; }
  const Uniform& at(const Site& x, std::size_t arrow) const { return values[box.index(x) * kappa + arrow]; }

  friend bool operator==(const PairConfig&, const PairConfig&) = default;
};

/// (theta w)(x, y) = w(theta^{-1} x, theta^{-1} y).
inline PairConfig act(const PairConfig& w, const Isometry& theta) {
  const Group g(theta.dim);
  const Isometry inv = inverse(theta);
  const Isometry inv_lin = inv.linear();
  // arrow k of the image reads arrow index(inv_lin o gamma_k) of the source
  std::vector<std::size_t> remap(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) remap[k] = g.index_of(compose(inv_lin, g[k]));
  PairConfig out(theta.apply(w.box), w.kappa);
  std::size_t i = 0;
  for_each_site(out.box, [&](const Site& x) {
    const std::size_t src = w.box.index(inv.apply(x));
    for (std::size_t k = 0; k < w.kappa; ++k) out.values[i * w.kappa + k] = w.values[src * w.kappa + remap[k]];
    ++i;
  });
  return out;
}

/// The symmetrising redistribution: per site x, sub-uniforms
/// (Y(x), Z_1(x), ..., Z_kappa(x)) are split from u(x), and the arrow value
/// W(x, y) is Z_T(x) where Y(y) is the T-th largest of {Y(z): z - x in Gamma rho}.
/// If two of those Y values are bit-equal every arrow out of x gets 0.
///
/// W(x, .) reads u only on x + B(d), so W is defined on u's box shrunk by d.
class PairField {
 public:
  explicit PairField(SiteConfig<Uniform> u) : u_(std::move(u)), group_(u_.dim()) {
    const int d = u_.dim();
    box_ = u_.box.shrink(d);
    if (box_.empty()) throw std::invalid_argument("fdcol: window " + u_.box.str() + " too small to distribute");
    y_.resize(u_.values.size());
    const std::uint64_t ly = label("Y");
    for (std::size_t i = 0; i < y_.size(); ++i) y_[i] = u_.values[i].split(ly).value();
    z_labels_.resize(group_.size());
    for (std::size_t k = 0; k < group_.size(); ++k) z_labels_[k] = label("Z", k + 1);
    for (std::size_t k = 0; k < group_.size(); ++k) {
      std::ptrdiff_t off = 0;
      for (int a = 0; a < d; ++a) off += group_.arrow(k).c[a] * static_cast<std::ptrdiff_t>(u_.box.stride(a));
      offsets_.push_back(off);
    }
    const std::size_t kap = group_.size();
    ranks_.assign(u_.values.size() * kap, 0);
    for_each_site(box_, [&](const Site& x) {
      const std::size_t src = u_.box.index(x);
      for (std::size_t k = 0; k < kap; ++k) ranks_[src * kap + k] = static_cast<std::uint8_t>(compute_rank(src, k));
    });
  }

  int dim() const { return u_.dim(); }
  const Box& box() const { return box_; }
  const Group& group() const { return group_; }
  const SiteConfig<Uniform>& source() const { return u_; }

  /// W(x, x + gamma_k rho).
  Uniform at(const Site& x, std::size_t k) const {
    if (!box_.contains(x)) throw std::out_of_range("fdcol: pair field has no arrows at " + x.str());
    return at_index(u_.box.index(x), k);
  }

  /// W(x, y) for (x, y) in Xi_d.
  Uniform at(const Site& x, const Site& y) const {
    const auto k = group_.arrow_index(y - x);
    if (k < 0) throw std::invalid_argument("fdcol: pair " + x.str() + "->" + y.str() + " is not in Xi_d");
    return at(x, static_cast<std::size_t>(k));
  }

  /// The rank T (1 = largest) of Y(x + gamma_k rho) among x's arrow heads, or 0 on ties.
  std::size_t rank(const Site& x, std::size_t k) const { return rank_index(u_.box.index(x), k); }

  /// x -> W(x, x + gamma rho) on box().
  SiteConfig<Uniform> gamma_field(std::size_t k) const {
    SiteConfig<Uniform> out(box_);
    std::size_t i = 0;
    for_each_site(box_, [&](const Site& x) { out.values[i++] = at_index(u_.box.index(x), k); });
    return out;
  }

  PairConfig config() const {
    PairConfig out(box_, group_.size());
    std::size_t i = 0;
    for_each_site(box_, [&](const Site& x) {
      const std::size_t src = u_.box.index(x);
      for (std::size_t k = 0; k < group_.size(); ++k) out.values[i * group_.size() + k] = at_index(src, k);
      ++i;
    });
    return out;
  }

 private:
  std::size_t rank_index(std::size_t src, std::size_t k) const { return ranks_[src * group_.size() + k]; }

  std::size_t compute_rank(std::size_t src, std::size_t k) const {
    const double mine = y_[src + offsets_[k]];
    std::size_t greater = 0;
    bool tie = false;
    for (std::size_t j = 0; j < offsets_.size(); ++j) {
      const double other = y_[src + offsets_[j]];
      if (other > mine) ++greater;
      for (std::size_t l = j + 1; l < offsets_.size(); ++l) tie |= (other == y_[src + offsets_[l]]);
    }
    return tie ? 0 : greater + 1;
  }

  Uniform at_index(std::size_t src, std::size_t k) const {
    const std::size_t t = rank_index(src, k);
    if (t == 0) return Uniform{0};
    return u_.values[src].split(z_labels_[t - 1]);
  }

  SiteConfig<Uniform> u_;
  Group group_;
  Box box_;
  std::vector<double> y_;
  std::vector<std::uint64_t> z_labels_;
  std::vector<std::ptrdiff_t> offsets_;
  std::vector<std::uint8_t> ranks_;  // per (site, k), 0 on ties; kappa <= 48 fits
};

inline PairField distribute(SiteConfig<Uniform> u) { return PairField(std::move(u)); }

/// Distributes a seeded field so that the arrows are defined on `box`.
inline PairField distribute(const SeededField& u, const Box& box) { return PairField(sample(u, box.grow(box.dim()))); }

/// x -> W(x, x + gamma rho).
inline SiteConfig<Uniform> gamma_field(const PairField& w, std::size_t gamma_index) { return w.gamma_field(gamma_index); }

}  // namespace fdcol
