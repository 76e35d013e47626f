#pragma once

// One-dimensional finitely dependent colouring engine.
//
// sample_window() draws an exact sample of the law of a q-colouring on a
// window of n consecutive sites (q = 4: 1-dependent, q = 3: 2-dependent). The
// sampler runs a weighted backward removal pass to fix an arrival order and
// then replays the arrivals, colouring each new site uniformly among the
// colours its present nearest neighbours do not use. Every (order, word) pair
// that keeps all intermediate words proper has the same probability, so the
// law of a word is proportional to its insertion count N(word).
//
// exact_sampler_law() and insertion_count() are the two independent exact
// oracles for that law.

#include <gmpxx.h>

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "fdcol/random_field.hpp"

namespace fdcol {

using Colour = std::uint8_t;

struct ColourWord {
  int q = 4;
  std::vector<Colour> symbols;

  std::size_t size() const { return symbols.size(); }
  bool proper() const {
    for (std::size_t i = 1; i < symbols.size(); ++i)
      if (symbols[i] == symbols[i - 1]) return false;
    return true;
  }
  friend bool operator==(const ColourWord&, const ColourWord&) = default;
};

inline bool is_proper(const std::vector<Colour>& w) { return ColourWord{0, w}.proper(); }

enum class Arrival : std::uint8_t { first, boundary, interior };

/// Output of the backward pass. Positions are 0-based.
struct ArrivalPlan {
  std::size_t n = 0;
  std::vector<std::uint32_t> order;  // positions in arrival order
  std::vector<Arrival> types;        // per position
  // nearest present neighbours at arrival time (npos if none)
  std::vector<std::uint32_t> left, right;

  static constexpr std::uint32_t npos = 0xffffffffu;
};

inline void check_colour_count(int q, bool experimental) {
  if (q < 3) throw std::invalid_argument("fdcol: the window sampler needs q >= 3, got " + std::to_string(q));
  if ((q != 3 && q != 4) && !experimental)
    throw std::invalid_argument("fdcol: q = " + std::to_string(q) +
                                " carries no dependence guarantee; only q in {3, 4} unless experimental");
  if (q > 255) throw std::invalid_argument("fdcol: q too large");
}

/// Removal weight of the whole present set when p positions remain.
inline std::uint64_t removal_weight(int q, std::uint64_t p) {
  return 2 * static_cast<std::uint64_t>(q - 1) + (p - 2) * static_cast<std::uint64_t>(q - 2);
}

/// Backward pass: while >= 3 positions remain remove the minimum or the
/// maximum with weight q-1 each, or an interior position with weight q-2 each;
/// with two left remove either uniformly. Arrival order is the reverse.
/// Consumes exactly n-1 below() draws from the stream (before rejection).
inline ArrivalPlan plan_arrivals(int q, std::size_t n, Stream& stream) {
  if (n == 0) throw std::invalid_argument("fdcol: window length must be >= 1");
  constexpr auto npos = ArrivalPlan::npos;
  ArrivalPlan plan;
  plan.n = n;
  plan.order.resize(n);
  plan.types.resize(n);
  plan.left.assign(n, npos);
  plan.right.assign(n, npos);

  std::vector<std::uint32_t> prev(n), next(n);
  for (std::size_t i = 0; i < n; ++i) {
    prev[i] = i == 0 ? npos : static_cast<std::uint32_t>(i - 1);
    next[i] = i + 1 == n ? npos : static_cast<std::uint32_t>(i + 1);
  }
  // interior positions with O(1) uniform choice and removal
  std::vector<std::uint32_t> interior, slot(n, npos);
  if (n > 2) {
    interior.reserve(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      slot[i] = static_cast<std::uint32_t>(interior.size());
      interior.push_back(static_cast<std::uint32_t>(i));
    }
  }
  auto drop_interior = [&](std::uint32_t pos) {
    const std::uint32_t s = slot[pos];
    if (s == npos) return;
    const std::uint32_t last = interior.back();
    interior[s] = last;
    slot[last] = s;
    interior.pop_back();
    slot[pos] = npos;
  };

  std::uint32_t lo = 0, hi = static_cast<std::uint32_t>(n - 1);
  std::size_t removed = 0;
  auto remove = [&](std::uint32_t pos) {
    plan.left[pos] = prev[pos];
    plan.right[pos] = next[pos];
    if (prev[pos] != npos) next[prev[pos]] = next[pos];
    if (next[pos] != npos) prev[next[pos]] = prev[pos];
    if (pos == lo && pos != hi) {
      lo = next[pos];
      drop_interior(lo);
    } else if (pos == hi && pos != lo) {
      hi = prev[pos];
      drop_interior(hi);
    } else {
      drop_interior(pos);
    }
    plan.order[n - 1 - removed] = pos;
    ++removed;
  };

  for (std::size_t p = n; p >= 3; --p) {
    const std::uint64_t w = removal_weight(q, p);
    const std::uint64_t r = stream.below(w);
    const auto qb = static_cast<std::uint64_t>(q - 1);
    if (r < qb) {
      remove(lo);
    } else if (r < 2 * qb) {
      remove(hi);
    } else {
      remove(interior[(r - 2 * qb) / static_cast<std::uint64_t>(q - 2)]);
    }
  }
  if (n >= 2) remove(stream.below(2) == 0 ? lo : hi);
  remove(lo);
  assert(removed == n);

  for (std::size_t i = 0; i < n; ++i) {
    const bool l = plan.left[i] != npos, r = plan.right[i] != npos;
    plan.types[i] = (l && r) ? Arrival::interior : (l || r) ? Arrival::boundary : Arrival::first;
  }
  return plan;
}

/// Forward replay of an arrival plan. Consumes exactly n below() draws.
inline ColourWord replay(int q, const ArrivalPlan& plan, Stream& stream) {
  constexpr auto npos = ArrivalPlan::npos;
  ColourWord w{q, std::vector<Colour>(plan.n, 0)};
  for (std::uint32_t pos : plan.order) {
    const Colour a = plan.left[pos] == npos ? 0 : w.symbols[plan.left[pos]];
    const Colour b = plan.right[pos] == npos ? 0 : w.symbols[plan.right[pos]];
    assert(a != b || a == 0);
    const int banned = (a != 0) + (b != 0);
    auto pick = static_cast<int>(stream.below(static_cast<std::uint64_t>(q - banned)));
    Colour c = 0;
    for (int col = 1; col <= q; ++col) {
      if (col == a || col == b) continue;
      if (pick-- == 0) {
        c = static_cast<Colour>(col);
        break;
      }
    }
    w.symbols[pos] = c;
  }
  return w;
}

/// Exact sample of the window law (backward pass, then replay).
inline ColourWord sample_window(int q, std::size_t n, Stream stream, bool experimental = false) {
  check_colour_count(q, experimental);
  ArrivalPlan plan = plan_arrivals(q, n, stream);
  return replay(q, plan, stream);
}

inline ColourWord sample_window(int q, std::size_t n, const Uniform& seed, bool experimental = false) {
  return sample_window(q, n, seed.stream(), experimental);
}

// ---------------------------------------------------------------------------
// Exact laws

using Rational = mpq_class;

/// Exact finite-dimensional law over colour words of length n.
struct LawTable {
  int q = 0;
  std::size_t n = 0;
  std::map<std::vector<Colour>, Rational> probability;

  Rational total() const {
    Rational t = 0;
    for (const auto& [w, p] : probability) t += p;
    return t;
  }
  Rational at(const std::vector<Colour>& w) const {
    auto it = probability.find(w);
    return it == probability.end() ? Rational(0) : it->second;
  }

  /// Law of the sub-word at the given (sorted) positions.
  LawTable marginal(const std::vector<std::size_t>& positions) const {
    LawTable out;
    out.q = q;
    out.n = positions.size();
    for (const auto& [w, p] : probability) {
      std::vector<Colour> sub;
      sub.reserve(positions.size());
      for (auto i : positions) sub.push_back(w[i]);
      out.probability[sub] += p;
    }
    return out;
  }

  friend bool operator==(const LawTable& a, const LawTable& b) {
    if (a.q != b.q || a.n != b.n) return false;
    // zero entries are not significant
    for (const auto& [w, p] : a.probability)
      if (p != b.at(w)) return false;
    for (const auto& [w, p] : b.probability)
      if (p != a.at(w)) return false;
    return true;
  }
};

inline constexpr std::size_t kMaxExactLength = 8;

/// Exact law of sample_window(q, n), computed by walking the arrival process
/// forward. The probability of an arrival order is the product of the removal
/// probabilities of the backward pass, each of which depends only on the
/// present set; together with the colour branch probabilities this makes the
/// pair (present set, colours so far) a Markov state, and states reached by
/// different histories are merged with their rational weights summed.
inline LawTable exact_sampler_law(int q, std::size_t n, bool experimental = false) {
  check_colour_count(q, experimental);
  if (n == 0) throw std::invalid_argument("fdcol: law length must be >= 1");
  if (n > kMaxExactLength)
    throw std::invalid_argument("fdcol: exact sampler law limited to n <= " + std::to_string(kMaxExactLength));

  // state: colour per position, 0 = absent
  using State = std::vector<Colour>;
  std::map<State, Rational> layer;
  layer[State(n, 0)] = 1;
  for (std::size_t p = 1; p <= n; ++p) {
    std::map<State, Rational> nxt;
    for (const auto& [s, prob] : layer) {
      for (std::size_t e = 0; e < n; ++e) {
        if (s[e] != 0) continue;
        // nearest present neighbours of e
        Colour a = 0, b = 0;
        bool has_left = false, has_right = false;
        for (std::size_t i = e; i-- > 0;)
          if (s[i] != 0) {
            a = s[i];
            has_left = true;
            break;
          }
        for (std::size_t i = e + 1; i < n; ++i)
          if (s[i] != 0) {
            b = s[i];
            has_right = true;
            break;
          }
        // probability that the backward pass removes e from the set of size p
        Rational removal;
        if (p == 1) {
          removal = 1;
        } else if (p == 2) {
          removal = Rational(1, 2);
        } else {
          const auto w = removal_weight(q, p);
          removal = (has_left && has_right) ? Rational(q - 2, static_cast<unsigned long>(w))
                                            : Rational(q - 1, static_cast<unsigned long>(w));
        }
        removal.canonicalize();
        const int banned = (has_left ? 1 : 0) + (has_right ? 1 : 0);
        Rational branch = removal / (q - banned);
        for (int col = 1; col <= q; ++col) {
          if ((has_left && col == a) || (has_right && col == b)) continue;
          State t = s;
          t[e] = static_cast<Colour>(col);
          nxt[t] += prob * branch;
        }
      }
    }
    layer = std::move(nxt);
  }
  LawTable law;
  law.q = q;
  law.n = n;
  for (auto& [w, p] : layer) law.probability.emplace(w, p);
  return law;
}

/// Number of orders in which the word can be built so that every
/// intermediate sub-word is proper: N(x) = sum_i [x\i proper] N(x\i), N() = 1.
class InsertionCounter {
 public:
  std::uint64_t operator()(const std::vector<Colour>& x) {
    if (x.size() > 12) throw std::invalid_argument("fdcol: insertion_count limited to length 12");
    if (!is_proper(x)) return 0;
    return count(x);
  }

 private:
  std::uint64_t count(const std::vector<Colour>& x) {
    if (x.size() <= 1) return 1;
    auto it = memo_.find(x);
    if (it != memo_.end()) return it->second;
    std::uint64_t total = 0;
    std::vector<Colour> sub(x.size() - 1);
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(i), sub.begin());
      std::copy(x.begin() + static_cast<std::ptrdiff_t>(i) + 1, x.end(), sub.begin() + static_cast<std::ptrdiff_t>(i));
      if (is_proper(sub)) total += count(sub);
    }
    memo_.emplace(x, total);
    return total;
  }

  std::map<std::vector<Colour>, std::uint64_t> memo_;
};

inline std::uint64_t insertion_count(const std::vector<Colour>& x) { return InsertionCounter{}(x); }

/// Calls f(word) for every proper word of length n over {1..q}, in lexicographic order.
template <class F>
void for_each_proper_word(int q, std::size_t n, F&& f) {
  std::vector<Colour> w(n, 1);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      f(static_cast<const std::vector<Colour>&>(w));
      return;
    }
    for (int c = 1; c <= q; ++c) {
      if (i > 0 && w[i - 1] == c) continue;
      w[i] = static_cast<Colour>(c);
      self(self, i + 1);
    }
  };
  rec(rec, 0);
}

/// Law N(x) / sum N over proper words.
inline LawTable insertion_law(int q, std::size_t n) {
  InsertionCounter counter;
  LawTable law;
  law.q = q;
  law.n = n;
  mpz_class total = 0;
  for_each_proper_word(q, n, [&](const std::vector<Colour>& w) {
    auto c = counter(w);
    law.probability[w] = Rational(mpz_class(std::to_string(c)));
    total += mpz_class(std::to_string(c));
  });
  for (auto& [w, p] : law.probability) {
    p /= total;
    p.canonicalize();
  }
  return law;
}

struct DependenceReport {
  std::size_t k = 0;
  Rational max_discrepancy = 0;
  std::vector<std::size_t> witness_a, witness_b;  // positions, 0-based
  std::size_t pairs_checked = 0;

  bool independent() const { return max_discrepancy == 0; }
};

/// Exact k-dependence check of a window law: for every set A of positions and
/// B = positions at distance > k from A, compares the joint law of (x_A, x_B)
/// with the product of marginals. Every pair of sets at distance > k is a
/// sub-pair of some (A, B) checked here.
inline DependenceReport check_dependence(const LawTable& law, std::size_t k) {
  DependenceReport rep;
  rep.k = k;
  const std::size_t n = law.n;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        a.push_back(i);
        continue;
      }
      bool far = true;
      for (std::size_t j = 0; j < n; ++j)
        if ((mask & (1u << j)) && (i > j ? i - j : j - i) <= k) far = false;
      if (far) b.push_back(i);
    }
    if (b.empty()) continue;
    ++rep.pairs_checked;
    std::vector<std::size_t> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    std::sort(ab.begin(), ab.end());
    const LawTable pa = law.marginal(a), pb = law.marginal(b), pab = law.marginal(ab);
    for (const auto& [wa, qa] : pa.probability) {
      for (const auto& [wb, qb] : pb.probability) {
        std::vector<Colour> joint(ab.size());
        for (std::size_t i = 0; i < a.size(); ++i)
          joint[static_cast<std::size_t>(std::lower_bound(ab.begin(), ab.end(), a[i]) - ab.begin())] = wa[i];
        for (std::size_t i = 0; i < b.size(); ++i)
          joint[static_cast<std::size_t>(std::lower_bound(ab.begin(), ab.end(), b[i]) - ab.begin())] = wb[i];
        Rational diff = pab.at(joint) - qa * qb;
        if (diff < 0) diff = -diff;
        if (diff > rep.max_discrepancy) {
          rep.max_discrepancy = diff;
          rep.witness_a = a;
          rep.witness_b = b;
        }
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// JSON: rationals as "numerator/denominator" strings

inline std::string rational_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) throw std::invalid_argument("fdcol: rational '" + s + "' lacks a '/'");
  const mpz_class num(s.substr(0, slash)), den(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("fdcol: rational '" + s + "' has a zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline nlohmann::json to_json(const LawTable& law) {
  nlohmann::json words = nlohmann::json::array();
  for (const auto& [w, p] : law.probability) {
    nlohmann::json word = nlohmann::json::array();
    for (auto c : w) word.push_back(static_cast<int>(c));
    words.push_back({{"word", word}, {"p", rational_string(p)}});
  }
  return {{"kind", "law_table"}, {"q", law.q}, {"n", law.n}, {"words", words}};
}

inline LawTable law_from_json(const nlohmann::json& j) {
  if (j.value("kind", "") != "law_table") throw std::invalid_argument("fdcol: JSON is not a law table");
  LawTable law;
  law.q = j.at("q").get<int>();
  law.n = j.at("n").get<std::size_t>();
  for (const auto& e : j.at("words")) {
    std::vector<Colour> w;
    for (const auto& c : e.at("word")) w.push_back(static_cast<Colour>(c.get<int>()));
    if (w.size() != law.n) throw std::invalid_argument("fdcol: law table word of wrong length");
    law.probability[w] = parse_rational(e.at("p").get<std::string>());
  }
  return law;
}

}  // namespace fdcol
