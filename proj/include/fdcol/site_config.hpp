#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "fdcol/lattice.hpp"

namespace fdcol {

/// Values on a finite box. Cells within `margin` of the box boundary are
/// support-only: they are defined, but checks that need surrounding context
/// only look at interior().
template <class T>
struct SiteConfig {
  Box box;
  std::vector<T> values;
  std::int64_t margin = 0;

  SiteConfig() = default;
  explicit SiteConfig(const Box& b, T fill = T{}) : box(b), values(b.volume(), fill) {}

  int dim() const { return box.dim(); }
  std::size_t size() const { return values.size(); }
  Box interior() const { return box.shrink(margin); }

  T& at(const Site& s) {
    if (!box.contains(s)) throw std::out_of_range("fdcol: site " + s.str() + " outside window " + box.str());
    return values[box.index(s)];
  }
  const T& at(const Site& s) const {
    if (!box.contains(s)) throw std::out_of_range("fdcol: site " + s.str() + " outside window " + box.str());
    return values[box.index(s)];
  }
  T& operator[](std::size_t i) { return values[i]; }
  const T& operator[](std::size_t i) const { return values[i]; }

  friend bool operator==(const SiteConfig& a, const SiteConfig& b) { return a.box == b.box && a.values == b.values; }
};

/// Restriction to a sub-box.
template <class T>
SiteConfig<T> crop(const SiteConfig<T>& c, const Box& b) {
  if (b.empty()) throw std::invalid_argument("fdcol: crop to empty box");
  if (!c.box.contains(b)) throw std::invalid_argument("fdcol: crop box " + b.str() + " not inside " + c.box.str());
  SiteConfig<T> out(b);
  std::size_t i = 0;
  for_each_site(b, [&](const Site& s) { out.values[i++] = c.values[c.box.index(s)]; });
  return out;
}

/// (theta c)(v) = c(theta^{-1} v); the result lives on theta(box).
template <class T>
SiteConfig<T> act(const SiteConfig<T>& c, const Isometry& theta) {
  const Isometry inv = inverse(theta);
  SiteConfig<T> out(theta.apply(c.box));
  out.margin = c.margin;
  std::size_t i = 0;
  for_each_site(out.box, [&](const Site& s) { out.values[i++] = c.values[c.box.index(inv.apply(s))]; });
  return out;
}

/// As act(), but insists that theta maps the source window onto `target`.
template <class T>
SiteConfig<T> act(const SiteConfig<T>& c, const Isometry& theta, const Box& target) {
  if (!(theta.apply(c.box) == target))
    throw std::invalid_argument("fdcol: isometry maps " + c.box.str() + " to " + theta.apply(c.box).str() +
                                ", not to " + target.str());
  return act(c, theta);
}

template <class T, class F>
auto map_values(const SiteConfig<T>& c, F&& f) {
  using U = std::decay_t<std::invoke_result_t<F&, const T&>>;
  SiteConfig<U> out;
  out.box = c.box;
  out.margin = c.margin;
  out.values.reserve(c.values.size());
  for (const auto& v : c.values) out.values.push_back(f(v));
  return out;
}

}  // namespace fdcol
