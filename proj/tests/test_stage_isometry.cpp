#include <gtest/gtest.h>

#include <set>

#include "fdcol/stage_isometry.hpp"
#include "fdcol/verify.hpp"

using namespace fdcol;

namespace {

SiteConfig<std::uint8_t> net_on(const Box& box, const std::vector<std::int64_t>& points) {
  SiteConfig<std::uint8_t> j(box, 0);
  for (auto p : points) j.at(Site{p}) = 1;
  return j;
}

// distinct orbits of |.|_1 <= r in Z^2: (a, b) with a >= b >= 0
std::int64_t plane_orbits(std::int64_t r) {
  std::int64_t n = 0;
  for (std::int64_t a = 0; a <= r; ++a)
    for (std::int64_t b = 0; b <= a && a + b <= r; ++b) ++n;
  return n;
}

}  // namespace

TEST(Spec, LineValues) {
  const auto p = PipelineSpec::make(1);
  EXPECT_EQ(p.kappa, 2);
  EXPECT_EQ(p.tiling_range, 1);
  EXPECT_EQ(p.cluster_scale, 2);
  EXPECT_EQ(p.net_scale, 4);
  EXPECT_EQ(p.tiling_cover, 8);
  EXPECT_EQ(p.label_bound, 8);
  EXPECT_EQ(p.reduce_margin, 8);
  EXPECT_EQ(p.net_margin(), 32);
  EXPECT_EQ(p.cluster_radius(), 4);
  EXPECT_EQ(p.patch_radius(), 3);
  EXPECT_EQ(p.cluster_cover(), 8);
}

TEST(Spec, PlaneValues) {
  const auto p = PipelineSpec::make(2, 3);
  EXPECT_EQ(p.kappa, 8);
  EXPECT_EQ(p.cluster_scale, 8);
  EXPECT_EQ(p.net_scale, 64);
  EXPECT_EQ(p.tiling_cover, 128);
  EXPECT_EQ(p.label_bound, plane_orbits(128) - 1);
  EXPECT_EQ(p.net_margin(), 192);
  EXPECT_THROW(PipelineSpec::make(2, -1), std::invalid_argument);
}

TEST(NetFactor, TrimsMarginAndIsANet) {
  const auto f = sample(SeededField(3), Box(Site{0}, Site{199}));
  auto j = net_factor(f, 4, 20);
  EXPECT_EQ(j.box, Box(Site{20}, Site{179}));
  j.margin = 4;
  EXPECT_TRUE(check_net(j, 4, 4).pass);
  EXPECT_THROW(net_factor(f, 4, 100), std::invalid_argument);
}

TEST(SymmetrizedNets, LineUnionOfTwoNets) {
  const auto spec = PipelineSpec::make(1, 2);
  const PairField w = distribute(sample(SeededField(17), Box(Site{-1}, Site{300})));
  const auto n = symmetrized_nets(w, spec.net_scale, spec.net_margin());
  ASSERT_EQ(n.per_gamma.size(), 2u);
  std::size_t both = 0;
  for (std::size_t i = 0; i < n.union_net.size(); ++i) {
    EXPECT_EQ(n.union_net.values[i], n.per_gamma[0].values[i] | n.per_gamma[1].values[i]);
    both += n.per_gamma[0].values[i] & n.per_gamma[1].values[i];
  }
  for (auto j : n.per_gamma) {
    j.margin = spec.net_scale;
    const auto r = check_net(j, spec.net_scale, spec.net_scale);
    EXPECT_TRUE(r.pass) << r.text();
  }
  // the identity branch is the net factor of W(x, x+1) directly
  SiteConfig<Uniform> right(w.box());
  for_each_site(w.box(), [&](const Site& x) { right.at(x) = w.at(x, Site{x.c[0] + 1}); });
  EXPECT_EQ(n.per_gamma[0], net_factor(right, spec.net_scale, spec.net_margin()));
  EXPECT_LT(both, n.union_net.size() / 8);
}

TEST(ClusterNet, LineExample) {
  // nets {0, 3, 6, ...} and {1, 4, 7, ...}: clusters {3i, 3i+1} at m = 1
  std::vector<std::int64_t> pts;
  for (std::int64_t i = 0; i < 10; ++i) {
    pts.push_back(3 * i);
    pts.push_back(3 * i + 1);
  }
  const Box box(Site{0}, Site{29});
  const auto u = sample(SeededField(5), box);
  const auto c = cluster_net(net_on(box, pts), u, 2, 1);
  EXPECT_EQ(c.net.box, Box(Site{2}, Site{27}));
  EXPECT_EQ(c.max_size, 2u);
  EXPECT_EQ(c.max_diameter, 1);
  for (std::int64_t i = 1; i < 9; ++i) {
    const bool left_wins = u.at(Site{3 * i}).bits > u.at(Site{3 * i + 1}).bits;
    EXPECT_EQ(c.net.at(Site{3 * i}), left_wins ? 1 : 0);
    EXPECT_EQ(c.net.at(Site{3 * i + 1}), left_wins ? 0 : 1);
    EXPECT_EQ(c.net.at(Site{3 * i + 2}), 0);
  }
  auto out = c.net;
  out.margin = 4;
  const auto r = check_net(out, 1, 4);
  EXPECT_TRUE(r.pass) << r.text();
}

TEST(ClusterNet, OversizedClusterThrows) {
  const Box box(Site{0}, Site{20});
  EXPECT_THROW(cluster_net(net_on(box, {8, 9, 10}), sample(SeededField(1), box), 2, 1), std::runtime_error);
}

TEST(OrbitTiling, LineExample) {
  const auto y = orbit_tiling(net_on(Box(Site{-4}, Site{11}), {0, 7}), 4, OrbitLabelling(1, 4));
  EXPECT_EQ(y.box, Box(Site{0}, Site{7}));
  EXPECT_EQ(y.values, (std::vector<std::int64_t>{0, 1, 2, 3, 3, 2, 1, 0}));
}

TEST(OrbitTiling, GapThrows) {
  EXPECT_THROW(orbit_tiling(net_on(Box(Site{-4}, Site{20}), {0, 16}), 4, OrbitLabelling(1, 4)), std::runtime_error);
  EXPECT_THROW(orbit_tiling(net_on(Box(Site{-4}, Site{11}), {0, 7}), 5, OrbitLabelling(1, 4)), std::invalid_argument);
}

TEST(OrbitTiling, MatchesDirectMinimum) {
  const OrbitLabelling labels(2, 12);
  // a greedy (2, 2)-net on distinct priorities
  const Box box = Box::cube(2, 60);
  const auto pr = map_values(sample(SeededField(2), box), [](const Uniform& u) { return static_cast<std::int64_t>(u.bits >> 1); });
  const auto net = net_extract(pr, 2);
  const auto y = orbit_tiling(net, 12, labels);
  std::vector<Site> pts;
  for (std::size_t i = 0; i < net.size(); ++i)
    if (net.values[i]) pts.push_back(net.box.site(i));
  for_each_site(y.box, [&](const Site& v) {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (const Site& p : pts)
      if (dist1(v, p) <= 12) best = std::min(best, labels.label(v - p));
    ASSERT_EQ(y.at(v), best) << v.str();
  });
}

TEST(Tiles, LineComponents) {
  SiteConfig<std::int64_t> y(Box(Site{0}, Site{7}));
  y.values = {0, 1, 2, 3, 3, 2, 1, 0};
  const auto t = tiles(y, 1);
  ASSERT_EQ(t.size(), 7u);
  std::set<std::vector<std::size_t>> got(t.begin(), t.end());
  EXPECT_TRUE(got.count({3, 4}));
  EXPECT_EQ(tiles(y, 3).size(), 6u);  // the 2s at distance 3 join at m = 3
}

TEST(Patchwork, RanksWithinTile) {
  SiteConfig<std::int64_t> y(Box(Site{0}, Site{7}));
  y.values = {0, 1, 2, 3, 3, 2, 1, 0};
  auto u = sample(SeededField(1), y.box);
  u.at(Site{3}) = Uniform{900};
  u.at(Site{4}) = Uniform{100};
  auto p = patchwork(y, u, 2, 1);
  EXPECT_EQ(p.colours.box, Box(Site{3}, Site{4}));
  EXPECT_EQ(p.colours.at(Site{3}), (PatchColour{3, 1}));
  EXPECT_EQ(p.colours.at(Site{4}), (PatchColour{3, 2}));
  std::swap(u.at(Site{3}), u.at(Site{4}));
  p = patchwork(y, u, 2, 1);
  EXPECT_EQ(p.colours.at(Site{3}), (PatchColour{3, 2}));
  EXPECT_EQ(p.colours.at(Site{4}), (PatchColour{3, 1}));
  EXPECT_EQ(p.ties, 0u);
  u.at(Site{3}) = u.at(Site{4});
  p = patchwork(y, u, 2, 1);
  EXPECT_EQ(p.ties, 1u);
  EXPECT_EQ(p.colours.at(Site{3}).rank, 1);
  EXPECT_THROW(patchwork(y, u, 1, 1), std::runtime_error);
}

TEST(PatchColourCode, AboveFinalRange) {
  EXPECT_EQ(encode_patch_colour({0, 1}, 1), 4);
  EXPECT_EQ(encode_patch_colour({1, 1}, 2), 14);
  EXPECT_LT(encode_patch_colour({2, 2}, 2), encode_patch_colour({3, 1}, 2));
}

TEST(Reduce, LineExample) {
  SiteConfig<std::int64_t> x(Box(Site{0}, Site{3}));
  x.values = {10, 20, 30, 10};
  const auto y = reduce_colours(x, 0);
  EXPECT_EQ(y.values, (std::vector<std::int64_t>{1, 2, 1, 2}));
  EXPECT_TRUE(check_proper(y, 1).pass);
}

TEST(Reduce, SmallColoursUnchanged) {
  SiteConfig<std::int64_t> x(Box(Site{0}, Site{3}));
  x.values = {1, 2, 3, 1};
  EXPECT_EQ(reduce_colours(x, 0), x);
  EXPECT_EQ(reduce_colours(x, 1).values, (std::vector<std::int64_t>{2, 3}));
  x.values = {1, 1, 2, 3};
  EXPECT_THROW(reduce_colours(x, 0), std::invalid_argument);
  x.values = {0, 1, 2, 3};
  EXPECT_THROW(reduce_colours(x, 0), std::invalid_argument);
}

TEST(Reduce, PlaneToFiveColours) {
  // a proper colouring with many colours: distinct priorities on a checkerboard offset
  SiteConfig<std::int64_t> x(Box::cube(2, 30));
  for_each_site(x.box, [&](const Site& v) { x.at(v) = 6 + 2 * (v.c[0] * 30 + v.c[1]) + ((v.c[0] + v.c[1]) & 1); });
  ASSERT_TRUE(check_proper(x, 1).pass);
  const auto y = reduce_colours(x, 0);
  EXPECT_TRUE(check_proper(y, 1).pass);
  EXPECT_TRUE(check_max_value<std::int64_t>(y, 5).pass);
}

TEST(Bound, ComposeToys) {
  EXPECT_EQ(compose_dependence(1, {3}), 7);
  EXPECT_EQ(compose_dependence(1, {1, 2, 3}), 13);
  EXPECT_EQ(compose_dependence(0, {2, 2, 2}), 12);
  EXPECT_EQ(compose_dependence(2, {0, 5, 1}), 14);
}

TEST(Bound, LineTotal) {
  const auto b = dependence_bound(PipelineSpec::make(1));
  // 4 + 2*(256*4 + 1 + 4 + 8 + 3 + 18)
  EXPECT_EQ(b.total, 2120);
  ASSERT_EQ(b.stages.size(), 7u);
  BigInt k = b.stages.front().k_after;
  for (std::size_t i = 1; i < b.stages.size(); ++i) {
    k = compose_dependence(k, {b.stages[i].radius});
    EXPECT_EQ(b.stages[i].k_after, k) << b.stages[i].name;
  }
  EXPECT_EQ(b.reference_k, 6);
  EXPECT_EQ(b.reference_m, 700);
  EXPECT_NE(b.text().find("2120"), std::string::npos);
}

TEST(Bound, PlaneReference) {
  const auto b = dependence_bound(PipelineSpec::make(2));
  EXPECT_EQ(b.reference_exponent, 16);
  EXPECT_EQ(b.reference_k, BigInt(2821109907456LL));  // 6^16
  EXPECT_EQ(b.reference_m, 14000);
  EXPECT_GT(b.total, b.empirical_total);
}
