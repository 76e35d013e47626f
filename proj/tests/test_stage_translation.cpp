#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "fdcol/stage_translation.hpp"
#include "fdcol/verify.hpp"

using namespace fdcol;

namespace {

// Greedy selection in increasing colour order, written directly.
template <class T>
SiteConfig<std::uint8_t> naive_greedy(const SiteConfig<T>& x, std::int64_t m) {
  std::vector<std::size_t> order(x.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x.values[a] < x.values[b]; });
  SiteConfig<std::uint8_t> out(x.box, 0);
  std::vector<Site> chosen;
  for (auto i : order) {
    const Site v = x.box.site(i);
    bool blocked = false;
    for (const Site& c : chosen) blocked |= dist1(c, v) <= m;
    if (!blocked) {
      chosen.push_back(v);
      out.values[i] = 1;
    }
  }
  return out;
}

SiteConfig<std::int64_t> line(std::vector<std::int64_t> v) {
  SiteConfig<std::int64_t> c(Box(Site{0}, Site{static_cast<std::int64_t>(v.size()) - 1}));
  c.values = std::move(v);
  return c;
}

}  // namespace

TEST(RangeColouringTest, LineIsOneWindowSample) {
  const auto field = sample(SeededField(1), Box(Site{0}, Site{99}));
  const auto x = range_colouring(field, 1).materialize();
  const auto w = sample_window(4, 100, field.values[0].split(label("line", Site{1})));
  for (std::size_t i = 0; i < 100; ++i) {
    ASSERT_EQ(x.values[i].size(), 1u);
    EXPECT_EQ(x.values[i][0], w.symbols[i]);
  }
  EXPECT_TRUE(check_proper(x, 1).pass);
}

TEST(RangeColouringTest, PlaneRowAndColumnColours) {
  const auto field = sample(SeededField(2), Box::cube(2, 20));
  const auto x = range_colouring(field, 1).materialize();
  // component 0 follows direction (0,1): one word per row i
  for (std::int64_t i = 0; i < 20; ++i) {
    const auto row = sample_window(4, 20, field.at(Site{i, 0}).split(label("line", Site{0, 1})));
    const auto col = sample_window(4, 20, field.at(Site{0, i}).split(label("line", Site{1, 0})));
    for (std::int64_t j = 0; j < 20; ++j) {
      EXPECT_EQ(x.at(Site{i, j})[0], row.symbols[static_cast<std::size_t>(j)]);
      EXPECT_EQ(x.at(Site{j, i})[1], col.symbols[static_cast<std::size_t>(j)]);
    }
  }
  EXPECT_TRUE(check_proper(x, 1).pass);
  EXPECT_LE(alphabet_size(x), 16u);
}

TEST(RangeColouringTest, ProperAtRangeM) {
  for (std::int64_t m : {2, 3, 5}) {
    const auto x = range_colouring(SeededField(m), m, Box::cube(2, 24)).materialize();
    const auto r = check_proper(x, m);
    EXPECT_TRUE(r.pass) << r.text();
  }
  const auto x1 = range_colouring(SeededField(3), 4, Box(Site{0}, Site{300})).materialize();
  EXPECT_TRUE(check_proper(x1, 4).pass);
}

TEST(RangeColouringTest, SegmentGeometry) {
  const auto rc = range_colouring(SeededField(1), 2, Box::cube(2, 10));
  const auto& dirs = rc.directions();
  const auto j = static_cast<std::size_t>(dirs.find(Site{1, 1}));
  const auto seg = rc.segment(j, Site{4, 2});
  EXPECT_EQ(rc.box().site(seg.start), (Site{2, 0}));
  EXPECT_EQ(seg.index, 2);
  EXPECT_EQ(seg.length, 8);
}

TEST(RangeColouringTest, TupleMatchesMaterialize) {
  const auto rc = range_colouring(SeededField(5), 3, Box::cube(2, 12));
  const auto all = rc.materialize();
  for (const Site& v : {Site{0, 0}, Site{5, 7}, Site{11, 3}}) EXPECT_EQ(rc.tuple(v), all.at(v));
}

TEST(NetExtract, HandCases) {
  EXPECT_EQ(net_extract(line({1, 2, 1, 2}), 1).values, (std::vector<std::uint8_t>{1, 0, 1, 0}));
  EXPECT_EQ(net_extract(line({2, 1, 2, 1}), 1).values, (std::vector<std::uint8_t>{0, 1, 0, 1}));
}

TEST(NetExtract, CorruptInputThrows) {
  EXPECT_THROW(net_extract(line({1, 1}), 1), std::runtime_error);
  EXPECT_THROW(net_extract(line({1, 2, 1}), 2), std::runtime_error);
  EXPECT_NO_THROW(net_extract(line({1, 2, 1}), 1));
}

TEST(NetExtract, MatchesNaiveGreedy) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x1 = range_colouring(SeededField(seed), 4, Box(Site{0}, Site{200})).materialize();
    EXPECT_EQ(net_extract(x1, 4), naive_greedy(x1, 4));
    const auto x2 = range_colouring(SeededField(seed), 3, Box::cube(2, 18)).materialize();
    EXPECT_EQ(net_extract(x2, 3), naive_greedy(x2, 3));
  }
}

TEST(NetExtract, LazySourceMatchesMaterialized) {
  const auto rc = range_colouring(SeededField(12), 5, Box::cube(2, 40));
  EXPECT_EQ(net_extract(rc, 5), net_extract(rc.materialize(), 5));
  const Box sub(Site{6, 3}, Site{30, 33});
  EXPECT_EQ(net_extract(rc, 5, sub), net_extract(crop(rc.materialize(), sub), 5));
}

TEST(NetExtract, IsANet) {
  for (std::int64_t m : {1, 2, 4}) {
    const auto rc = range_colouring(SeededField(m + 20), m, Box::cube(2, 30));
    auto j = net_extract(rc, m);
    j.margin = m;
    const auto r = check_net(j, m, m);
    EXPECT_TRUE(r.pass) << r.text();
  }
}

TEST(NetExtract, TranslationEquivariantOnIntegerColours) {
  // distinct priorities: any order works
  const auto pr = map_values(sample(SeededField(4), Box::cube(2, 25)), [](const Uniform& u) { return static_cast<std::int64_t>(u.bits >> 1); });
  for (const auto& t : unit_translations(2)) {
    const auto r = check_equivariance([](const SiteConfig<std::int64_t>& x) { return net_extract(x, 3); }, t, pr);
    EXPECT_TRUE(r.pass) << r.text();
  }
}

TEST(Baseline, SixteenColoursProper) {
  std::set<std::int64_t> symbols;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto x = baseline_product_colouring(SeededField(seed), Box::cube(2, 64));
    ASSERT_TRUE(check_proper(x, 1).pass) << seed;
    for (const auto& t : x.values) symbols.insert(encode_tuple(t));
  }
  EXPECT_EQ(symbols.size(), 16u);
  EXPECT_EQ(*symbols.begin(), 1);
  EXPECT_EQ(*symbols.rbegin(), 16);
}

TEST(Baseline, NotReflectionInvariant) {
  // in X the first entry always changes along e_0; after swapping the axes it
  // repeats there a positive fraction of the time
  std::size_t same_x = 0, same_reflected = 0, pairs = 0;
  const Isometry swap = Isometry::swap_axes(2, 0, 1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = baseline_product_colouring(SeededField(seed), Box::cube(2, 16));
    const auto y = act(x, swap);
    for (std::int64_t i = 0; i < 16; ++i)
      for (std::int64_t j = 0; j + 1 < 16; ++j) {
        ++pairs;
        same_x += x.at(Site{j, i})[0] == x.at(Site{j + 1, i})[0];
        same_reflected += y.at(Site{j, i})[0] == y.at(Site{j + 1, i})[0];
      }
  }
  EXPECT_EQ(same_x, 0u);
  EXPECT_GT(same_reflected, pairs / 10);
}

TEST(EncodeTuple, BaseQ) {
  EXPECT_EQ(encode_tuple({1, 1}), 1);
  EXPECT_EQ(encode_tuple({2, 1}), 2);
  EXPECT_EQ(encode_tuple({1, 2}), 5);
  EXPECT_EQ(encode_tuple({4, 4}), 16);
}
