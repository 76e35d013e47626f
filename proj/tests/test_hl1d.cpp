#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "fdcol/hl1d.hpp"

using namespace fdcol;

namespace {

// Orders of arrival for which every intermediate configuration, read on the
// present positions only, is proper.
std::uint64_t brute_insertion_count(const std::vector<Colour>& x) {
  std::vector<std::size_t> perm(x.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t n = 0;
  do {
    std::vector<bool> present(x.size(), false);
    bool ok = true;
    for (std::size_t t = 0; t < perm.size() && ok; ++t) {
      present[perm[t]] = true;
      int prev = -1;
      for (std::size_t i = 0; i < x.size() && ok; ++i) {
        if (!present[i]) continue;
        if (prev >= 0 && x[static_cast<std::size_t>(prev)] == x[i]) ok = false;
        prev = static_cast<int>(i);
      }
    }
    n += ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return n;
}

}  // namespace

TEST(Sampler, WindowsAreProperAndDeterministic) {
  for (int q : {3, 4})
    for (std::size_t n : {1u, 2u, 3u, 17u, 500u})
      for (std::uint64_t key = 0; key < 20; ++key) {
        const auto w = sample_window(q, n, Stream(key));
        ASSERT_EQ(w.symbols.size(), n);
        EXPECT_TRUE(w.proper());
        for (auto c : w.symbols) {
          EXPECT_GE(c, 1);
          EXPECT_LE(c, q);
        }
        EXPECT_EQ(w.symbols, sample_window(q, n, Stream(key)).symbols);
      }
}

TEST(Sampler, RejectsUnsupportedColourCounts) {
  EXPECT_THROW(sample_window(2, 5, Stream(1)), std::invalid_argument);
  EXPECT_THROW(sample_window(5, 5, Stream(1)), std::invalid_argument);
  EXPECT_NO_THROW(sample_window(5, 5, Stream(1), true));
  EXPECT_THROW(sample_window(4, 0, Stream(1)), std::invalid_argument);
}

TEST(Sampler, RemovalWeight) {
  EXPECT_EQ(removal_weight(4, 3), 8u);  // 2*3 + 1*2
  EXPECT_EQ(removal_weight(3, 5), 7u);  // 2*2 + 3*1
}

TEST(Sampler, MiddleArrivesLastQuarterOfTheTime) {
  const int trials = 200000;
  int last_middle = 0;
  for (int t = 0; t < trials; ++t) {
    Stream s(static_cast<std::uint64_t>(t) * 7919 + 1);
    const auto plan = plan_arrivals(4, 3, s);
    last_middle += plan.order.back() == 1;
  }
  // 2/8, five standard deviations
  EXPECT_NEAR(static_cast<double>(last_middle) / trials, 0.25, 5 * std::sqrt(0.25 * 0.75 / trials));
}

TEST(Sampler, PlanArrivalsIsAPermutation) {
  Stream s(99);
  const auto plan = plan_arrivals(4, 50, s);
  std::vector<std::uint32_t> sorted = plan.order;
  std::sort(sorted.begin(), sorted.end());
  for (std::uint32_t i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_EQ(plan.types[plan.order.front()], Arrival::first);
}

TEST(InsertionCount, HandCounts) {
  EXPECT_EQ(insertion_count({1, 2, 1}), 4u);
  EXPECT_EQ(insertion_count({1, 2, 3}), 6u);
  std::uint64_t sum = 0;
  for_each_proper_word(4, 3, [&](const std::vector<Colour>& w) { sum += insertion_count(w); });
  EXPECT_EQ(sum, 192u);
}

TEST(InsertionCount, MatchesBruteForce) {
  for (int q : {3, 4})
    for (std::size_t n = 1; n <= 6; ++n)
      for_each_proper_word(q, n, [&](const std::vector<Colour>& w) { ASSERT_EQ(insertion_count(w), brute_insertion_count(w)); });
}

TEST(ExactLaw, SmallCases) {
  const auto l1 = exact_sampler_law(4, 1);
  for (Colour a = 1; a <= 4; ++a) EXPECT_EQ(l1.at({a}), Rational(1, 4));
  const auto l2 = exact_sampler_law(4, 2);
  EXPECT_EQ(l2.probability.size(), 12u);
  for (const auto& [w, p] : l2.probability) EXPECT_EQ(p, Rational(1, 12));
  const auto l3 = exact_sampler_law(4, 3);
  EXPECT_EQ(l3.at({1, 2, 1}), Rational(1, 48));
  EXPECT_EQ(l3.at({1, 2, 3}), Rational(1, 32));
  EXPECT_EQ(l3.at({1, 1, 2}), Rational(0));
  EXPECT_EQ(12 * Rational(1, 48) + 24 * Rational(1, 32), Rational(1));
  EXPECT_EQ(l3.total(), 1);
}

TEST(ExactLaw, EqualsInsertionLaw) {
  for (int q : {3, 4})
    for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(exact_sampler_law(q, n), insertion_law(q, n)) << "q=" << q << " n=" << n;
}

TEST(ExactLaw, Marginals) {
  const auto l4 = exact_sampler_law(4, 4), l3 = exact_sampler_law(4, 3);
  EXPECT_EQ(l4.marginal({0, 1, 2}), l3);
  EXPECT_EQ(l4.marginal({1, 2, 3}), l3);
}

TEST(ExactLaw, LengthLimit) { EXPECT_THROW(exact_sampler_law(4, kMaxExactLength + 1), std::invalid_argument); }

TEST(Dependence, FourColoursOneDependent) {
  const auto l3 = exact_sampler_law(4, 3);
  // sum over the middle colour of P(a, b, a') is 1/16 for all end colours
  for (Colour a = 1; a <= 4; ++a)
    for (Colour c = 1; c <= 4; ++c) {
      Rational s = 0;
      for (Colour b = 1; b <= 4; ++b) s += l3.at({a, b, c});
      EXPECT_EQ(s, Rational(1, 16));
    }
  EXPECT_TRUE(check_dependence(l3, 1).independent());
  const auto k0 = check_dependence(l3, 0);
  EXPECT_FALSE(k0.independent());
  EXPECT_GT(k0.max_discrepancy, 0);
  for (std::size_t n = 3; n <= 6; ++n) EXPECT_TRUE(check_dependence(exact_sampler_law(4, n), 1).independent()) << n;
}

TEST(Dependence, ThreeColoursTwoDependent) {
  for (std::size_t n = 3; n <= 6; ++n) {
    const auto law = exact_sampler_law(3, n);
    EXPECT_TRUE(check_dependence(law, 2).independent()) << n;
    EXPECT_FALSE(check_dependence(law, 1).independent()) << n;
  }
}

TEST(Dependence, ReportsWitness) {
  const auto r = check_dependence(exact_sampler_law(3, 4), 1);
  EXPECT_FALSE(r.witness_a.empty());
  EXPECT_FALSE(r.witness_b.empty());
  EXPECT_GT(r.pairs_checked, 0u);
}

TEST(Rationals, StringRoundTrip) {
  EXPECT_EQ(rational_string(Rational(1, 48)), "1/48");
  EXPECT_EQ(rational_string(Rational(2, 4)), "1/2");
  EXPECT_EQ(rational_string(Rational(3)), "3/1");
  EXPECT_EQ(parse_rational("6/8"), Rational(3, 4));
  EXPECT_THROW(parse_rational("1/0"), std::exception);
}

TEST(Rationals, JsonRoundTrip) {
  const auto law = exact_sampler_law(4, 3);
  const auto j = to_json(law);
  const std::string text = j.dump();
  EXPECT_NE(text.find("\"1/48\""), std::string::npos);
  EXPECT_NE(text.find("\"1/32\""), std::string::npos);
  EXPECT_EQ(law_from_json(nlohmann::json::parse(text)), law);
}
