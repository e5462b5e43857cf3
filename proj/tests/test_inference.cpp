#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "rubeval/concordance.hpp"
#include "rubeval/error.hpp"
#include "rubeval/inference.hpp"
#include "rubeval/random.hpp"

using namespace rubeval;

namespace {

std::vector<double> noisy(std::mt19937_64& rng, const std::vector<double>& truth, double sd) {
  std::normal_distribution<double> e(0.0, sd);
  std::vector<double> out;
  for (double t : truth) out.push_back(std::round(t + e(rng)));
  return out;
}

struct Fixture {
  std::vector<double> human, a, b;
};

Fixture make(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(1.0, 6.0);
  std::vector<double> truth(n);
  for (auto& t : truth) t = u(rng);
  return {noisy(rng, truth, 0.6), noisy(rng, truth, 0.8), noisy(rng, truth, 1.5)};
}

BootstrapOptions opts(std::uint64_t seed, Correction c = Correction::None95, unsigned threads = 1) {
  BootstrapOptions o;
  o.seed = seed;
  o.correction = c;
  o.threads = threads;
  return o;
}

}  // namespace

TEST(RankBounds, FixedRanksAtOneThousand) {
  auto r = rank_bounds(1000, Correction::None95);
  EXPECT_EQ(r.lo_a, 25u);
  EXPECT_EQ(r.lo_b, 25u);
  EXPECT_EQ(r.hi_a, 975u);
  EXPECT_EQ(r.hi_b, 975u);
  auto b = rank_bounds(1000, Correction::Bonferroni3);
  EXPECT_EQ(b.lo_a, 8u);
  EXPECT_EQ(b.lo_b, 9u);
  EXPECT_EQ(b.hi_a, 991u);
  EXPECT_EQ(b.hi_b, 992u);
}

TEST(RankBounds, ScaleToOtherCounts) {
  auto r = rank_bounds(200, Correction::None95);
  EXPECT_EQ(r.lo_a, 5u);
  EXPECT_EQ(r.hi_a, 195u);
  auto tiny = rank_bounds(10, Correction::Bonferroni3);
  EXPECT_GE(tiny.lo_a, 1u);
  EXPECT_LE(tiny.hi_b, 10u);
}

TEST(IntervalFromSorted, ReadsInjectedRanks) {
  std::vector<double> sorted(1000);
  std::iota(sorted.begin(), sorted.end(), 1.0);
  auto [lo, hi] = interval_from_sorted(sorted, Correction::None95);
  EXPECT_DOUBLE_EQ(lo, 25.0);
  EXPECT_DOUBLE_EQ(hi, 975.0);
  auto [blo, bhi] = interval_from_sorted(sorted, Correction::Bonferroni3);
  EXPECT_DOUBLE_EQ(blo, 8.5);
  EXPECT_DOUBLE_EQ(bhi, 991.5);
}

TEST(ClassifyInterval, Directions) {
  BootstrapInterval i;
  i.lo = 0.01, i.hi = 0.2;
  classify_interval(i);
  EXPECT_TRUE(i.significant);
  EXPECT_EQ(i.direction, Direction::AFavored);
  i.lo = -0.2, i.hi = -0.01;
  classify_interval(i);
  EXPECT_EQ(i.direction, Direction::BFavored);
  i.lo = 0.0, i.hi = 0.3;
  classify_interval(i);
  EXPECT_FALSE(i.significant);
  EXPECT_EQ(i.direction, Direction::NoCall);
}

TEST(Bootstrap, IdenticalConditionsGiveZeroInterval) {
  auto f = make(1, 80);
  auto t = scalar_tau_fn(f.human, f.a);
  auto r = bootstrap_tau_diff(80, t, t, opts(9));
  EXPECT_EQ(r.diff_point, 0.0);
  EXPECT_EQ(r.lo, 0.0);
  EXPECT_EQ(r.hi, 0.0);
  EXPECT_FALSE(r.significant);
  EXPECT_EQ(r.sorted_diffs.size(), 1000u);
}

TEST(Bootstrap, PerfectVersusReversedOrdering) {
  std::vector<double> h{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> rev(h.rbegin(), h.rend());
  auto r = bootstrap_tau_diff(10, scalar_tau_fn(h, h), scalar_tau_fn(h, rev), opts(3));
  EXPECT_DOUBLE_EQ(r.diff_point, 2.0);
  EXPECT_DOUBLE_EQ(r.lo, 2.0);
  EXPECT_DOUBLE_EQ(r.hi, 2.0);
  EXPECT_EQ(r.direction, Direction::AFavored);
}

TEST(Bootstrap, DegenerateResamplesAreRedrawn) {
  std::vector<double> h{1, 2};
  auto r = bootstrap_tau_diff(2, scalar_tau_fn(h, h), scalar_tau_fn(h, {2, 1}), opts(4));
  EXPECT_EQ(r.sorted_diffs.size(), 1000u);
  EXPECT_GT(r.skipped_resamples, 0u);
}

TEST(Bootstrap, AllDegenerateThrows) {
  // Defined only on the full sample, which a 30-item resample essentially never reproduces.
  ResampleTauFn only_identity = [](std::span<const std::size_t> idx) -> double {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] != k) throw Error(ErrorCode::DegenerateVariable, "flat");
    }
    return 1.0;
  };
  try {
    bootstrap_tau_diff(30, only_identity, only_identity, opts(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllResamplesDegenerate);
  }
}

TEST(Bootstrap, SameSeedSameResultAcrossThreadCounts) {
  auto f = make(2, 150);
  auto ta = scalar_tau_fn(f.human, f.a);
  auto tb = scalar_tau_fn(f.human, f.b);
  auto one = bootstrap_tau_diff(150, ta, tb, opts(42, Correction::None95, 1));
  for (unsigned threads : {2u, 4u, 8u}) {
    auto many = bootstrap_tau_diff(150, ta, tb, opts(42, Correction::None95, threads));
    EXPECT_EQ(many.sorted_diffs, one.sorted_diffs);
    EXPECT_EQ(many.lo, one.lo);
    EXPECT_EQ(many.hi, one.hi);
  }
  auto other = bootstrap_tau_diff(150, ta, tb, opts(43));
  EXPECT_NE(other.sorted_diffs, one.sorted_diffs);
}

TEST(Bootstrap, BonferroniIntervalContainsPlainInterval) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto f = make(100 + seed, 60);
    auto ta = scalar_tau_fn(f.human, f.a);
    auto tb = scalar_tau_fn(f.human, f.b);
    auto plain = bootstrap_tau_diff(60, ta, tb, opts(seed));
    auto wide = bootstrap_tau_diff(60, ta, tb, opts(seed, Correction::Bonferroni3));
    EXPECT_LE(wide.lo, plain.lo);
    EXPECT_GE(wide.hi, plain.hi);
  }
}

// Swapping the two conditions negates every resampled difference. The bounds
// mirror through the reflected ranks, which differ from the fixed ranks by
// one position.
TEST(Bootstrap, SwappingConditionsNegatesDifferences) {
  auto f = make(3, 90);
  auto ta = scalar_tau_fn(f.human, f.a);
  auto tb = scalar_tau_fn(f.human, f.b);
  auto ab = bootstrap_tau_diff(90, ta, tb, opts(17));
  auto ba = bootstrap_tau_diff(90, tb, ta, opts(17));
  EXPECT_DOUBLE_EQ(ba.diff_point, -ab.diff_point);
  ASSERT_EQ(ab.sorted_diffs.size(), ba.sorted_diffs.size());
  for (std::size_t i = 0; i < ab.sorted_diffs.size(); ++i) {
    EXPECT_NEAR(ba.sorted_diffs[i], -ab.sorted_diffs[ab.sorted_diffs.size() - 1 - i], 1e-15);
  }
  EXPECT_LE(ba.lo, -ab.hi);
  EXPECT_LE(ba.hi, -ab.lo);
  EXPECT_NEAR(ba.lo, -ab.sorted_diffs[975], 1e-15);
  EXPECT_NEAR(ba.hi, -ab.sorted_diffs[25], 1e-15);
}

TEST(CompareTriple, UsesDerivedSeedsAndFixedOrientation) {
  auto f = make(4, 70);
  std::mt19937_64 rng(99);
  std::vector<double> truth(f.human);
  auto edited = noisy(rng, truth, 0.3);
  auto te = scalar_tau_fn(f.human, edited);
  auto ts = scalar_tau_fn(f.human, f.a);
  auto tb = scalar_tau_fn(f.human, f.b);
  auto triple = compare_triple(70, ts, tb, te, opts(42));

  auto expect = [&](const BootstrapInterval& got, const ResampleTauFn& a, const ResampleTauFn& b, std::uint64_t k) {
    auto want = bootstrap_tau_diff(70, a, b, opts(derive_seed(42, {k}), Correction::Bonferroni3));
    EXPECT_EQ(got.seed, derive_seed(42, {k}));
    EXPECT_EQ(got.correction, Correction::Bonferroni3);
    EXPECT_EQ(got.sorted_diffs, want.sorted_diffs);
    EXPECT_EQ(got.lo, want.lo);
  };
  expect(triple.edited_vs_separate, te, ts, 0);
  expect(triple.edited_vs_batch, te, tb, 1);
  expect(triple.separate_vs_batch, ts, tb, 2);
}

TEST(Bootstrap, RejectsTooFewItems) {
  std::vector<double> one{1};
  EXPECT_THROW(bootstrap_tau_diff(1, scalar_tau_fn(one, one), scalar_tau_fn(one, one), opts(1)), Error);
}
