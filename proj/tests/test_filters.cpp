#include <gtest/gtest.h>

#include "filtergames/filters.hpp"
#include "filtergames/sequence.hpp"
#include "oracle.hpp"

using namespace fg;

TEST(SeqRule, Expressions) {
  EXPECT_EQ(SeqRule("2^k")(5), 32u);
  EXPECT_EQ(SeqRule("k^2")(7), 49u);
  EXPECT_EQ(SeqRule("(k+1)^2")(2), 9u);
  EXPECT_EQ(SeqRule("3*k+1")(4), 13u);
  EXPECT_THROW(SeqRule("2^k")(70), std::overflow_error);
  EXPECT_THROW(SeqRule("k+"), SyntaxError);
}

TEST(PartitionRule, Blocks) {
  Partition p(SeqRule("k^2"));
  EXPECT_EQ(p.block_of(0), 0u);
  EXPECT_EQ(p.block_of(1), 1u);
  EXPECT_EQ(p.block_of(3), 1u);
  EXPECT_EQ(p.block_of(4), 2u);
  EXPECT_EQ(p.block(2), UPSet::interval(4, 9));
  Partition q(SeqRule("2^k"));  // boundaries 1,2,4,…: [0,1) is prepended
  EXPECT_EQ(q.block_of(0), 0u);
  EXPECT_EQ(q.block_of(1), 1u);
  EXPECT_EQ(q.block_of(5), 3u);
}

TEST(Classify, FrechetExamples) {
  auto fr = FilterSpec::frechet();
  EXPECT_EQ(classify(fr, UPSet::residue(2, 1)).tag, RegionTag::InFplusOnly);
  EXPECT_EQ(classify(fr, UPSet::tail(3)).tag, RegionTag::InF);
  EXPECT_EQ(classify(fr, UPSet::finite({1, 2})).tag, RegionTag::InFstar);
}

TEST(Classify, DyadicMultiplesOfThree) {
  auto f = FilterSpec::dyadic_chain();
  UPSet three = UPSet::multiples(3);
  EXPECT_EQ(classify(f, three, Depth{8}).tag, RegionTag::InFplusOnly);
  // window oracle up to 3·2⁸: evens ⊄* 3ω, and 3·2ⁿω ⊆ 3ω ∩ Aₙ for n ≤ 8
  Nat bound = 3 * 256 * 4;
  for (Nat n = 0; n <= 8; ++n) {
    Nat shared = 0, missing = 0;
    for (Nat x = bound / 2; x < bound; ++x) {
      bool a = x % (Nat{1} << n) == 0;
      if (a && x % 3 == 0) ++shared;
      if (a && x % 3 != 0) ++missing;
    }
    EXPECT_GT(shared, 0u);
    EXPECT_GT(missing, 0u);
  }
}

TEST(Classify, DyadicDecisionBoundOracle) {
  // brute force: s ∈ ℱ iff some Aₙ (n ≤ 12) is almost contained in s, read on
  // a window long enough that lcm(period, 2ⁿ) repeats four times past the prefix
  auto f = FilterSpec::dyadic_chain();
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    auto raw = oracle::random_raw(rng, 10, 16);
    UPSet s = raw.to_upset();
    auto member = [&](bool comp) {
      for (Nat n = 0; n <= 12; ++n) {
        Nat step = Nat{1} << n;
        Nat l = std::lcm(raw.period.size(), step);
        Nat start = raw.prefix.size() + l;
        bool ok = true;
        for (Nat x = (start + step - 1) / step * step; x < start + 2 * l && ok; x += step)
          ok = raw.contains(x) != comp;
        if (ok) return true;
      }
      return false;
    };
    RegionTag expect = member(false) ? RegionTag::InF : member(true) ? RegionTag::InFstar : RegionTag::InFplusOnly;
    ASSERT_EQ(classify(f, s).tag, expect) << s.format();
  }
}

TEST(Classify, TensorExamples) {
  auto f = FilterSpec::fr_tensor_fr();
  GridSet minus0(UPSet::all(), UPSet::all(), UPSet::all(), {{0, UPSet::empty()}});
  EXPECT_EQ(classify(f, minus0).tag, RegionTag::InF);
  GridSet single = GridSet::lift_rows(UPSet::all(), 0);
  EXPECT_EQ(classify(f, single).tag, RegionTag::InFstar);
  GridSet evens_cols(UPSet::multiples(2), UPSet::all(), UPSet::empty());
  EXPECT_EQ(classify(f, evens_cols).tag, RegionTag::InFplusOnly);
}

TEST(Classify, TensorOnFlattenedSetsMatchesColumnOracle) {
  // column n of a flattened set: m ↦ s(2ⁿ(2m+1)−1). Brute force the
  // cofiniteness of columns 0..11 from a long window of each column.
  auto f = FilterSpec::fr_tensor_fr();
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    auto raw = oracle::random_raw(rng, 12, 12);
    UPSet s = raw.to_upset();
    auto column_cofinite = [&](Nat n, bool comp) {
      // past the prefix, column n is periodic in m with period dividing |period|
      Nat p = raw.period.size();
      Nat m0 = raw.prefix.size() + 1;
      for (Nat m = m0; m < m0 + 2 * p; ++m)
        if (raw.contains((Nat{1} << n) * (2 * m + 1) - 1) == comp) return false;
      return true;
    };
    auto tensor = [&](bool comp) {
      // columns 8..11 share the verdict of every later column (|period| ≤ 12 < 2⁴)
      for (Nat n = 8; n < 12; ++n)
        if (!column_cofinite(n, comp)) return false;
      return true;
    };
    RegionTag expect = tensor(false) ? RegionTag::InF : tensor(true) ? RegionTag::InFstar : RegionTag::InFplusOnly;
    ASSERT_EQ(classify(f, s).tag, expect) << s.format();
  }
}

TEST(Classify, UniverseMismatch) {
  EXPECT_THROW(classify(FilterSpec::dyadic_chain(), GridSet::lift_rows(UPSet::all(), 0)), UniverseMismatch);
  EXPECT_THROW(classify(FilterSpec::product_inner(FilterSpec::frechet()), UPSet::multiples(2)), UniverseMismatch);
  EXPECT_EQ(classify(FilterSpec::dyadic_chain(), GridSet::full()).tag, RegionTag::InF);
}

TEST(Classify, ProductInner) {
  auto f = FilterSpec::product_inner(FilterSpec::dyadic_chain());
  // every column evens, cofinitely many columns cofinite
  GridSet in(UPSet::tail(2), UPSet::all(), UPSet::multiples(2));
  EXPECT_EQ(classify(f, in).tag, RegionTag::InF);
  // same but column 0 = odds, which is in the inner ideal
  GridSet pos(UPSet::tail(2), UPSet::all(), UPSet::multiples(2), {{0, UPSet::residue(2, 1)}});
  EXPECT_EQ(classify(f, pos).tag, RegionTag::InFplusOnly);
  // the complement has an empty column, so it is not in the filter either
  EXPECT_EQ(classify(f, GridSet::lift_rows(UPSet::all(), 3)).tag, RegionTag::InFplusOnly);
  EXPECT_EQ(classify(f, GridSet::lift_rows(UPSet::finite({4}), 3)).tag, RegionTag::InFstar);
}

TEST(Basis, Examples) {
  EXPECT_EQ(std::get<UPSet>(basis(FilterSpec::frechet(), 3)), UPSet::tail(3));
  EXPECT_EQ(std::get<UPSet>(basis(FilterSpec::dyadic_chain(), 2)), UPSet::multiples(4) & UPSet::tail(2));
  std::vector<FilterSpec> fs = {FilterSpec::frechet(), FilterSpec::dyadic_chain(), FilterSpec::fr_tensor_fr(),
                                make_filter("finitegen:evens,mult3"), make_filter("product:frechet"),
                                make_filter("product:dyadic")};
  for (const auto& f : fs)
    // dyadic basis sets have period 2^i; the product kind recurses per column class
    for (Nat i = 0; i < (f.text() == "product:dyadic" ? 14u : 20u); ++i) EXPECT_EQ(classify(f, basis(f, i), Depth{10}).tag, RegionTag::InF) << f.text() << " " << i;
}

TEST(MakeFilter, Examples) {
  EXPECT_EQ(make_filter("frechet").kind(), FilterKind::Frechet);
  auto g = make_filter("finitegen:up:pre=;per=10");
  EXPECT_EQ(g.kind(), FilterKind::FiniteGen);
  EXPECT_EQ(classify(g, UPSet::multiples(2)).tag, RegionTag::InF);
  EXPECT_EQ(classify(g, UPSet::residue(2, 1)).tag, RegionTag::InFstar);
  EXPECT_THROW(make_filter("finitegen:evens,odds"), ImproperFilter);
  EXPECT_THROW(make_filter("nonsense"), SyntaxError);
  EXPECT_THROW(make_filter("finitegen:up:pre=;per="), SyntaxError);
  EXPECT_EQ(make_filter(make_filter("product:finitegen:evens").text()).text(), "product:finitegen:up:pre=;per=10");
}

TEST(Laws, TrichotomyDualityMonotonicity) {
  std::vector<FilterSpec> fs = {FilterSpec::frechet(), FilterSpec::dyadic_chain(), FilterSpec::fr_tensor_fr(),
                                make_filter("finitegen:evens,mult3")};
  std::mt19937_64 rng(8);
  for (const auto& f : fs)
    for (int i = 0; i < 200; ++i) {
      UPSet s = oracle::random_raw(rng).to_upset();
      UPSet t = s | oracle::random_raw(rng).to_upset();
      Region r = classify(f, s), rc = classify(f, ~s);
      ASSERT_TRUE(r.known());
      EXPECT_EQ(r.in_star(), rc.in_f());
      EXPECT_EQ(r.in_plus(), !rc.in_f());
      if (r.in_f()) EXPECT_TRUE(classify(f, t).in_f());
      EXPECT_TRUE(classify(f, UPSet::tail(i % 17) - UPSet::finite({1, 5})).in_f());
    }
}
