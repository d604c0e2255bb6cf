#include <gtest/gtest.h>

#include "filtergames/refuters.hpp"

using namespace fg;

namespace {

StrategyIPtr partition_k2() { return std::make_shared<PartitionBlockStrategy>(Partition(SeqRule("k^2"))); }

StrategyIPtr constant_omega() {
  return std::make_shared<FunctionStrategyI>("omega", [](const History&) -> SetValue { return UPSet::all(); });
}

/// I plays [last reply + 1, ∞).
StrategyIPtr above_last() {
  return threshold_strategy("above-last", [](const History& h) {
    return h.replies.empty() ? Nat{0} : std::get<Nat>(h.replies.back()) + 1;
  });
}

}  // namespace

TEST(PiLadder, PartitionStrategy) {
  // thresholds jump to the next block boundary once a block is touched
  EXPECT_EQ(extract_pi_ladder(*partition_k2(), 8), (std::vector<Nat>{0, 1, 2, 4, 5, 9, 10, 16}));
}

TEST(PiLadder, ConstantOmegaIsTrivial) {
  EXPECT_EQ(extract_pi_ladder(*constant_omega(), 6), (std::vector<Nat>{0, 1, 2, 3, 4, 5}));
}

TEST(PiLadder, BudgetReported) {
  EXPECT_THROW(extract_pi_ladder(*constant_omega(), 30, 1000), std::length_error);
  RefuterRun r = pi_ladder_split(*constant_omega(), FilterSpec::frechet(), every_other_ladder_point(), 30, 8, 1000);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.error.find("exceeded"), std::string::npos);
}

TEST(PiLadder, SplitDefeatsPartitionStrategy) {
  RefuterRun r = pi_ladder_split(*partition_k2(), FilterSpec::dyadic_chain(), every_other_ladder_point(), 10);
  ASSERT_TRUE(r.ok) << r.error;
  EXPECT_EQ(r.play.outcome(), (std::vector<Nat>{0, 2, 5, 10, 17}));
  EXPECT_TRUE(r.play.legal());
}

TEST(PiLadder, AnySelectorAgainstConstantOmega) {
  RefuterRun r = pi_ladder_split(*constant_omega(), FilterSpec::frechet(), selector_from_set(parse_named_set("evens")), 12);
  ASSERT_TRUE(r.ok) << r.error;
  EXPECT_EQ(r.play.outcome(), (std::vector<Nat>{0, 2, 4, 6, 8, 10}));
}

TEST(PiLadder, FatSelectorRejected) {
  RefuterRun r = pi_ladder_split(*partition_k2(), FilterSpec::frechet(), selector_from_set(UPSet::all()), 8);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.error.find("twice"), std::string::npos);
}

TEST(PiLadder, SplitPlaysAreLegalForRandomPartitions) {
  for (const char* rule : {"k^2", "2^k", "k^3", "3^k"}) {
    PartitionBlockStrategy s{Partition(SeqRule(rule))};
    RefuterRun r = pi_ladder_split(s, FilterSpec::frechet(), every_other_ladder_point(), 9);
    ASSERT_TRUE(r.ok) << rule << ": " << r.error;
    for (std::size_t i = 1; i < r.points.size(); ++i) EXPECT_LT(r.points[i - 1], r.points[i]);
  }
}

TEST(Ramsey, FrechetWithOmega) {
  RefuterRun r = ramsey_construct(*above_last(), FilterSpec::frechet(), UPSet::all(), alternate_intervals, 8);
  ASSERT_TRUE(r.ok) << r.error;
  EXPECT_EQ(r.points, (std::vector<Nat>{0, 1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(r.play.outcome(), (std::vector<Nat>{1, 3, 5}));
}

TEST(Ramsey, ContainmentCheckedEveryStep) {
  auto tails = threshold_strategy("tail-k", [](const History& h) { return h.round(); });
  RefuterRun r = ramsey_construct(*tails, FilterSpec::frechet(), parse_named_set("evens"), alternate_intervals, 10);
  ASSERT_TRUE(r.ok) << r.error;
  for (std::size_t i = 1; i < r.points.size(); ++i) EXPECT_LT(r.points[i - 1], r.points[i]);
  for (Nat y : r.play.outcome()) EXPECT_EQ(y % 2, 0u);
  Nat steps = 0;
  for (const auto& line : r.audit) steps += line.starts_with("y_");
  EXPECT_EQ(steps, r.play.outcome().size());
}

TEST(Ramsey, WitnessFailuresReported) {
  auto bad = [](const SetValue&, const std::vector<Nat>&) { return SelectiveChoice{{0, 2}, {0}}; };
  RefuterRun r = ramsey_construct(*above_last(), FilterSpec::frechet(), UPSet::all(), bad, 6);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.error.find("misplaced"), std::string::npos);

  auto evens = std::make_shared<FunctionStrategyI>("evens", [](const History&) -> SetValue {
    return parse_named_set("evens");
  });
  RefuterRun r2 = ramsey_construct(*evens, FilterSpec::frechet(), UPSet::all(), alternate_intervals, 6);
  EXPECT_FALSE(r2.ok);
  EXPECT_NE(r2.error.find("almost contained"), std::string::npos);
}
