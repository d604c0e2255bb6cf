#include <gtest/gtest.h>
#include <random>

#include "filtergames/certify.hpp"
#include "filtergames/strategies.hpp"

using namespace fg;

namespace {

GameConfig fr_elem(Payoff p, FilterSpec f = FilterSpec::frechet()) {
  return GameConfig::standard(Mover::Fr, MoveKind::Element, p, std::move(f));
}

StrategyIPtr tails_by_round() {
  return threshold_strategy("tail-k", [](const History& h) { return h.round(); });
}

}  // namespace

TEST(ParseGame, Fields) {
  GameConfig c = parse_game("fr,elem,fplus", FilterSpec::frechet());
  EXPECT_EQ(c.mover, Mover::Fr);
  EXPECT_EQ(c.move, MoveKind::Element);
  EXPECT_EQ(c.payoff, Payoff::Fplus);
  EXPECT_EQ(c.game_text(), "fr,elem,fplus");
  EXPECT_EQ(parse_game("fplus,block,fstar", FilterSpec::frechet()).game_text(), "fplus,block,fstar");
  EXPECT_THROW(parse_game("bogus", FilterSpec::frechet()), SyntaxError);
  EXPECT_THROW(parse_game("fr,elem,nope", FilterSpec::frechet()), SyntaxError);
}

TEST(RunBounded, LeastElementAgainstTails) {
  auto t = run_bounded(fr_elem(Payoff::Fplus), *tails_by_round(), *least_strategy(MoveKind::Element), 5, 0);
  ASSERT_TRUE(t.legal());
  auto r = t.replies();
  ASSERT_EQ(r.size(), 5u);
  for (Nat k = 0; k < 5; ++k) EXPECT_EQ(std::get<Nat>(r[k]), k);
}

TEST(RunBounded, IllegalReplyForfeits) {
  FunctionStrategyII cheat("cheat", [](const History& h, const SetValue& x) -> Reply {
    if (h.round() == 2) return Nat{0};  // I plays [2,∞) at round 2
    return *next_element(x, 0);
  });
  auto t = run_bounded(fr_elem(Payoff::Fplus), *tails_by_round(), cheat, 10, 0);
  ASSERT_FALSE(t.legal());
  EXPECT_EQ(t.violation->round, 2u);
  EXPECT_EQ(t.violation->violator, Player::II);
  EXPECT_FALSE(t.moves.back().legal);
  EXPECT_EQ(certify(t, cert::ForfeitOnly{}).tag, VerdictTag::WinI);
}

TEST(RunBounded, IllegalOfferForfeits) {
  FunctionStrategyI bad("evens", [](const History&) -> SetValue { return UPSet::multiples(2); });
  auto t = run_bounded(fr_elem(Payoff::Fplus), bad, *least_strategy(MoveKind::Element), 3, 0);
  ASSERT_FALSE(t.legal());
  EXPECT_EQ(t.violation->violator, Player::I);
  EXPECT_EQ(t.violation->reason, "move is not cofinite");
  EXPECT_EQ(certify(t, cert::ForfeitOnly{}).tag, VerdictTag::WinII);
}

TEST(RunBounded, Deterministic) {
  GameConfig c = fr_elem(Payoff::Fplus);
  RandomStrategyI s1(3, Mover::Fr, c.filter);
  RandomStrategyII s2(4, MoveKind::Element);
  auto a = run_bounded(c, s1, s2, 40, 99), b = run_bounded(c, s1, s2, 40, 99);
  EXPECT_EQ(a.moves, b.moves);
  auto d = run_bounded(c, s1, s2, 40, 100);
  EXPECT_NE(a.moves, d.moves);
}

TEST(RunBounded, BlockReplies) {
  GameConfig c = GameConfig::standard(Mover::Fr, MoveKind::FiniteBlock, Payoff::Fplus, FilterSpec::frechet());
  FunctionStrategyII empty("empty", [](const History&, const SetValue&) -> Reply { return Block{}; });
  auto t = run_bounded(c, *tails_by_round(), empty, 3, 0);
  EXPECT_EQ(t.violation->reason, "empty finite set");
  FunctionStrategyII elem("elem", [](const History&, const SetValue&) -> Reply { return Nat{7}; });
  EXPECT_EQ(run_bounded(c, *tails_by_round(), elem, 3, 0).violation->reason, "malformed move: expected a finite set");
}

TEST(RunBounded, UnverifiableMove) {
  GameConfig c = GameConfig::standard(Mover::F, MoveKind::Element, Payoff::F, FilterSpec::dyadic_chain());
  FunctionStrategyI grid("grid", [](const History&) -> SetValue { return GridSet::lift_rows(UPSet::all(), 0); });
  auto t = run_bounded(c, grid, *least_strategy(MoveKind::Element), 2, 0);
  ASSERT_FALSE(t.legal());
  EXPECT_NE(t.violation->reason.find("malformed move"), std::string::npos);
}

TEST(Certify, EmptyTranscriptIsUndetermined) {
  Transcript t;
  Verdict v = certify(t, cert::PartitionSelector{Partition(SeqRule("k^2"))});
  EXPECT_EQ(v.tag, VerdictTag::Undetermined);
  EXPECT_EQ(v.text(), "Undetermined(0)");
}

TEST(Certify, Incompatible) {
  auto t = run_bounded(fr_elem(Payoff::Fplus), *tails_by_round(), *least_strategy(MoveKind::Element), 3, 0);
  EXPECT_THROW(certify(t, cert::IntervalLadder{Ladder()}), IncompatibleCertifier);
  EXPECT_THROW(certify(t, cert::FixedSet{UPSet::all()}), IncompatibleCertifier);
}

TEST(G1, FlagsAndTally) {
  GameConfig c = GameConfig::g1(FilterSpec::frechet());
  FunctionG1I ms("2k", [](const G1History& h) { return 2 * h.round(); });
  FunctionG1II plus1("m+1", [](const G1History& h) { return h.ms.back() + 1; });
  auto t = run_g1(c, ms, plus1, 20, 0);
  EXPECT_TRUE(t.g1->increasing);
  EXPECT_EQ(t.g1->tally, 20u);
  FunctionG1II stuck("stuck", [](const G1History& h) { return h.round() == 3 ? Nat{0} : 100 + h.round(); });
  auto u = run_g1(c, ms, stuck, 10, 0);
  EXPECT_FALSE(u.g1->increasing);
  EXPECT_EQ(u.g1->first_non_increase, 3u);
}

// ---- strategies -----------------------------------------------------------

TEST(PartitionBlock, Examples) {
  PartitionBlockStrategy s(Partition(SeqRule("2*k")));
  History h;
  EXPECT_EQ(std::get<UPSet>(s.move(h)), UPSet::all());
  h.offers.push_back(UPSet::all());
  h.replies.push_back(Nat{1});
  EXPECT_EQ(std::get<UPSet>(s.move(h)), UPSet::tail(2));
}

TEST(PartitionBlock, OutcomeIsSelector) {
  Partition p(SeqRule("k^2"));
  PartitionBlockStrategy s(p);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto t = run_bounded(fr_elem(Payoff::Fplus), s, RandomStrategyII(seed, MoveKind::Element), 50, seed);
    ASSERT_TRUE(t.legal());
    std::map<Nat, int> hits;
    for (Nat n : t.outcome()) EXPECT_LE(++hits[p.block_of(n)], 1);
    EXPECT_EQ(certify(t, cert::PartitionSelector{p}).tag, VerdictTag::WinI);
  }
}

TEST(ChainIntersect, Examples) {
  ChainIntersectStrategy s(FilterSpec::dyadic_chain(), true);
  History h;
  EXPECT_EQ(std::get<UPSet>(s.move(h)), UPSet::all());
  for (int i = 0; i < 3; ++i) {
    h.offers.push_back(UPSet::all());
    h.replies.push_back(Nat(10 + i));
  }
  EXPECT_EQ(std::get<UPSet>(s.move(h)), UPSet::multiples(4) & UPSet::tail(4));
}

TEST(ChainIntersect, TranscriptInvariant) {
  auto f = FilterSpec::dyadic_chain();
  GameConfig c = GameConfig::standard(Mover::F, MoveKind::Element, Payoff::Fstar, f);
  ChainIntersectStrategy s(f, true);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto t = run_bounded(c, s, RandomStrategyII(seed, MoveKind::Element), 12, seed);
    ASSERT_TRUE(t.legal());
    auto r = t.replies();
    for (Nat k = 0; k < r.size(); ++k) {
      Nat n = std::get<Nat>(r[k]);
      EXPECT_GE(n, k);
      for (Nat i = 0; i < k; ++i) EXPECT_TRUE(contains(basis(f, i), n));
    }
    EXPECT_EQ(certify(t, cert::ChainPseudoIntersection{}).tag, VerdictTag::WinI);
  }
}

TEST(FixedSet, StaysInsideTarget) {
  GameConfig c = fr_elem(Payoff::Fcomp);
  auto s = fixed_set_strategy(UPSet::residue(2, 1), MoveKind::Element);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto t = run_bounded(c, RandomStrategyI(seed, Mover::Fr, c.filter), *s, 30, seed);
    ASSERT_TRUE(t.legal());
    for (Nat n : t.outcome()) EXPECT_EQ(n % 2, 1u);
    Verdict v = certify(t, cert::FixedSet{UPSet::residue(2, 1)});
    EXPECT_EQ(v.tag, VerdictTag::WinII) << v.detail;
  }
  // evens are positive but not in the dyadic dual ideal, so the fstar payoff stays open
  GameConfig d = GameConfig::standard(Mover::Fr, MoveKind::Element, Payoff::Fstar, FilterSpec::dyadic_chain());
  auto t = run_bounded(d, *tails_by_round(), *fixed_set_strategy(UPSet::residue(2, 1), MoveKind::Element), 5, 0);
  EXPECT_EQ(certify(t, cert::FixedSet{UPSet::residue(2, 1)}).tag, VerdictTag::WinII);
  auto u = run_bounded(d, *tails_by_round(), *fixed_set_strategy(UPSet::multiples(2), MoveKind::Element), 5, 0);
  EXPECT_EQ(certify(u, cert::FixedSet{UPSet::multiples(2)}).tag, VerdictTag::Undetermined);
}

TEST(FixedSet, ForfeitsWhenDisjoint) {
  GameConfig c = GameConfig::standard(Mover::AllInfinite, MoveKind::Element, Payoff::Fcomp, FilterSpec::frechet());
  FunctionStrategyI evens("evens", [](const History&) -> SetValue { return UPSet::multiples(2); });
  auto t = run_bounded(c, evens, *fixed_set_strategy(UPSet::residue(2, 1), MoveKind::Element), 3, 0);
  ASSERT_FALSE(t.legal());
  EXPECT_EQ(t.violation->violator, Player::II);
  EXPECT_EQ(t.violation->round, 0u);
}

TEST(Sigma, ScheduleValues) {
  std::vector<Nat> want = {1, 0, 2, 0, 1, 0, 3};
  for (Nat k = 0; k < want.size(); ++k) EXPECT_EQ(sigma(k), want[k]);
  std::map<Nat, Nat> count;
  for (Nat k = 0; k < (1u << 20); ++k) ++count[sigma(k)];
  for (Nat n = 0; n < 10; ++n) EXPECT_GE(count[n], 1000u);
}

TEST(Sigma, ColumnsOnTensor) {
  auto f = FilterSpec::fr_tensor_fr();
  GameConfig c = fr_elem(Payoff::Fplus, f);
  SigmaDiagStrategy s(SetFamily::columns(), MoveKind::Element);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto t = run_bounded(c, RandomStrategyI(seed, Mover::Fr, f), s, 30, seed);
    ASSERT_TRUE(t.legal()) << t.violation->reason;
    std::map<Nat, Nat> per_col, expected;
    for (Nat n : t.outcome()) ++per_col[unpair(n).first];
    for (Nat k = 0; k < 30; ++k) ++expected[sigma(k)];
    for (auto [col, cnt] : expected) EXPECT_GE(per_col[col], cnt);
    Verdict v = certify(t, cert::SigmaDiag{SetFamily::columns()});
    EXPECT_EQ(v.tag, VerdictTag::WinII) << v.detail;
  }
}

TEST(Sigma, SingleSetIsLeastUnused) {
  SigmaDiagStrategy s(SetFamily::constant(UPSet::all()), MoveKind::Element);
  auto t = run_bounded(fr_elem(Payoff::Fplus), *tails_by_round(), s, 6, 0);
  for (Nat k = 0; k < 6; ++k) EXPECT_EQ(std::get<Nat>(t.replies()[k]), k);
}

TEST(Interval, HandTrace) {
  IntervalStrategy s{Ladder(SeqRule("2^k"))};
  GameConfig c = GameConfig::standard(Mover::Fr, MoveKind::FiniteBlock, Payoff::Fplus, FilterSpec::frechet());
  auto five = threshold_strategy("5", [](const History&) { return 5; });
  auto t = run_bounded(c, *five, s, 4, 0);
  ASSERT_TRUE(t.legal());
  auto r = t.replies();
  std::vector<std::pair<Nat, Nat>> want = {{8, 16}, {16, 32}, {32, 64}, {64, 128}};
  for (std::size_t k = 0; k < 4; ++k) {
    Block b = std::get<Block>(r[k]);
    EXPECT_EQ(b.front(), want[k].first);
    EXPECT_EQ(b.back() + 1, want[k].second);
  }
  EXPECT_EQ(certify(t, cert::IntervalLadder{Ladder(SeqRule("2^k"))}).tag, VerdictTag::WinII);
}

TEST(Interval, ForfeitsWithoutRoom) {
  IntervalStrategy s{Ladder(SeqRule("2^k"))};
  GameConfig c = GameConfig::standard(Mover::AllInfinite, MoveKind::FiniteBlock, Payoff::Fplus, FilterSpec::frechet());
  FunctionStrategyI evens("evens", [](const History&) -> SetValue { return UPSet::multiples(2); });
  auto t = run_bounded(c, evens, s, 3, 0);
  ASSERT_FALSE(t.legal());
  EXPECT_EQ(t.violation->violator, Player::II);
}

TEST(Interval, QuarterOfRoundsAreFullIntervals) {
  Ladder pi(SeqRule("(k+1)^2"));
  IntervalStrategy s{pi};
  GameConfig c = GameConfig::standard(Mover::Fr, MoveKind::FiniteBlock, Payoff::Fplus, FilterSpec::frechet());
  auto t = run_bounded(c, RandomStrategyI(1, Mover::Fr, c.filter), s, 100, 1);
  ASSERT_TRUE(t.legal());
  EXPECT_GE(t.replies().size(), 25u);
}

// ---- witnesses ------------------------------------------------------------

TEST(Selector, Examples) {
  Partition p(SeqRule("k^2"));
  std::vector<Nat> pts;
  for (Nat k = 0; k < 40; ++k) pts.push_back(p.boundary(k));
  EXPECT_TRUE(check_selector(UPSet::finite(pts), p, 1000).verified());
  WitnessReport r = check_selector(UPSet::multiples(2), Partition(SeqRule("4*k")), 100);
  ASSERT_TRUE(r.refuted());
  EXPECT_EQ(r.counterexample, (std::vector<Nat>{0, 0, 2}));
  EXPECT_TRUE(check_selector(UPSet::empty(), p, 100).verified());
}

TEST(Diag, TensorColumns) {
  auto f = FilterSpec::fr_tensor_fr();
  for (Nat bound : {10u, 30u, 50u}) {
    EXPECT_TRUE(check_diag(SetFamily::columns(), f, DiagMode::Plain, 10, bound).verified());
    WitnessReport r = check_diag(SetFamily::columns(), f, DiagMode::Plus, 10, bound);
    ASSERT_TRUE(r.refuted());
    EXPECT_EQ(r.counterexample, std::vector<Nat>{0});
  }
  EXPECT_TRUE(check_diag(SetFamily::constant(UPSet::all()), FilterSpec::frechet(), DiagMode::Plain, 10, 5).verified());
  // evens are almost contained in every cofinite set
  EXPECT_TRUE(check_diag(SetFamily::constant(UPSet::multiples(2)), FilterSpec::frechet(), DiagMode::Plain, 10, 5).verified());
  EXPECT_EQ(check_diag(SetFamily::constant(UPSet::multiples(2)), FilterSpec::dyadic_chain(), DiagMode::Plain, 10, 5).verdict,
            WitnessVerdict::Open);
}

TEST(Diag, Universal) {
  // X_n = all singletons {j}: every basis set contains one, and for Fréchet
  // every cofinite set meets all late singletons
  BlockFamily singles{"singletons", [](Nat, Nat j) { return Block{j}; }};
  EXPECT_TRUE(check_diag_universal(singles, FilterSpec::frechet(), UniversalMode::F, 10, 40).verified());
  EXPECT_FALSE(check_diag_universal(singles, FilterSpec::dyadic_chain(), UniversalMode::F, 5, 40).verified());
}

TEST(Talagrand, Examples) {
  EXPECT_TRUE(check_talagrand(Ladder(SeqRule("2^k")), FilterSpec::dyadic_chain(), 10, 12).verified());
  EXPECT_TRUE(check_talagrand(Ladder(SeqRule("k+1")), FilterSpec::frechet(), 10, 12).verified());
  EXPECT_THROW(check_talagrand(Ladder(std::vector<Nat>{1, 2, 2, 3}), FilterSpec::frechet(), 3, 3),
               std::invalid_argument);
  // a ladder with unit steps is too fine for the dyadic chain
  WitnessReport r = check_talagrand(Ladder(SeqRule("k+1")), FilterSpec::dyadic_chain(), 4, 12);
  ASSERT_TRUE(r.refuted());
  EXPECT_EQ(r.counterexample.size(), 2u);
}

TEST(Claim, Examples) {
  FunctionG1II plus1("m+1", [](const G1History& h) { return h.ms.back() + 1; });
  WitnessReport r = check_claim(plus1, {}, 8);
  ASSERT_TRUE(r.verified());
  EXPECT_EQ(r.counterexample, std::vector<Nat>{0});
  FunctionG1II five("5", [](const G1History&) { return Nat{5}; });
  EXPECT_EQ(check_claim(five, {}, 5, 20'000).verdict, WitnessVerdict::Open);
}

// Every sampled basis move lands in the symbolic image, and the preimage of
// that answer produces it again.
TEST(ImageCoherence, SampledBasisSets) {
  struct Case {
    StrategyIIPtr s;
    FilterSpec f;
  };
  std::vector<Case> cases = {
      {least_strategy(MoveKind::Element), FilterSpec::frechet()},
      {least_strategy(MoveKind::Element), FilterSpec::dyadic_chain()},
      {fixed_set_strategy(UPSet::multiples(3), MoveKind::Element), FilterSpec::dyadic_chain()},
      {std::make_shared<SigmaDiagStrategy>(SetFamily::columns(), MoveKind::Element), FilterSpec::fr_tensor_fr()},
  };
  std::mt19937_64 rng(17);
  for (const auto& [s, f] : cases) {
    for (int trial = 0; trial < 5; ++trial) {
      History h;
      Nat rounds = rng() % 4;
      for (Nat k = 0; k < rounds; ++k) {
        SetValue x = basis(f, rng() % 3);
        Reply r;
        try {
          r = s->move(h, x);
        } catch (const StrategyError&) {
          x = basis(f, 0);
          r = s->move(h, x);
        }
        h.replies.push_back(r);
        h.offers.push_back(x);
      }
      auto img = s->image(h, f);
      ASSERT_TRUE(img) << s->name();
      int answered = 0;
      for (int i = 0; i < 50; ++i) {
        SetValue x = basis(f, rng() % 10);
        Reply r;
        try {
          r = s->move(h, x);
        } catch (const StrategyError&) {
          continue;  // a basis set can miss the strategy's target column entirely
        }
        ++answered;
        Nat n = elements_of(r).front();
        EXPECT_TRUE(contains(*img, n)) << s->name() << " answered " << n << " outside its image";
        auto back = s->preimage(h, f, n);
        ASSERT_TRUE(back) << s->name() << " has no preimage for " << n;
        EXPECT_EQ(elements_of(s->move(h, *back)).front(), n) << s->name();
      }
      EXPECT_GT(answered, 0) << s->name();
    }
  }
}
