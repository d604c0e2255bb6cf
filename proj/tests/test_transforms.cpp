#include <gtest/gtest.h>

#include <random>

#include "filtergames/transforms.hpp"

using namespace fg;

namespace {

GameConfig game(Mover m, Payoff p, FilterSpec f = FilterSpec::frechet(), MoveKind k = MoveKind::Element) {
  return GameConfig::standard(m, k, p, std::move(f));
}

StrategyIPtr tails_by_round() {
  return threshold_strategy("tail-k", [](const History& h) { return h.round(); });
}

/// II in an element game: least element of the offer not yet played.
StrategyIIPtr least() { return least_strategy(MoveKind::Element); }

}  // namespace

// ---- duality ---------------------------------------------------------------

TEST(Duality, Config) {
  GameConfig d = dual_config(game(Mover::Fr, Payoff::Fplus));
  EXPECT_EQ(d.mover, Mover::AllInfinite);
  EXPECT_EQ(d.payoff, Payoff::Fstar);
  EXPECT_EQ(dual_config(d).game_text(), "fr,elem,fplus");
  EXPECT_EQ(dual_config(game(Mover::F, Payoff::F)).game_text(), "fplus,elem,fcomp");
  EXPECT_THROW(dual_config(game(Mover::Fr, Payoff::F, FilterSpec::frechet(), MoveKind::FiniteBlock)),
               std::invalid_argument);
  EXPECT_EQ(parse_direction("Iplus-to-II"), DualDirection::IPlusToII);
  EXPECT_THROW(parse_direction("sideways"), SyntaxError);
}

TEST(Duality, WrongDirectionRejected) {
  GameConfig src = game(Mover::Fr, Payoff::Fplus);
  EXPECT_THROW(dualize(least(), src, DualDirection::IIPlusToI), std::invalid_argument);
  EXPECT_THROW(dualize(least(), src, DualDirection::ItoIIPlus), std::invalid_argument);
  EXPECT_THROW(dualize(tails_by_round(), src, DualDirection::IPlusToII), std::invalid_argument);
  EXPECT_NO_THROW(dualize(tails_by_round(), src, DualDirection::ItoIIPlus));
}

TEST(Duality, FixedSetImageIsTheSet) {
  GameConfig src = game(Mover::Fr, Payoff::Fcomp);
  auto d = dualize(fixed_set_strategy(UPSet::residue(2, 0), MoveKind::Element), src, DualDirection::IItoIPlus);
  EXPECT_EQ(format(d->move(History{})), format(parse_named_set("evens")));

  Transcript t = run_bounded(dual_config(src), *d, *least(), 12, 3);
  ASSERT_TRUE(t.legal());
  ShadowPlay sp = shadow_play(*d, t);
  EXPECT_FALSE(sp.flagged_round);
  EXPECT_TRUE(sp.shadow.legal());
  EXPECT_TRUE(sp.move_identical);
  for (Nat n : sp.shadow.outcome()) EXPECT_EQ(n % 2, 0u);
}

TEST(Duality, LeastImageOfEmptyHistoryIsOmega) {
  DualI d(least(), game(Mover::Fr, Payoff::Fplus), DualMode::exact_image());
  EXPECT_EQ(format(d.image(History{})), format(UPSet::all()));
}

TEST(Duality, ApproximateImageIsFinite) {
  DualI d(least(), game(Mover::Fr, Payoff::Fplus), DualMode::approx(10));
  SetValue img = d.image(History{});
  EXPECT_EQ(card_class(img), CardClass::Finite);
  EXPECT_EQ(format(img), format(UPSet::interval(0, 10)));
  // the played move is padded to stay legal for I
  EXPECT_EQ(card_class(d.move(History{})), CardClass::Cofinite);
}

TEST(Duality, ShadowsInAllDirections) {
  FilterSpec dy = FilterSpec::dyadic_chain();
  struct Case {
    std::string label;
    GameConfig source;
    std::function<Transcript(std::uint64_t)> play;
    std::function<ShadowPlay(const Transcript&)> shadow;
  };
  std::vector<Case> cases;
  {
    GameConfig src = game(Mover::Fr, Payoff::Fplus);
    auto d = dualize(least(), src, DualDirection::IItoIPlus);
    cases.push_back({"II-to-Iplus", src,
                     [=](std::uint64_t s) {
                       return run_bounded(dual_config(src), *d, RandomStrategyII(s, MoveKind::Element), 15, s);
                     },
                     [=](const Transcript& t) { return shadow_play(*d, t); }});
  }
  {
    GameConfig src = game(Mover::Fplus, Payoff::F, dy);
    auto d = dualize(least(), src, DualDirection::IIPlusToI);
    cases.push_back({"IIplus-to-I", src,
                     [=](std::uint64_t s) {
                       return run_bounded(dual_config(src), *d, RandomStrategyII(s, MoveKind::Element), 12, s);
                     },
                     [=](const Transcript& t) { return shadow_play(*d, t); }});
  }
  {
    GameConfig src = game(Mover::Fr, Payoff::Fplus);
    auto d = dualize(std::make_shared<PartitionBlockStrategy>(Partition(SeqRule("k^2"))), src, DualDirection::ItoIIPlus);
    cases.push_back({"I-to-IIplus", src,
                     [=](std::uint64_t s) {
                       return run_bounded(dual_config(src), RandomStrategyI(s, Mover::AllInfinite, src.filter), *d, 15, s);
                     },
                     [=](const Transcript& t) { return shadow_play(*d, t); }});
  }
  {
    GameConfig src = game(Mover::AllInfinite, Payoff::Fstar);
    auto d = dualize(std::make_shared<FunctionStrategyI>("evens", [](const History&) -> SetValue {
                       return parse_named_set("evens");
                     }),
                     src, DualDirection::IPlusToII);
    cases.push_back({"Iplus-to-II", src,
                     [=](std::uint64_t s) {
                       return run_bounded(dual_config(src), RandomStrategyI(s, Mover::Fr, src.filter), *d, 15, s);
                     },
                     [=](const Transcript& t) { return shadow_play(*d, t); }});
  }
  for (const auto& c : cases) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      Transcript t = c.play(seed);
      ASSERT_TRUE(t.legal()) << c.label << " seed " << seed << ": " << t.violation->reason;
      ShadowPlay sp = c.shadow(t);
      EXPECT_FALSE(sp.flagged_round) << c.label;
      EXPECT_TRUE(sp.shadow.legal()) << c.label << " seed " << seed;
      EXPECT_TRUE(sp.move_identical) << c.label << " seed " << seed;
      EXPECT_EQ(sp.shadow.config.game_text(), c.source.game_text());
    }
  }
}

TEST(Duality, ApproximateFlag) {
  GameConfig src = game(Mover::Fr, Payoff::Fplus);
  Transcript t;
  t.config = dual_config(src);
  for (Nat k = 0; Nat n : {0, 5, 50}) {
    t.moves.push_back({k, Player::I, SetValue(UPSet::all()), true});
    t.moves.push_back({k++, Player::II, n, true});
  }
  EXPECT_EQ(approx_flag(least(), src, t, 3), std::optional<Nat>(1));
  EXPECT_EQ(approx_flag(least(), src, t, 10), std::optional<Nat>(2));
  EXPECT_EQ(approx_flag(least(), src, t, 60), std::nullopt);
}

TEST(Duality, ApproximateFlagMonotone) {
  GameConfig src = game(Mover::Fr, Payoff::Fplus);
  std::mt19937_64 rng(7);
  auto rank = [](std::optional<Nat> f) { return f ? *f : std::numeric_limits<Nat>::max(); };
  for (int trial = 0; trial < 40; ++trial) {
    Transcript t;
    t.config = dual_config(src);
    std::set<Nat> used;
    for (Nat k = 0; k < 6; ++k) {
      Nat n;
      do n = rng() % 40;
      while (used.contains(n));
      used.insert(n);
      t.moves.push_back({k, Player::I, SetValue(UPSet::all()), true});
      t.moves.push_back({k, Player::II, n, true});
    }
    Nat prev = 0;
    for (Nat m = 0; m <= 48; m += 4) {
      Nat r = rank(approx_flag(least(), src, t, m));
      EXPECT_GE(r, prev) << "trial " << trial << " m " << m;
      prev = r;
    }
    EXPECT_EQ(approx_flag(least(), src, t, 48), std::nullopt);
  }
}

// ---- singleton reduction ------------------------------------------------------

TEST(Singleton, ReduceTakesLeastElements) {
  auto blocks = std::make_shared<FunctionStrategyII>("script", [](const History& h, const SetValue&) -> Reply {
    return h.round() == 0 ? Block{2, 5} : Block{7};
  });
  GameConfig c = game(Mover::Fr, Payoff::F, FilterSpec::frechet(), MoveKind::FiniteBlock);
  Transcript orig = run_bounded(c, *tails_by_round(), *blocks, 2, 0);
  Transcript red = run_bounded(with_move(c, MoveKind::Element), *tails_by_round(), SingletonReduced(blocks), 2, 0);
  ASSERT_TRUE(red.legal());
  EXPECT_EQ(red.outcome(), (std::vector<Nat>{2, 7}));
  for (Nat n : red.outcome()) EXPECT_TRUE(std::ranges::binary_search(orig.outcome(), n));
}

TEST(Singleton, EmbedThenReduceRoundTrip) {
  GameConfig elem = game(Mover::Fr, Payoff::Fplus);
  GameConfig blk = with_move(elem, MoveKind::FiniteBlock);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto base = std::make_shared<RandomStrategyII>(seed, MoveKind::Element);
    RandomStrategyI opp(seed, Mover::Fr, elem.filter);
    Transcript direct = run_bounded(elem, opp, *base, 12, seed);
    auto embedded = std::make_shared<SingletonEmbedded>(base);
    Transcript viaBlocks = run_bounded(blk, opp, *embedded, 12, seed);
    Transcript back = run_bounded(elem, opp, SingletonReduced(embedded), 12, seed);
    ASSERT_TRUE(viaBlocks.legal());
    EXPECT_EQ(viaBlocks.outcome(), direct.outcome());
    EXPECT_EQ(back.replies(), direct.replies());
  }
}

// ---- G1 translators --------------------------------------------------------------

namespace {

/// G1 I answering the sum of II's integers so far.
G1StrategyIPtr sum_i() {
  return std::make_shared<FunctionG1I>("sum", [](const G1History& h) {
    Nat s = 0;
    for (Nat n : h.ns) s += n;
    return s;
  });
}

/// G1 II: strictly increasing and always beating I.
G1StrategyIIPtr climb_ii() {
  return std::make_shared<FunctionG1II>("climb", [](const G1History& h) {
    Nat n = h.ms.back() + 1;
    if (!h.ns.empty()) n = std::max(n, h.ns.back() + 1);
    return n;
  });
}

/// G1 II that beats I only every third round.
G1StrategyIIPtr lazy_ii() {
  return std::make_shared<FunctionG1II>("lazy", [](const G1History& h) {
    Nat last = h.ns.empty() ? 0 : h.ns.back() + 1;
    return h.round() % 3 == 2 ? std::max(last, h.ms.back() + 1) : last;
  });
}

}  // namespace

TEST(G1, ThresholdMapping) {
  EXPECT_EQ(g1_of_threshold(0), 0u);
  EXPECT_EQ(g1_of_threshold(7), 6u);
  EXPECT_EQ(threshold_of(UPSet::tail(9)), 9u);
  EXPECT_THROW(threshold_of(parse_named_set("evens")), StrategyError);
  EXPECT_EQ(parse_g1_direction("II-g1-to-finite"), G1Direction::IIG1ToFinite);
}

TEST(G1, IFromG1UsesConcatenatedBlocks) {
  G1ToFiniteI s(sum_i());
  History h;
  h.offers = {UPSet::tail(0), UPSet::tail(0)};
  h.replies = {Block{1}, Block{4, 6}};
  // the G1 strategy sees II play 1, 4, 6 and answers 11
  EXPECT_EQ(format(s.move(h)), format(UPSet::tail(12)));
}

TEST(G1, IIFromFinitePlaysBlockElementsOneByOne) {
  auto blocks = std::make_shared<FunctionStrategyII>("script", [](const History& h, const SetValue&) -> Reply {
    return h.round() == 0 ? Block{3, 5} : Block{100 + h.round()};
  });
  FiniteToG1II s(blocks);
  FunctionG1I zero("zero", [](const G1History&) { return Nat{0}; });
  Transcript t = run_g1(GameConfig::g1(FilterSpec::frechet()), zero, s, 4, 0);
  EXPECT_EQ(t.integers_of(Player::II), (std::vector<Nat>{3, 5, 101, 102}));
}

TEST(G1, CoSimulationsAgree) {
  FilterSpec fr = FilterSpec::frechet();
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto a = cosim_i_g1_to_finite(sum_i(), RandomStrategyII(seed, MoveKind::FiniteBlock), fr, 8, seed);
    EXPECT_TRUE(a.finite.legal());
    EXPECT_TRUE(a.outcomes_equal) << "I g1->finite seed " << seed;

    auto i_fin = threshold_strategy("3k", [](const History& h) { return 3 * h.round(); });
    auto b = cosim_i_finite_to_g1(i_fin, *lazy_ii(), fr, 12, seed);
    EXPECT_TRUE(b.finite.legal());
    EXPECT_TRUE(b.outcomes_equal) << "I finite->g1 seed " << seed;
    EXPECT_FALSE(b.off_board.empty());

    auto c = cosim_ii_finite_to_g1(std::make_shared<RandomStrategyII>(seed, MoveKind::FiniteBlock),
                                   FunctionG1I("2k", [](const G1History& h) { return 2 * h.round(); }), fr, 10, seed);
    EXPECT_TRUE(c.finite.legal());
    EXPECT_TRUE(c.outcomes_equal) << "II finite->g1 seed " << seed;
    EXPECT_GE(c.g1.completed_rounds(), 10u);

    auto d = cosim_ii_g1_to_finite(climb_ii(), RandomStrategyI(seed, Mover::Fr, fr), fr, 8, seed);
    EXPECT_TRUE(d.finite.legal()) << d.finite.violation->reason;
    EXPECT_TRUE(d.outcomes_equal) << "II g1->finite seed " << seed;
    EXPECT_TRUE(d.g1.g1->increasing);
  }
}

TEST(G1, ClaimDrivenBlocksStayInsideIsMove) {
  G1ToFiniteII s(climb_ii());
  auto sim = s.simulate({5, 40, 41, 200}, 0);
  ASSERT_EQ(sim.blocks.size(), 4u);
  Nat t[] = {5, 40, 41, 200};
  for (std::size_t k = 0; k < 4; ++k) {
    ASSERT_FALSE(sim.blocks[k].empty());
    EXPECT_GE(sim.blocks[k].front(), t[k]);
  }
}

// ---- two boards ---------------------------------------------------------------------

TEST(TwoBoards, ConstantThresholdAlternates) {
  FunctionStrategyI zero("zero", [](const History&) -> SetValue { return UPSet::tail(0); });
  auto r = two_board_pair(zero, FilterSpec::frechet(), 3, 0);
  EXPECT_TRUE(r.a.legal());
  EXPECT_TRUE(r.b.legal());
  EXPECT_FALSE(r.gap);
  EXPECT_EQ(r.covered_to, 5u);
  EXPECT_EQ(r.a.replies()[0], Reply(Block{0}));
  EXPECT_EQ(r.b.replies()[0], Reply(Block{0, 1}));
}

TEST(TwoBoards, CoverageWithoutGaps) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomStrategyI s1(seed, Mover::Fr, FilterSpec::frechet());
    auto r = two_board_pair(s1, FilterSpec::frechet(), 10, seed);
    ASSERT_TRUE(r.a.legal()) << r.a.violation->reason;
    ASSERT_TRUE(r.b.legal()) << r.b.violation->reason;
    EXPECT_FALSE(r.gap) << "seed " << seed << " gap at " << *r.gap;
    EXPECT_GE(r.covered_to, r.start + 19);
  }
}
