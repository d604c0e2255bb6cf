#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "filtergames/specs.hpp"

using namespace fg;

namespace {

SpecContext ctx(const std::string& game, FilterSpec f = FilterSpec::frechet()) {
  return SpecContext{parse_game(game, std::move(f))};
}

}  // namespace

TEST(StrategySpecs, NamesRoundTrip) {
  auto c = ctx("fr,elem,fplus");
  EXPECT_EQ(parse_strategy_i("partition:b=k^2", c)->name(), "partition:b=k^2");
  EXPECT_EQ(parse_strategy_i("chain:subtract", c)->name(), "chain:subtract");
  EXPECT_EQ(parse_strategy_i("chain", c)->name(), "chain");
  EXPECT_EQ(parse_strategy_i("random:seed=7", c)->name(), "random:seed=7");
  EXPECT_EQ(parse_strategy_ii("fixed:evens", c)->name(), "fixed:evens");
  EXPECT_EQ(parse_strategy_ii("sigma:family=columns", c)->name(), "sigma:family=columns");
  EXPECT_EQ(parse_strategy_ii("random:seed=3", c)->name(), "random:seed=3");
  EXPECT_EQ(parse_strategy_ii("interval:pi=2^k", ctx("fr,block,fplus"))->name(), "interval:pi=2^k");
}

TEST(StrategySpecs, PlayedMoves) {
  auto c = ctx("fr,elem,fplus");
  auto t = run_bounded(c.game, *parse_strategy_i("tails", c), *parse_strategy_ii("fixed:up:pre=;per=100", c), 3, 0);
  ASSERT_TRUE(t.legal());
  EXPECT_EQ(t.outcome(), (std::vector<Nat>{0, 3, 6}));
  auto x = parse_strategy_i("const:mult5", c)->move(History{});
  EXPECT_TRUE(contains(x, 10) && !contains(x, 11));
}

TEST(StrategySpecs, Errors) {
  auto c = ctx("fr,elem,fplus");
  EXPECT_THROW(parse_strategy_i("partition:k^2", c), SyntaxError);
  EXPECT_THROW(parse_strategy_i("chain:add", c), SyntaxError);
  EXPECT_THROW(parse_strategy_i("random:seed=x", c), SyntaxError);
  EXPECT_THROW(parse_strategy_i("bogus", c), SyntaxError);
  EXPECT_THROW(parse_strategy_ii("least:3", c), SyntaxError);
  EXPECT_THROW(parse_strategy_ii("interval:pi=2^k", c), SyntaxError);  // needs a block game
  EXPECT_THROW(parse_strategy_ii("sigma:fam=columns", c), SyntaxError);
  EXPECT_THROW(parse_strategy_ii("fixed:", c), SyntaxError);
  EXPECT_THROW(parse_strategy_ii("tree:/nonexistent/file", c), std::runtime_error);
}

TEST(G1Specs, Moves) {
  auto c = SpecContext{GameConfig::g1(FilterSpec::frechet())};
  G1History h;
  h.ms = {4};
  EXPECT_EQ(parse_g1_ii("plus:3", c)->move(h), 7u);
  EXPECT_EQ(parse_g1_ii("const:2", c)->move(h), 2u);
  h.ns = {9};
  h.ms = {9, 4};
  EXPECT_EQ(parse_g1_ii("climb", c)->move(h), 10u);
  EXPECT_EQ(parse_g1_i("const:5", c)->move(G1History{}), 5u);
  EXPECT_EQ(parse_g1_i("tails", c)->move(h), 1u);
  auto tr = parse_g1_ii("translate:least", c);
  EXPECT_NE(tr->name().find("least"), std::string::npos);
  EXPECT_THROW(parse_g1_ii("nope", c), SyntaxError);
}

TEST(TreeSpecs, Rules) {
  auto c = ctx("fr,elem,fplus");
  FTree chain = parse_tree_rule("chain:dyadic", c);
  EXPECT_TRUE(contains(chain(Path{Block{4}}), 2) && !contains(chain(Path{Block{4}}), 3));
  FTree interval = parse_tree_rule("interval:pi=2^k", c);
  EXPECT_EQ(interval.kind, NodeKind::FiniteSetSuccessors);
  FTree from = parse_tree_rule("fromstrategy:least", c);
  EXPECT_EQ(from.family, TreeFamily::Fplus);
  EXPECT_THROW(parse_tree_rule("chain:", c), SyntaxError);
  EXPECT_THROW(parse_tree_rule("forest", c), SyntaxError);
}

TEST(TreeSpecs, FileWithCommentsAndBadLine) {
  auto c = ctx("fr,elem,fplus");
  auto trees = parse_tree_file("# two trees\nchain:dyadic\n\n  interval:pi=2^k  \n", c);
  EXPECT_EQ(trees.size(), 2u);
  try {
    parse_tree_file("chain:dyadic\nnope\n", c);
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_tree_file("# nothing\n", c), SyntaxError);
}

TEST(TreeSpecs, TreeStrategyFromFile) {
  std::string path = testing::TempDir() + "fg_chain_tree.txt";
  std::ofstream(path) << "chain:dyadic\n";
  auto c = ctx("f,elem,f", FilterSpec::dyadic_chain());
  auto s = parse_strategy_i("tree:" + path, c);
  History h;
  h.offers.push_back(s->move(h));
  h.replies.push_back(Reply{Nat{4}});
  // after one move the chain tree plays the level-1 label
  EXPECT_TRUE(contains(s->move(h), 6));
  EXPECT_FALSE(contains(s->move(h), 7));
  std::remove(path.c_str());
}
