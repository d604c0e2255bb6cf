#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "filtergames/transforms.hpp"
#include "filtergames/trees.hpp"

namespace fg {

// Text forms of strategies and trees, as used on the command line and in tree
// files. A spec is "<name>" or "<name>:<argument>"; arguments of the form
// key=value are checked against the key the strategy expects.

/// Where a spec is being read: the game it will play and, for trees built from
/// strategies, how much of the tree to materialize.
struct SpecContext {
  GameConfig game;
  Nat tree_depth = 6;
  Nat tree_width = 4;
};

namespace detail {

struct SpecParts {
  std::string_view name, arg;
  bool has_arg = false;
};

inline SpecParts split_spec(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) return {text, {}, false};
  return {text.substr(0, colon), text.substr(colon + 1), true};
}

/// The value of "key=value", rejecting any other key.
inline std::string_view keyed(const SpecParts& p, std::string_view key) {
  std::size_t offset = p.name.size() + 1;
  if (!p.has_arg || !p.arg.starts_with(key) || p.arg.size() <= key.size() || p.arg[key.size()] != '=')
    throw SyntaxError(std::string(p.name) + " expects " + std::string(key) + "=<value>", offset);
  return p.arg.substr(key.size() + 1);
}

inline std::string_view required(const SpecParts& p, std::string_view what) {
  if (!p.has_arg || p.arg.empty()) throw SyntaxError(std::string(p.name) + " expects " + std::string(what), p.name.size());
  return p.arg;
}

inline void no_arg(const SpecParts& p) {
  if (p.has_arg) throw SyntaxError(std::string(p.name) + " takes no argument", p.name.size());
}

inline Nat number(std::string_view text, std::size_t offset) {
  detail::Cursor c{text, 0};
  Nat v;
  try {
    v = c.number();
  } catch (const SyntaxError&) {
    throw SyntaxError("expected a number", offset);
  }
  if (!c.at_end()) throw SyntaxError("trailing characters after number", offset + c.pos);
  return v;
}

inline Nat seed_of(const SpecParts& p) { return number(keyed(p, "seed"), p.name.size() + 6); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline std::vector<FTree> parse_tree_file(std::string_view text, const SpecContext& ctx);

// ---- strategies -------------------------------------------------------------

/// I: partition:b=<rule>, chain, chain:subtract, random:seed=<n>, tails
/// (plays [k, ∞) at round k), const:<set>, tree:<file>.
inline StrategyIPtr parse_strategy_i(std::string_view text, const SpecContext& ctx) {
  auto p = detail::split_spec(text);
  const FilterSpec& f = ctx.game.filter;
  if (p.name == "partition")
    return std::make_shared<PartitionBlockStrategy>(Partition(SeqRule(std::string(detail::keyed(p, "b")))));
  if (p.name == "chain") {
    if (p.has_arg && p.arg != "subtract") throw SyntaxError("chain takes only 'subtract'", 6);
    return std::make_shared<ChainIntersectStrategy>(f, p.has_arg);
  }
  if (p.name == "random") return std::make_shared<RandomStrategyI>(detail::seed_of(p), ctx.game.mover, f);
  if (p.name == "tails") {
    detail::no_arg(p);
    return threshold_strategy("tails", [](const History& h) { return h.round(); });
  }
  if (p.name == "const") {
    SetValue x = parse_named_set(detail::required(p, "a set"));
    std::string name(text);
    return std::make_shared<FunctionStrategyI>(name, [x](const History&) { return x; });
  }
  if (p.name == "tree") {
    auto trees = parse_tree_file(detail::read_file(std::string(detail::required(p, "a file"))), ctx);
    return std::make_shared<TreeStrategyI>(trees.front());
  }
  throw SyntaxError("unknown strategy for I '" + std::string(text) + "'", 0);
}

/// II: least, fixed:<set>, sigma:family=<family>, interval:pi=<rule>,
/// random:seed=<n>, tree:<file>.
inline StrategyIIPtr parse_strategy_ii(std::string_view text, const SpecContext& ctx) {
  auto p = detail::split_spec(text);
  const MoveKind kind = ctx.game.move;
  if (p.name == "least") {
    detail::no_arg(p);
    return least_strategy(kind, ctx.game.filter.plane());
  }
  if (p.name == "fixed") {
    SetValue x = parse_named_set(detail::required(p, "a set"));
    return std::make_shared<LeastInTargetStrategy>(x, kind, "fixed:" + std::string(p.arg));
  }
  if (p.name == "sigma") return std::make_shared<SigmaDiagStrategy>(parse_family(detail::keyed(p, "family")), kind);
  if (p.name == "interval") {
    if (kind != MoveKind::FiniteBlock) throw SyntaxError("interval plays finite sets; use a block game", 0);
    return std::make_shared<IntervalStrategy>(Ladder(SeqRule(std::string(detail::keyed(p, "pi")))));
  }
  if (p.name == "random") return std::make_shared<RandomStrategyII>(detail::seed_of(p), kind);
  if (p.name == "tree") {
    auto trees = parse_tree_file(detail::read_file(std::string(detail::required(p, "a file"))), ctx);
    return std::make_shared<TreeStrategyII>(trees.front(), kind);
  }
  throw SyntaxError("unknown strategy for II '" + std::string(text) + "'", 0);
}

// ---- G1 strategies ----------------------------------------------------------

/// I in the integer game: const:<m>, tails (m = round), random:seed=<n>,
/// translate:<strategy for I in the finite-set game>.
inline G1StrategyIPtr parse_g1_i(std::string_view text, const SpecContext& ctx) {
  auto p = detail::split_spec(text);
  if (p.name == "const") {
    Nat m = detail::number(detail::required(p, "an integer"), 6);
    return std::make_shared<FunctionG1I>(std::string(text), [m](const G1History&) { return m; });
  }
  if (p.name == "tails") {
    detail::no_arg(p);
    return std::make_shared<FunctionG1I>("tails", [](const G1History& h) { return Nat(h.round()); });
  }
  if (p.name == "random") {
    Nat seed = detail::seed_of(p);
    return std::make_shared<FunctionG1I>(std::string(text), [seed](const G1History& h) {
      std::mt19937_64 rng(detail::mix(detail::mix(seed, h.seed), h.round()));
      return std::uniform_int_distribution<Nat>(0, 2 * h.round() + 4)(rng);
    });
  }
  if (p.name == "translate") {
    SpecContext inner = ctx;
    inner.game = finite_counterpart(ctx.game.filter);
    return std::make_shared<FiniteToG1I>(parse_strategy_i(detail::required(p, "a strategy"), inner));
  }
  throw SyntaxError("unknown integer-game strategy for I '" + std::string(text) + "'", 0);
}

/// II in the integer game: plus:<c> (answers m + c), const:<c>, climb (one
/// above both m and its previous answer), random:seed=<n>,
/// translate:<strategy for II in the finite-set game>.
inline G1StrategyIIPtr parse_g1_ii(std::string_view text, const SpecContext& ctx) {
  auto p = detail::split_spec(text);
  if (p.name == "plus") {
    Nat c = detail::number(detail::required(p, "an integer"), 5);
    return std::make_shared<FunctionG1II>(std::string(text), [c](const G1History& h) { return h.ms.back() + c; });
  }
  if (p.name == "const") {
    Nat c = detail::number(detail::required(p, "an integer"), 6);
    return std::make_shared<FunctionG1II>(std::string(text), [c](const G1History&) { return c; });
  }
  if (p.name == "climb") {
    detail::no_arg(p);
    return std::make_shared<FunctionG1II>("climb", [](const G1History& h) {
      Nat n = h.ms.back() + 1;
      return h.ns.empty() ? n : std::max(n, h.ns.back() + 1);
    });
  }
  if (p.name == "random") {
    Nat seed = detail::seed_of(p);
    return std::make_shared<FunctionG1II>(std::string(text), [seed](const G1History& h) {
      std::mt19937_64 rng(detail::mix(detail::mix(seed, h.seed), h.round() + 0x51ed));
      return h.ms.back() + std::uniform_int_distribution<Nat>(0, 3)(rng);
    });
  }
  if (p.name == "translate") {
    SpecContext inner = ctx;
    inner.game = finite_counterpart(ctx.game.filter);
    return std::make_shared<FiniteToG1II>(parse_strategy_ii(detail::required(p, "a strategy"), inner));
  }
  throw SyntaxError("unknown integer-game strategy for II '" + std::string(text) + "'", 0);
}

// ---- trees ------------------------------------------------------------------

/// chain:<filter>, interval:pi=<rule>, const:<set>, fromstrategy:<II spec>.
/// Trees built from strategies use the context's game and materialization
/// bounds.
inline FTree parse_tree_rule(std::string_view text, const SpecContext& ctx) {
  auto p = detail::split_spec(text);
  if (p.name == "chain") return build_chain_tree(make_filter(detail::required(p, "a filter")));
  if (p.name == "interval") return build_interval_tree(Ladder(SeqRule(std::string(detail::keyed(p, "pi")))));
  if (p.name == "const") return constant_tree(parse_named_set(detail::required(p, "a set")));
  if (p.name == "fromstrategy") {
    auto s = parse_strategy_ii(detail::required(p, "a strategy"), ctx);
    return tree_from_strategy_ii(s, ctx.game.filter, ctx.tree_depth, ctx.tree_width).tree;
  }
  throw SyntaxError("unknown tree rule '" + std::string(text) + "'", 0);
}

/// One rule per line; blank lines and lines starting with '#' are skipped.
/// Errors name the line.
inline std::vector<FTree> parse_tree_file(std::string_view text, const SpecContext& ctx) {
  std::vector<FTree> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    try {
      out.push_back(parse_tree_rule(line, ctx));
    } catch (const SyntaxError& e) {
      throw SyntaxError("line " + std::to_string(line_no) + ": " + e.what(), e.position());
    }
  }
  if (out.empty()) throw SyntaxError("tree file has no rules", 0);
  return out;
}

}  // namespace fg
