#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "filtergames/filters.hpp"

namespace fg {

enum class Mover { Fr, AllInfinite, F, Fplus };
enum class MoveKind { Element, FiniteBlock };
enum class Payoff { F, Fplus, Fcomp, Fstar };
enum class Variant { Standard, G1 };
enum class Player { I, II };

inline const char* to_string(Mover m) {
  switch (m) {
    case Mover::Fr: return "fr";
    case Mover::AllInfinite: return "allinf";
    case Mover::F: return "f";
    case Mover::Fplus: return "fplus";
  }
  return "?";
}
inline const char* to_string(MoveKind m) { return m == MoveKind::Element ? "elem" : "block"; }
inline const char* to_string(Payoff p) {
  switch (p) {
    case Payoff::F: return "f";
    case Payoff::Fplus: return "fplus";
    case Payoff::Fcomp: return "fcomp";
    case Payoff::Fstar: return "fstar";
  }
  return "?";
}
inline const char* to_string(Player p) { return p == Player::I ? "I" : "II"; }

inline Player opponent(Player p) { return p == Player::I ? Player::II : Player::I; }

/// One cell of the game grid: I draws X_k from `mover`, II answers with an
/// element (or a nonempty finite subset) of X_k, and II wins iff the outcome
/// lands in `payoff`. The G1 variant has I and II both play integers.
struct GameConfig {
  Mover mover = Mover::Fr;
  MoveKind move = MoveKind::Element;
  Payoff payoff = Payoff::Fplus;
  FilterSpec filter = FilterSpec::frechet();
  Variant variant = Variant::Standard;
  Depth depth{};

  static GameConfig standard(Mover m, MoveKind k, Payoff p, FilterSpec f) {
    GameConfig c;
    c.mover = m;
    c.move = k;
    c.payoff = p;
    c.filter = std::move(f);
    return c;
  }

  static GameConfig g1(FilterSpec f) {
    GameConfig c = standard(Mover::Fr, MoveKind::Element, Payoff::F, std::move(f));
    c.variant = Variant::G1;
    return c;
  }

  /// "mover,move,payoff" as accepted by parse_game.
  std::string game_text() const {
    return std::string(to_string(mover)) + "," + to_string(move) + "," + to_string(payoff);
  }
};

/// Parses "<fr|allinf|f|fplus>,<elem|block>,<f|fplus|fcomp|fstar>".
inline GameConfig parse_game(std::string_view text, FilterSpec f) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    parts.push_back(text.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 3) throw SyntaxError("game needs three comma-separated fields", 0);

  GameConfig c;
  c.filter = std::move(f);
  std::size_t at = 0;
  auto field = [&](std::string_view part, auto&& table, auto& out) {
    for (const auto& [name, value] : table)
      if (part == name) {
        out = value;
        at += part.size() + 1;
        return;
      }
    throw SyntaxError("unknown game field '" + std::string(part) + "'", at);
  };
  using MP = std::pair<std::string_view, Mover>;
  using KP = std::pair<std::string_view, MoveKind>;
  using PP = std::pair<std::string_view, Payoff>;
  field(parts[0], std::vector<MP>{{"fr", Mover::Fr}, {"allinf", Mover::AllInfinite}, {"f", Mover::F}, {"fplus", Mover::Fplus}},
        c.mover);
  field(parts[1], std::vector<KP>{{"elem", MoveKind::Element}, {"block", MoveKind::FiniteBlock}}, c.move);
  field(parts[2],
        std::vector<PP>{{"f", Payoff::F}, {"fplus", Payoff::Fplus}, {"fcomp", Payoff::Fcomp}, {"fstar", Payoff::Fstar}},
        c.payoff);
  return c;
}

using Block = std::vector<Nat>;
using Reply = std::variant<Nat, Block>;

/// Elements of a reply, ascending.
inline Block elements_of(const Reply& r) {
  if (auto* n = std::get_if<Nat>(&r)) return {*n};
  Block b = std::get<Block>(r);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

/// What both players have seen before round `round()`; `seed` is the
/// per-play seed handed to randomized strategies.
struct History {
  std::vector<SetValue> offers;
  std::vector<Reply> replies;
  std::uint64_t seed = 0;

  std::size_t round() const { return replies.size(); }

  /// Every element II has played so far.
  std::vector<Nat> played() const {
    std::vector<Nat> out;
    for (const auto& r : replies)
      for (Nat n : elements_of(r)) out.push_back(n);
    return out;
  }
};

/// Thrown by a strategy that cannot produce a move; the engine records it as
/// a forfeit.
class StrategyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StrategyI {
 public:
  virtual ~StrategyI() = default;
  /// Move at round h.round(); h holds all earlier offers and replies.
  virtual SetValue move(const History& h) const = 0;
  virtual std::string name() const = 0;
};

class StrategyII {
 public:
  virtual ~StrategyII() = default;
  virtual Reply move(const History& h, const SetValue& offer) const = 0;
  virtual std::string name() const = 0;

  /// {move(h, X) : X ∈ ℱ} for the given filter, when it has a closed form.
  virtual std::optional<SetValue> image(const History&, const FilterSpec&) const { return std::nullopt; }
  /// Some X ∈ ℱ with move(h, X) = n, when n is in the image.
  virtual std::optional<SetValue> preimage(const History&, const FilterSpec&, Nat) const { return std::nullopt; }
};

using StrategyIPtr = std::shared_ptr<const StrategyI>;
using StrategyIIPtr = std::shared_ptr<const StrategyII>;

using MoveValue = std::variant<Nat, Block, SetValue>;

struct MoveRecord {
  Nat k = 0;
  Player player = Player::I;
  MoveValue move;
  bool legal = true;
};

struct Violation {
  Nat round = 0;
  Player violator = Player::I;
  std::string reason;
};

/// Per-round bookkeeping for the G1 win conditions.
struct G1Flags {
  bool increasing = true;
  std::optional<Nat> first_non_increase;
  Nat tally = 0;  // rounds with m_k < n_k
};

struct Transcript {
  GameConfig config;
  std::uint64_t seed = 0;
  Nat rounds = 0;  // requested
  std::vector<MoveRecord> moves;
  std::optional<Violation> violation;
  std::optional<G1Flags> g1;

  bool legal() const { return !violation.has_value(); }

  /// Rounds in which both players moved legally.
  Nat completed_rounds() const {
    Nat n = 0;
    for (const auto& m : moves)
      if (m.player == Player::II && m.legal) ++n;
    return n;
  }

  std::vector<SetValue> offers() const {
    std::vector<SetValue> out;
    for (const auto& m : moves)
      if (m.player == Player::I && m.legal)
        if (auto* s = std::get_if<SetValue>(&m.move)) out.push_back(*s);
    return out;
  }

  std::vector<Reply> replies() const {
    std::vector<Reply> out;
    for (const auto& m : moves) {
      if (m.player != Player::II || !m.legal) continue;
      if (auto* n = std::get_if<Nat>(&m.move)) out.emplace_back(*n);
      if (auto* b = std::get_if<Block>(&m.move)) out.emplace_back(*b);
    }
    return out;
  }

  /// I's integer moves in a G1 play.
  std::vector<Nat> integers_of(Player p) const {
    std::vector<Nat> out;
    for (const auto& m : moves)
      if (m.player == p && m.legal)
        if (auto* n = std::get_if<Nat>(&m.move)) out.push_back(*n);
    return out;
  }

  /// Finite part of the outcome seen so far, ascending and deduplicated.
  std::vector<Nat> outcome() const {
    std::vector<Nat> out;
    for (const auto& r : replies())
      for (Nat n : elements_of(r)) out.push_back(n);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

inline bool operator==(const MoveRecord& a, const MoveRecord& b) {
  return a.k == b.k && a.player == b.player && a.legal == b.legal && a.move == b.move;
}
inline bool operator==(const Violation& a, const Violation& b) {
  return a.round == b.round && a.violator == b.violator && a.reason == b.reason;
}
inline bool operator==(const G1Flags& a, const G1Flags& b) {
  return a.increasing == b.increasing && a.first_non_increase == b.first_non_increase && a.tally == b.tally;
}

/// Whether `x` is a legal move for I under `c`; the reason when it is not.
inline std::optional<std::string> offer_problem(const GameConfig& c, const SetValue& x) {
  try {
    switch (c.mover) {
      case Mover::Fr:
        if (card_class(x) != CardClass::Cofinite) return "move is not cofinite";
        return std::nullopt;
      case Mover::AllInfinite:
        if (card_class(x) == CardClass::Finite) return "move is finite";
        return std::nullopt;
      case Mover::F:
      case Mover::Fplus: {
        Region r = classify(c.filter, x, c.depth);
        if (!r.known()) return "unverifiable move";
        if (c.mover == Mover::F ? !r.in_f() : !r.in_plus()) return std::string("move classifies ") + to_string(r);
        return std::nullopt;
      }
    }
  } catch (const std::exception& e) {
    return std::string("malformed move: ") + e.what();
  }
  return std::nullopt;
}

inline std::optional<std::string> reply_problem(const GameConfig& c, const SetValue& offer, const Reply& r) {
  if (c.move == MoveKind::Element) {
    auto* n = std::get_if<Nat>(&r);
    if (!n) return "malformed move: expected an element";
    if (!contains(offer, *n)) return "element " + std::to_string(*n) + " not in I's move";
    return std::nullopt;
  }
  auto* b = std::get_if<Block>(&r);
  if (!b) return "malformed move: expected a finite set";
  if (b->empty()) return "empty finite set";
  for (Nat n : *b)
    if (!contains(offer, n)) return "element " + std::to_string(n) + " not in I's move";
  return std::nullopt;
}

/// Stepwise engine for one bounded standard play. Illegal moves are recorded
/// and end the play; the violator loses.
class Play {
 public:
  Play(GameConfig config, std::uint64_t seed, Nat rounds) {
    t_.config = std::move(config);
    t_.seed = seed;
    t_.rounds = rounds;
    h_.seed = seed;
  }

  const History& history() const noexcept { return h_; }
  const Transcript& transcript() const noexcept { return t_; }
  Nat round() const noexcept { return h_.round(); }
  bool finished() const { return t_.violation.has_value() || h_.round() >= t_.rounds; }
  /// True when I has moved this round and II is to answer.
  bool awaiting_reply() const { return h_.offers.size() > h_.replies.size(); }
  const SetValue& current_offer() const { return h_.offers.back(); }

  std::optional<std::string> check_offer(const SetValue& x) const { return offer_problem(t_.config, x); }
  std::optional<std::string> check_reply(const Reply& r) const {
    return reply_problem(t_.config, current_offer(), r);
  }

  void offer(SetValue x) {
    auto problem = check_offer(x);
    t_.moves.push_back({round(), Player::I, x, !problem});
    if (problem) {
      t_.violation = Violation{round(), Player::I, *problem};
      return;
    }
    h_.offers.push_back(std::move(x));
  }

  void reply(Reply r) {
    auto problem = check_reply(r);
    MoveValue mv = std::holds_alternative<Nat>(r) ? MoveValue(std::get<Nat>(r)) : MoveValue(elements_of(r));
    t_.moves.push_back({round(), Player::II, std::move(mv), !problem});
    if (problem) {
      t_.violation = Violation{round(), Player::II, *problem};
      return;
    }
    if (auto* b = std::get_if<Block>(&r)) *b = elements_of(r);
    h_.replies.push_back(std::move(r));
  }

  void forfeit(Player p, std::string reason) { t_.violation = Violation{round(), p, std::move(reason)}; }

 private:
  Transcript t_;
  History h_;
};

/// Plays `rounds` rounds of a standard game. Strategy exceptions count as
/// forfeits by the strategy's owner.
inline Transcript run_bounded(const GameConfig& c, const StrategyI& s1, const StrategyII& s2, Nat rounds,
                              std::uint64_t seed) {
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (c.variant != Variant::Standard) throw std::invalid_argument("run_bounded needs a standard game");
  Play play(c, seed, rounds);
  while (!play.finished()) {
    SetValue x;
    try {
      x = s1.move(play.history());
    } catch (const std::exception& e) {
      play.forfeit(Player::I, std::string("strategy failed: ") + e.what());
      break;
    }
    play.offer(std::move(x));
    if (play.finished()) break;
    Reply r;
    try {
      r = s2.move(play.history(), play.current_offer());
    } catch (const std::exception& e) {
      play.forfeit(Player::II, std::string("strategy failed: ") + e.what());
      break;
    }
    play.reply(std::move(r));
  }
  return play.transcript();
}

// ---- G1 -------------------------------------------------------------------

/// I plays integers m_k, II answers n_k; II wants n strictly increasing,
/// m_k < n_k infinitely often, and {n_k} ∈ ℱ.
struct G1History {
  std::vector<Nat> ms, ns;
  std::uint64_t seed = 0;
  std::size_t round() const { return ns.size(); }
};

class G1StrategyI {
 public:
  virtual ~G1StrategyI() = default;
  virtual Nat move(const G1History& h) const = 0;
  virtual std::string name() const = 0;
};

class G1StrategyII {
 public:
  virtual ~G1StrategyII() = default;
  /// Answer to I's latest integer, which is h.ms.back().
  virtual Nat move(const G1History& h) const = 0;
  virtual std::string name() const = 0;
};

using G1StrategyIPtr = std::shared_ptr<const G1StrategyI>;
using G1StrategyIIPtr = std::shared_ptr<const G1StrategyII>;

inline Transcript run_g1(const GameConfig& c, const G1StrategyI& s1, const G1StrategyII& s2, Nat rounds,
                         std::uint64_t seed) {
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (c.variant != Variant::G1) throw std::invalid_argument("run_g1 needs a G1 game");
  Transcript t;
  t.config = c;
  t.seed = seed;
  t.rounds = rounds;
  t.g1 = G1Flags{};
  G1History h;
  h.seed = seed;
  for (Nat k = 0; k < rounds; ++k) {
    Nat m, n;
    try {
      m = s1.move(h);
    } catch (const std::exception& e) {
      t.violation = Violation{k, Player::I, std::string("strategy failed: ") + e.what()};
      break;
    }
    t.moves.push_back({k, Player::I, m, true});
    h.ms.push_back(m);
    try {
      n = s2.move(h);
    } catch (const std::exception& e) {
      t.violation = Violation{k, Player::II, std::string("strategy failed: ") + e.what()};
      break;
    }
    t.moves.push_back({k, Player::II, n, true});
    if (!h.ns.empty() && n <= h.ns.back() && t.g1->increasing) {
      t.g1->increasing = false;
      t.g1->first_non_increase = k;
    }
    if (m < n) ++t.g1->tally;
    h.ns.push_back(n);
  }
  return t;
}

}  // namespace fg
