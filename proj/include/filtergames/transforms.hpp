#pragma once

#include <deque>
#include <numeric>

#include "filtergames/strategies.hpp"
#include "filtergames/witnesses.hpp"

namespace fg {

// ---- duality ----------------------------------------------------------------

/// Directions of the duality between 𝔊(𝒳, ω, 𝒵) and 𝔊(𝒳⁺, ω, 𝒵ᶜ), where 𝒳
/// is Fr or ℱ and 𝒳⁺ is [ω]^ω or ℱ⁺ respectively.
enum class DualDirection {
  IItoIPlus,  // II in 𝔊(𝒳, ω, 𝒵)  ->  I in 𝔊(𝒳⁺, ω, 𝒵ᶜ)
  ItoIIPlus,  // I in 𝔊(𝒳, ω, 𝒵)   ->  II in 𝔊(𝒳⁺, ω, 𝒵ᶜ)
  IIPlusToI,  // II in 𝔊(𝒳⁺, ω, 𝒵) ->  I in 𝔊(𝒳, ω, 𝒵ᶜ)
  IPlusToII,  // I in 𝔊(𝒳⁺, ω, 𝒵)  ->  II in 𝔊(𝒳, ω, 𝒵ᶜ)
};

inline const char* to_string(DualDirection d) {
  switch (d) {
    case DualDirection::IItoIPlus: return "II-to-Iplus";
    case DualDirection::ItoIIPlus: return "I-to-IIplus";
    case DualDirection::IIPlusToI: return "IIplus-to-I";
    case DualDirection::IPlusToII: return "Iplus-to-II";
  }
  return "?";
}

inline DualDirection parse_direction(std::string_view s) {
  for (auto d : {DualDirection::IItoIPlus, DualDirection::ItoIIPlus, DualDirection::IIPlusToI, DualDirection::IPlusToII})
    if (s == to_string(d)) return d;
  throw SyntaxError("unknown duality direction '" + std::string(s) + "'", 0);
}

inline bool plus_family(Mover m) { return m == Mover::AllInfinite || m == Mover::Fplus; }

inline Mover dual_mover(Mover m) {
  switch (m) {
    case Mover::Fr: return Mover::AllInfinite;
    case Mover::AllInfinite: return Mover::Fr;
    case Mover::F: return Mover::Fplus;
    case Mover::Fplus: return Mover::F;
  }
  return m;
}

inline Payoff dual_payoff(Payoff p) {
  switch (p) {
    case Payoff::F: return Payoff::Fcomp;
    case Payoff::Fcomp: return Payoff::F;
    case Payoff::Fplus: return Payoff::Fstar;
    case Payoff::Fstar: return Payoff::Fplus;
  }
  return p;
}

/// The game on the other side of the duality.
inline GameConfig dual_config(const GameConfig& c) {
  if (c.variant != Variant::Standard || c.move != MoveKind::Element)
    throw std::invalid_argument("duality needs a standard game with element moves");
  GameConfig d = c;
  d.mover = dual_mover(c.mover);
  d.payoff = dual_payoff(c.payoff);
  return d;
}

/// How II's image is computed: from the strategy's closed form, or by trying
/// the first M basis sets of the source mover family (flagged approximate).
struct DualMode {
  bool exact = true;
  Nat enumeration = 0;

  static DualMode exact_image() { return {true, 0}; }
  static DualMode approx(Nat m) { return {false, m}; }
};

/// A reconstructed play of the source game behind a dual play.
struct ShadowPlay {
  Transcript shadow;
  bool move_identical = false;
  std::optional<Nat> flagged_round;  // approximate mode: reply with no preimage among M basis sets
};

namespace detail {

/// i-th set tried when enumerating the mover family approximately.
inline SetValue mover_basis(const GameConfig& c, Nat i) {
  if (c.mover == Mover::Fr || c.mover == Mover::AllInfinite) {
    if (c.filter.plane()) return as_grid(UPSet::tail(i));
    return UPSet::tail(i);
  }
  return basis(c.filter, i);
}

inline std::optional<Reply> try_move(const StrategyII& s, const History& h, const SetValue& x) {
  try {
    return s.move(h, x);
  } catch (const StrategyError&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// I's side of the duality built from a strategy for II: plays the image of
/// II's strategy and remembers a preimage of every reply.
class DualI final : public StrategyI {
 public:
  DualI(StrategyIIPtr base, GameConfig source, DualMode mode)
      : base_(std::move(base)), source_(std::move(source)), mode_(mode) {}

  /// Shadow history of the source game behind II's replies, or the round at
  /// which no preimage was found.
  std::variant<History, Nat> reconstruct(const std::vector<Reply>& replies, std::uint64_t seed) const {
    History s;
    s.seed = seed;
    for (Nat k = 0; k < replies.size(); ++k) {
      Nat n = std::get<Nat>(replies[k]);
      std::optional<SetValue> x;
      if (mode_.exact) {
        x = base_->preimage(s, source_.filter, n);
      } else {
        for (Nat i = 0; i < mode_.enumeration && !x; ++i) {
          SetValue b = detail::mover_basis(source_, i);
          auto r = detail::try_move(*base_, s, b);
          if (r && std::get<Nat>(*r) == n) x = b;
        }
      }
      if (!x) return k;
      s.offers.push_back(*x);
      s.replies.push_back(n);
    }
    return s;
  }

  /// {II's move on X : X in the source mover family}; approximate mode
  /// enumerates the first M basis sets and returns a finite set.
  SetValue image(const History& shadow) const {
    if (mode_.exact) {
      auto img = base_->image(shadow, source_.filter);
      if (!img) throw StrategyError("base strategy has no closed-form image");
      return *img;
    }
    std::vector<Nat> seen;
    for (Nat i = 0; i < mode_.enumeration; ++i)
      if (auto r = detail::try_move(*base_, shadow, detail::mover_basis(source_, i))) seen.push_back(std::get<Nat>(*r));
    return UPSet::finite(seen);
  }

  SetValue move(const History& h) const override {
    auto rec = reconstruct(h.replies, h.seed);
    if (auto* k = std::get_if<Nat>(&rec))
      throw StrategyError("flag: no preimage among the first " + std::to_string(mode_.enumeration) +
                          " basis sets at round " + std::to_string(*k));
    SetValue img = image(std::get<History>(rec));
    if (mode_.exact) return img;
    // the finite enumerated image, padded with a tail so the move stays legal
    auto top = std::get<UPSet>(img).max_element();
    SetValue padded = set_or(img, UPSet::tail(top ? *top + 1 : 0));
    if (source_.filter.plane()) padded = as_grid(padded);
    return padded;
  }
  std::string name() const override { return "dual(" + base_->name() + ")"; }

  const GameConfig& source() const noexcept { return source_; }
  const DualMode& mode() const noexcept { return mode_; }
  const StrategyII& base() const noexcept { return *base_; }

 private:
  StrategyIIPtr base_;
  GameConfig source_;
  DualMode mode_;
};

/// II's side of the duality built from a strategy for I: answers Y with the
/// least element of Y ∩ $(n_0, …, n_{k-1}).
class DualII final : public StrategyII {
 public:
  DualII(StrategyIPtr base, GameConfig source) : base_(std::move(base)), source_(std::move(source)) {}

  History shadow(const History& h) const {
    History s;
    s.seed = h.seed;
    for (const auto& r : h.replies) {
      s.offers.push_back(base_->move(s));
      s.replies.push_back(r);
    }
    return s;
  }

  Reply move(const History& h, const SetValue& y) const override {
    SetValue x = base_->move(shadow(h));
    auto n = detail::least_member(x, y, {}, 0);
    if (!n) throw StrategyError("I's move and the offer have no common element within the search bound");
    return *n;
  }
  std::string name() const override { return "dual(" + base_->name() + ")"; }

  const GameConfig& source() const noexcept { return source_; }
  const StrategyI& base() const noexcept { return *base_; }

 private:
  StrategyIPtr base_;
  GameConfig source_;
};

/// Dualizes a strategy for II (directions IItoIPlus, IIPlusToI).
inline std::shared_ptr<DualI> dualize(StrategyIIPtr s, const GameConfig& source, DualDirection d,
                                      DualMode mode = DualMode::exact_image()) {
  bool from_plus = d == DualDirection::IIPlusToI;
  if (d != DualDirection::IItoIPlus && !from_plus) throw std::invalid_argument("direction needs a strategy for I");
  if (plus_family(source.mover) != from_plus) throw std::invalid_argument("source mover does not match direction");
  dual_config(source);
  return std::make_shared<DualI>(std::move(s), source, mode);
}

/// Dualizes a strategy for I (directions ItoIIPlus, IPlusToII).
inline std::shared_ptr<DualII> dualize(StrategyIPtr s, const GameConfig& source, DualDirection d) {
  bool from_plus = d == DualDirection::IPlusToII;
  if (d != DualDirection::ItoIIPlus && !from_plus) throw std::invalid_argument("direction needs a strategy for II");
  if (plus_family(source.mover) != from_plus) throw std::invalid_argument("source mover does not match direction");
  dual_config(source);
  return std::make_shared<DualII>(std::move(s), source);
}

namespace detail {

inline ShadowPlay replay_shadow(const GameConfig& source, const History& s, const Transcript& dual) {
  ShadowPlay out;
  Play play(source, dual.seed, std::max<Nat>(1, s.round()));
  for (Nat k = 0; k < s.round() && !play.finished(); ++k) {
    play.offer(s.offers[k]);
    if (play.finished()) break;
    play.reply(s.replies[k]);
  }
  out.shadow = play.transcript();
  auto a = dual.replies(), b = out.shadow.replies();
  out.move_identical = a == b;
  return out;
}

}  // namespace detail

/// The source-game play behind a play of a dualized strategy for I.
inline ShadowPlay shadow_play(const DualI& d, const Transcript& dual) {
  auto rec = d.reconstruct(dual.replies(), dual.seed);
  if (auto* k = std::get_if<Nat>(&rec)) {
    ShadowPlay out;
    out.flagged_round = *k;
    return out;
  }
  return detail::replay_shadow(d.source(), std::get<History>(rec), dual);
}

inline ShadowPlay shadow_play(const DualII& d, const Transcript& dual) {
  History h;
  h.seed = dual.seed;
  h.replies = dual.replies();
  return detail::replay_shadow(d.source(), d.shadow(h), dual);
}

/// First round whose reply has no preimage among the first m basis sets, for
/// a fixed dual play; monotone in m.
inline std::optional<Nat> approx_flag(const StrategyIIPtr& base, const GameConfig& source, const Transcript& dual, Nat m) {
  DualI d(base, source, DualMode::approx(m));
  auto rec = d.reconstruct(dual.replies(), dual.seed);
  if (auto* k = std::get_if<Nat>(&rec)) return *k;
  return std::nullopt;
}

// ---- singleton reduction ----------------------------------------------------

/// II's finite-set strategy played through its least elements. The base sees
/// its own block history, replayed from I's offers.
class SingletonReduced final : public StrategyII {
 public:
  explicit SingletonReduced(StrategyIIPtr base) : base_(std::move(base)) {}

  History base_history(const History& h) const {
    History b;
    b.seed = h.seed;
    for (const auto& x : h.offers) {
      if (b.offers.size() == h.replies.size()) break;
      b.replies.push_back(base_->move(b, x));
      b.offers.push_back(x);
    }
    return b;
  }

  Reply move(const History& h, const SetValue& x) const override {
    Reply r = base_->move(base_history(h), x);
    Block b = elements_of(r);
    if (b.empty()) throw StrategyError("base strategy played an empty set");
    return b.front();
  }
  std::string name() const override { return "reduce(" + base_->name() + ")"; }

 private:
  StrategyIIPtr base_;
};

/// II's element strategy with every move wrapped as a singleton.
class SingletonEmbedded final : public StrategyII {
 public:
  explicit SingletonEmbedded(StrategyIIPtr base) : base_(std::move(base)) {}

  Reply move(const History& h, const SetValue& x) const override {
    History b = h;
    for (auto& r : b.replies) r = elements_of(r).front();
    Reply r = base_->move(b, x);
    return Block{std::get<Nat>(r)};
  }
  std::string name() const override { return "embed(" + base_->name() + ")"; }

 private:
  StrategyIIPtr base_;
};

inline GameConfig with_move(GameConfig c, MoveKind k) {
  c.move = k;
  return c;
}

// ---- G1 translators -----------------------------------------------------------
//
// In the finite-set game 𝔊(Fr, [ω]^{<ω}, ℱ) I plays [t, ∞); a G1 integer m
// stands for the finite-set move [m+1, ∞), so "n beats m" and "n ∈ [m+1, ∞)"
// coincide. A finite-set threshold t is played in G1 as t-1 (0 for t = 0).

enum class G1Direction { IG1ToFinite, IFiniteToG1, IIFiniteToG1, IIG1ToFinite };

inline const char* to_string(G1Direction d) {
  switch (d) {
    case G1Direction::IG1ToFinite: return "I-g1-to-finite";
    case G1Direction::IFiniteToG1: return "I-finite-to-g1";
    case G1Direction::IIFiniteToG1: return "II-finite-to-g1";
    case G1Direction::IIG1ToFinite: return "II-g1-to-finite";
  }
  return "?";
}

inline G1Direction parse_g1_direction(std::string_view s) {
  for (auto d : {G1Direction::IG1ToFinite, G1Direction::IFiniteToG1, G1Direction::IIFiniteToG1,
                 G1Direction::IIG1ToFinite})
    if (s == to_string(d)) return d;
  throw SyntaxError("unknown g1 direction '" + std::string(s) + "'", 0);
}

inline GameConfig finite_counterpart(const FilterSpec& f) {
  return GameConfig::standard(Mover::Fr, MoveKind::FiniteBlock, Payoff::F, f);
}

/// Threshold of a cofinite move [t, ∞) ∖ finite: least t with [t, ∞) inside.
inline Nat threshold_of(const SetValue& x) {
  auto* u = std::get_if<UPSet>(&x);
  if (!u || !u->is_cofinite()) throw StrategyError("expected a cofinite move on ω, got " + format(x));
  return *u->threshold();
}

inline Nat g1_of_threshold(Nat t) { return t == 0 ? 0 : t - 1; }

namespace detail {

/// II's elements in play order, ascending within each block.
inline std::vector<Nat> sorted_unique(std::vector<Nat> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline std::vector<Nat> concatenated(const History& h) {
  std::vector<Nat> out;
  for (const auto& r : h.replies)
    for (Nat n : elements_of(r)) out.push_back(n);
  return out;
}

/// I's G1 answers to the given sequence of II moves, and the answer after the last.
inline G1History g1_feed(const G1StrategyI& s, const std::vector<Nat>& ns, std::uint64_t seed) {
  G1History g;
  g.seed = seed;
  for (Nat n : ns) {
    g.ms.push_back(s.move(g));
    g.ns.push_back(n);
  }
  return g;
}

}  // namespace detail

/// I: G1 -> finite. s̄(s_0, …, s_i) = [$(s_0 ∪ … ∪ s_i) + 1, ∞).
class G1ToFiniteI final : public StrategyI {
 public:
  explicit G1ToFiniteI(G1StrategyIPtr base) : base_(std::move(base)) {}
  SetValue move(const History& h) const override {
    G1History g = detail::g1_feed(*base_, detail::concatenated(h), h.seed);
    return UPSet::tail(base_->move(g) + 1);
  }
  std::string name() const override { return "g1-to-finite(" + base_->name() + ")"; }

 private:
  G1StrategyIPtr base_;
};

/// II's G1 answers regrouped into a finite-set play.
struct Regrouped {
  History finite;
  Block open;                  // answers since the last block closed
  std::vector<Nat> off_board;  // answers in closed blocks that fell below I's move
};

/// I: finite -> G1. II's G1 answers are regrouped into finite-set moves: a
/// block closes as soon as II beats I's current integer. A finite-set move
/// must lie inside I's move, so answers below the threshold stay off the board
/// and are reported separately. I answers with the integer of the finite-set
/// strategy's threshold on the closed blocks.
class FiniteToG1I final : public G1StrategyI {
 public:
  explicit FiniteToG1I(StrategyIPtr base) : base_(std::move(base)) {}

  Regrouped regroup(const G1History& g) const {
    Regrouped r;
    r.finite.seed = g.seed;
    SetValue x = base_->move(r.finite);
    Nat t = threshold_of(x);
    for (Nat n : g.ns) {
      r.open.push_back(n);
      if (n < t) continue;
      Block b;
      for (Nat e : detail::sorted_unique(r.open)) (e >= t ? b : r.off_board).push_back(e);
      r.finite.offers.push_back(std::move(x));
      r.finite.replies.push_back(std::move(b));
      r.open.clear();
      x = base_->move(r.finite);
      t = threshold_of(x);
    }
    return r;
  }

  Nat move(const G1History& g) const override {
    return g1_of_threshold(threshold_of(base_->move(regroup(g).finite)));
  }
  std::string name() const override { return "finite-to-g1(" + base_->name() + ")"; }

 private:
  StrategyIPtr base_;
};

/// II: finite -> G1. Whenever its queue is empty II asks the finite-set
/// strategy for a block against I's latest integer, then plays the block's
/// elements one per round, ignoring I meanwhile.
class FiniteToG1II final : public G1StrategyII {
 public:
  explicit FiniteToG1II(StrategyIIPtr base) : base_(std::move(base)) {}

  struct State {
    History finite;         // finite-set play simulated so far
    std::deque<Nat> queue;  // current block from the element just played on
  };

  State state(const G1History& g) const {
    State st;
    st.finite.seed = g.seed;
    for (std::size_t j = 0; j < g.ms.size(); ++j) {
      if (j > 0) st.queue.pop_front();
      if (st.queue.empty()) {
        SetValue offer = UPSet::tail(g.ms[j] + 1);
        Block b = elements_of(base_->move(st.finite, offer));
        if (b.empty()) throw StrategyError("base strategy played an empty set");
        st.finite.offers.push_back(std::move(offer));
        st.finite.replies.push_back(b);
        st.queue.assign(b.begin(), b.end());
      }
    }
    return st;
  }

  Nat move(const G1History& g) const override { return state(g).queue.front(); }
  std::string name() const override { return "finite-to-g1(" + base_->name() + ")"; }

 private:
  StrategyIIPtr base_;
};

/// II: G1 -> finite, driven by the bounded Claim search: for the simulated
/// history σ there are τ and n with II's answer to σ⌢τ⌢m above m for every
/// m > n. A prelude plays the Claim's τ for the empty history. At each stage
/// with threshold t, the simulation plays m̄ = max(t-1, n+1), whose answer is
/// at least t, then the next Claim's τ; the block is every answer of the stage
/// that lies in I's move. The prelude's answers and any clipped answers are
/// off the board.
class G1ToFiniteII final : public StrategyII {
 public:
  G1ToFiniteII(G1StrategyIIPtr base, Nat bound = 8) : base_(std::move(base)), bound_(bound) {}

  struct Simulation {
    G1History g1;
    std::vector<Block> blocks;
    std::vector<Nat> off_board;
  };

  Simulation simulate(const std::vector<Nat>& thresholds, std::uint64_t seed) const {
    Simulation sim;
    sim.g1.seed = seed;
    auto feed = [&](Nat m) {
      sim.g1.ms.push_back(m);
      Nat n = base_->move(sim.g1);
      sim.g1.ns.push_back(n);
      return n;
    };
    auto claim = [&] {
      WitnessReport r = check_claim(*base_, sim.g1.ms, bound_);
      if (!r.verified()) throw StrategyError("claim search: " + r.detail);
      return r.counterexample;
    };
    std::vector<Nat> c = claim();
    for (std::size_t i = 0; i + 1 < c.size(); ++i) sim.off_board.push_back(feed(c[i]));
    Nat n = c.back();
    for (Nat t : thresholds) {
      std::vector<Nat> answers{feed(std::max<Nat>(g1_of_threshold(t), n + 1))};
      c = claim();
      for (std::size_t i = 0; i + 1 < c.size(); ++i) answers.push_back(feed(c[i]));
      n = c.back();
      Block b;
      for (Nat e : detail::sorted_unique(answers)) (e >= t ? b : sim.off_board).push_back(e);
      sim.blocks.push_back(std::move(b));
    }
    return sim;
  }

  Reply move(const History& h, const SetValue& x) const override {
    std::vector<Nat> thresholds;
    for (std::size_t k = 0; k < h.replies.size(); ++k) thresholds.push_back(threshold_of(h.offers[k]));
    thresholds.push_back(threshold_of(x));
    Block b = simulate(thresholds, h.seed).blocks.back();
    if (b.empty()) throw StrategyError("no answer of the stage lies in I's move");
    return b;
  }
  std::string name() const override { return "g1-to-finite(" + base_->name() + ")"; }

 private:
  G1StrategyIIPtr base_;
  Nat bound_;
};

/// A translated play together with its counterpart in the other game.
/// `outcomes_equal` compares II's G1 integers with the finite-set outcome plus
/// the off-board elements.
struct CoSimulation {
  Transcript finite;  // 𝔊(Fr, [ω]^{<ω}, ℱ)
  Transcript g1;
  std::vector<Nat> off_board;
  bool outcomes_equal = false;
};

namespace detail {

inline void finish(CoSimulation& c) {
  std::vector<Nat> lhs = c.finite.outcome();
  lhs.insert(lhs.end(), c.off_board.begin(), c.off_board.end());
  c.outcomes_equal = sorted_unique(lhs) == sorted_unique(c.g1.integers_of(Player::II));
}

inline Transcript empty_transcript(const GameConfig& c, std::uint64_t seed) {
  Transcript t;
  t.config = c;
  t.seed = seed;
  if (c.variant == Variant::G1) t.g1 = G1Flags{};
  return t;
}

/// Replays a finite-set history through the rules.
inline Transcript replay_finite(const FilterSpec& f, const History& h) {
  GameConfig c = finite_counterpart(f);
  if (h.round() == 0) return empty_transcript(c, h.seed);
  Play play(c, h.seed, h.round());
  for (Nat k = 0; k < h.round() && !play.finished(); ++k) {
    play.offer(h.offers[k]);
    if (!play.finished()) play.reply(h.replies[k]);
  }
  return play.transcript();
}

/// G1 play where one side replays a fixed list of integers.
inline Transcript scripted_g1_ii(const FilterSpec& f, const G1StrategyI& s, const std::vector<Nat>& ns,
                                 std::uint64_t seed) {
  if (ns.empty()) return empty_transcript(GameConfig::g1(f), seed);
  FunctionG1II script("script", [ns](const G1History& h) { return ns[h.round()]; });
  return run_g1(GameConfig::g1(f), s, script, ns.size(), seed);
}

inline Transcript scripted_g1_i(const FilterSpec& f, const G1StrategyII& s, const std::vector<Nat>& ms,
                                std::uint64_t seed) {
  if (ms.empty()) return empty_transcript(GameConfig::g1(f), seed);
  FunctionG1I script("script", [ms](const G1History& h) { return ms[h.round()]; });
  return run_g1(GameConfig::g1(f), script, s, ms.size(), seed);
}

inline G1History history_of(const Transcript& t) {
  G1History g;
  g.seed = t.seed;
  g.ms = t.integers_of(Player::I);
  g.ns = t.integers_of(Player::II);
  return g;
}

}  // namespace detail

/// I: G1 -> finite. The finite-set play of the translated strategy; its
/// counterpart is the G1 play where II plays the same elements one by one.
inline CoSimulation cosim_i_g1_to_finite(const G1StrategyIPtr& s, const StrategyII& opponent, const FilterSpec& f,
                                         Nat rounds, std::uint64_t seed) {
  CoSimulation c;
  c.finite = run_bounded(finite_counterpart(f), G1ToFiniteI(s), opponent, rounds, seed);
  History h;
  h.replies = c.finite.replies();
  c.g1 = detail::scripted_g1_ii(f, *s, detail::concatenated(h), seed);
  detail::finish(c);
  return c;
}

/// I: finite -> G1. The G1 play of the translated strategy; its counterpart
/// is the regrouped finite-set play. Answers of a still-open block count as
/// off the board.
inline CoSimulation cosim_i_finite_to_g1(const StrategyIPtr& s, const G1StrategyII& opponent, const FilterSpec& f,
                                         Nat rounds, std::uint64_t seed) {
  CoSimulation c;
  FiniteToG1I t(s);
  c.g1 = run_g1(GameConfig::g1(f), t, opponent, rounds, seed);
  Regrouped r = t.regroup(detail::history_of(c.g1));
  c.finite = detail::replay_finite(f, r.finite);
  c.off_board = r.off_board;
  c.off_board.insert(c.off_board.end(), r.open.begin(), r.open.end());
  detail::finish(c);
  return c;
}

/// II: finite -> G1. The G1 play of the translated strategy, run past
/// `rounds` until the current block is fully played; its counterpart is the
/// simulated finite-set play.
inline CoSimulation cosim_ii_finite_to_g1(const StrategyIIPtr& s, const G1StrategyI& opponent, const FilterSpec& f,
                                          Nat rounds, std::uint64_t seed) {
  CoSimulation c;
  FiniteToG1II t(s);
  for (Nat total = rounds;;) {
    c.g1 = run_g1(GameConfig::g1(f), opponent, t, total, seed);
    if (c.g1.violation) break;
    auto st = t.state(detail::history_of(c.g1));
    if (st.queue.size() <= 1) {
      c.finite = detail::replay_finite(f, st.finite);
      break;
    }
    total += st.queue.size() - 1;
  }
  detail::finish(c);
  return c;
}

/// II: G1 -> finite. The finite-set play of the translated strategy; its
/// counterpart is the simulated G1 play, prelude and τ moves included.
inline CoSimulation cosim_ii_g1_to_finite(const G1StrategyIIPtr& s, const StrategyI& opponent, const FilterSpec& f,
                                          Nat rounds, std::uint64_t seed, Nat bound = 8) {
  CoSimulation c;
  G1ToFiniteII t(s, bound);
  c.finite = run_bounded(finite_counterpart(f), opponent, t, rounds, seed);
  std::vector<Nat> thresholds;
  for (const auto& o : c.finite.offers()) thresholds.push_back(threshold_of(o));
  thresholds.resize(c.finite.replies().size());
  auto sim = t.simulate(thresholds, seed);
  c.g1 = detail::scripted_g1_i(f, *s, sim.g1.ms, seed);
  c.off_board = sim.off_board;
  detail::finish(c);
  return c;
}

// ---- two boards -----------------------------------------------------------------

/// II plays two copies of 𝔊(Fr, [ω]^{<ω}, ℱ⁺) against the same strategy for
/// I, alternating boards. Each reply is [own threshold, end] with end the
/// larger of the other board's current threshold and one past the previous
/// end, so the replies tile [m_0, last end] without gaps.
struct TwoBoardResult {
  Transcript a, b;
  Nat start = 0;
  Nat covered_to = 0;       // every n in [start, covered_to] lies in A ∪ B
  std::optional<Nat> gap;   // first uncovered point of [start, covered_to], if any
};

inline TwoBoardResult two_board_pair(const StrategyI& s1, const FilterSpec& f, Nat rounds, std::uint64_t seed) {
  GameConfig c = GameConfig::standard(Mover::Fr, MoveKind::FiniteBlock, Payoff::Fplus, f);
  Play a(c, seed, rounds), b(c, seed, rounds);
  TwoBoardResult out;
  auto offer = [&](Play& p) {
    SetValue x = s1.move(p.history());
    Nat t = threshold_of(x);
    p.offer(std::move(x));
    return t;
  };
  Nat ta = offer(a), tb = offer(b);
  out.start = ta;
  std::optional<Nat> prev_end;
  auto reply = [&](Play& p, Nat own, Nat other) {
    Nat end = std::max({own, other, prev_end ? *prev_end + 1 : own});
    Block blk(end - own + 1);
    std::iota(blk.begin(), blk.end(), own);
    p.reply(std::move(blk));
    prev_end = end;
  };
  while (!a.finished() || !b.finished()) {
    if (!a.finished()) {
      reply(a, ta, tb);
      if (!a.finished()) ta = offer(a);
    }
    if (!b.finished()) {
      reply(b, tb, ta);
      if (!b.finished()) tb = offer(b);
    }
  }
  out.a = a.transcript();
  out.b = b.transcript();
  out.covered_to = prev_end.value_or(out.start);
  std::vector<Nat> u = out.a.outcome(), v = out.b.outcome();
  std::vector<Nat> all;
  std::set_union(u.begin(), u.end(), v.begin(), v.end(), std::back_inserter(all));
  Nat expect = out.start;
  for (Nat n : all) {
    if (n < expect) continue;
    if (n > expect) break;
    ++expect;
  }
  if (expect <= out.covered_to) out.gap = expect;
  return out;
}

}  // namespace fg
