#pragma once

#include <functional>
#include <random>
#include <set>

#include "filtergames/family.hpp"
#include "filtergames/sequence.hpp"

namespace fg {

namespace detail {

inline std::set<Nat> used_elements(const History& h) {
  auto p = h.played();
  return {p.begin(), p.end()};
}

/// Least n >= from with n ∈ target ∩ offer and n ∉ used, scanning at most
/// `scan` candidates of `target`.
inline std::optional<Nat> least_member(const SetValue& target, const SetValue& offer, const std::set<Nat>& used,
                                       Nat from, Nat scan = kGridScan) {
  Nat cur = from;
  for (Nat tries = 0; tries < scan; ++tries) {
    auto e = next_element(target, cur);
    if (!e) return std::nullopt;
    if (contains(offer, *e) && !used.contains(*e)) return *e;
    cur = *e + 1;
  }
  return std::nullopt;
}

inline SetValue remove_finite(const SetValue& s, const std::set<Nat>& drop) {
  if (drop.empty()) return s;
  return set_diff(s, UPSet::finite(std::vector<Nat>(drop.begin(), drop.end())));
}

/// Least n with y ∖ n ⊆ x, when y ∖ x is finite.
inline std::optional<Nat> subset_from(const SetValue& y, const SetValue& x) {
  SetValue d = set_diff(y, x);
  if (card_class(d) != CardClass::Finite) return std::nullopt;
  Nat top = 0;
  for (auto e = next_element(d, 0); e; e = next_element(d, *e + 1)) top = *e + 1;
  return top;
}

/// [a, b) ⊆ s, deciding UPSets exactly and scanning GridSets.
inline bool interval_inside(const SetValue& s, Nat a, Nat b) {
  Nat stop = b;
  if (auto* u = std::get_if<UPSet>(&s)) stop = std::min<Nat>(b, std::max<Nat>(a, u->prefix_length()) + u->period_length());
  else if (b - a > kGridScan) return false;
  for (Nat n = a; n < stop; ++n)
    if (!contains(s, n)) return false;
  return true;
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  x ^= x >> 31;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 29;
  return x;
}

}  // namespace detail

/// I's move: the union of all blocks II has not touched yet.
class PartitionBlockStrategy final : public StrategyI {
 public:
  explicit PartitionBlockStrategy(Partition blocks) : blocks_(std::move(blocks)) {}

  SetValue move(const History& h) const override {
    std::set<Nat> touched;
    for (Nat n : h.played()) touched.insert(blocks_.block_of(n));
    if (touched.empty()) return UPSet::all();
    const Nat last = *touched.rbegin();
    Bits prefix(blocks_.boundary(last + 1), true);
    for (Nat k : touched)
      for (Nat n = blocks_.boundary(k); n < blocks_.boundary(k + 1); ++n) prefix[n] = false;
    return UPSet(std::move(prefix), Bits{true});
  }
  std::string name() const override { return "partition:b=" + blocks_.rule().text(); }

 private:
  Partition blocks_;
};

/// I's move at stage k: ⋂_{i<k} basis(f, i), minus [0, k) when `subtract`.
class ChainIntersectStrategy final : public StrategyI {
 public:
  ChainIntersectStrategy(FilterSpec f, bool subtract) : f_(std::move(f)), subtract_(subtract) {}

  SetValue move(const History& h) const override {
    const Nat k = h.round();
    SetValue x = f_.plane() ? SetValue(GridSet::full()) : SetValue(UPSet::all());
    // these bases decrease, so the meet is the last member
    const bool decreasing = f_.kind() == FilterKind::Frechet || f_.kind() == FilterKind::DyadicChain;
    if (decreasing && k > 0) x = basis(f_, k - 1);
    else
      for (Nat i = 0; i < k; ++i) x = set_and(x, basis(f_, i));
    if (subtract_ && k > 0) x = set_diff(x, UPSet::interval(0, k));
    return x;
  }
  std::string name() const override { return subtract_ ? "chain:subtract" : "chain"; }

 private:
  FilterSpec f_;
  bool subtract_;
};

/// II plays the least element of target ∩ X_k it has not played before (as a
/// singleton in finite-set games). With target = ω this is plain least-element
/// play; with an infinite x it is the fixed-set strategy.
class LeastInTargetStrategy final : public StrategyII {
 public:
  LeastInTargetStrategy(SetValue target, MoveKind kind, std::string name = {})
      : target_(std::move(target)), kind_(kind), name_(std::move(name)) {
    if (card_class(target_) == CardClass::Finite) throw std::invalid_argument("target set must be infinite");
    if (name_.empty()) name_ = "fixed:" + fg::format(target_);
  }

  Reply move(const History& h, const SetValue& offer) const override {
    auto n = detail::least_member(target_, offer, detail::used_elements(h), 0);
    if (!n) throw StrategyError("no unused element of " + fg::format(target_) + " in I's move");
    if (kind_ == MoveKind::FiniteBlock) return Block{*n};
    return *n;
  }
  std::string name() const override { return name_; }

  // Every unused element e of the target is the answer to [e, ∞) ∈ ℱ, and no
  // other answer is possible.
  std::optional<SetValue> image(const History& h, const FilterSpec&) const override {
    return detail::remove_finite(target_, detail::used_elements(h));
  }
  std::optional<SetValue> preimage(const History& h, const FilterSpec&, Nat n) const override {
    if (!contains(target_, n) || detail::used_elements(h).contains(n)) return std::nullopt;
    return UPSet::tail(n);
  }

  const SetValue& target() const noexcept { return target_; }

 private:
  SetValue target_;
  MoveKind kind_;
  std::string name_;
};

inline StrategyIIPtr fixed_set_strategy(const UPSet& x, MoveKind kind) {
  return std::make_shared<LeastInTargetStrategy>(x, kind);
}
inline StrategyIIPtr least_strategy(MoveKind kind, bool plane = false) {
  SetValue all = plane ? SetValue(GridSet::full()) : SetValue(UPSet::all());
  return std::make_shared<LeastInTargetStrategy>(all, kind, "least");
}

/// II answers at stage k with the least unused element of X_σ(k) ∩ Y_k ∖ k.
class SigmaDiagStrategy final : public StrategyII {
 public:
  SigmaDiagStrategy(SetFamily family, MoveKind kind) : family_(std::move(family)), kind_(kind) {}

  Reply move(const History& h, const SetValue& offer) const override {
    const Nat k = h.round();
    auto n = detail::least_member(family_(sigma(k)), offer, detail::used_elements(h), k);
    if (!n) throw StrategyError("X_sigma(k) ∩ Y_k \\ k has no unused element within the search bound");
    if (kind_ == MoveKind::FiniteBlock) return Block{*n};
    return *n;
  }
  std::string name() const override { return "sigma:family=" + family_.name; }

  std::optional<SetValue> image(const History& h, const FilterSpec&) const override {
    const Nat k = h.round();
    std::set<Nat> drop = detail::used_elements(h);
    for (Nat i = 0; i < k; ++i) drop.insert(i);
    return detail::remove_finite(family_(sigma(k)), drop);
  }
  std::optional<SetValue> preimage(const History& h, const FilterSpec& f, Nat n) const override {
    auto img = image(h, f);
    if (!contains(*img, n)) return std::nullopt;
    return UPSet::tail(n);
  }

 private:
  SetFamily family_;
  MoveKind kind_;
};

/// Finite-set version over universal families: at stage k, the first member
/// x_{σ(k), j} of X_σ(k) lying inside Y_k ∖ k.
class SigmaBlockStrategy final : public StrategyII {
 public:
  SigmaBlockStrategy(BlockFamily family, Nat scan = 4096) : family_(std::move(family)), scan_(scan) {}

  Reply move(const History& h, const SetValue& offer) const override {
    const Nat k = h.round(), n = sigma(k);
    for (Nat j = 0; j < scan_; ++j) {
      Block x = family_.at(n, j);
      if (!x.empty() && std::all_of(x.begin(), x.end(), [&](Nat e) { return e >= k && contains(offer, e); }))
        return x;
    }
    throw StrategyError("no member of X_sigma(k) inside Y_k \\ k within the search bound");
  }
  std::string name() const override { return "sigma-block:family=" + family_.name; }

 private:
  BlockFamily family_;
  Nat scan_;
};

/// II plays the full interval [π_j, π_{j+1}) for the least j > max(ℓ, previous j)
/// that fits inside I's move at stage ℓ.
class IntervalStrategy final : public StrategyII {
 public:
  explicit IntervalStrategy(Ladder pi, Nat search = 64) : pi_(std::move(pi)), search_(search) {}

  Reply move(const History& h, const SetValue& offer) const override {
    const Nat l = h.round();
    Nat j = l + 1;
    if (!h.replies.empty()) {
      Nat last = pi_.index_at_or_above(std::get<Block>(h.replies.back()).front());
      j = std::max(j, last + 1);
    }
    for (Nat stop = j + search_; j < stop; ++j) {
      Nat a, b;
      try {
        a = pi_[j];
        b = pi_[j + 1];
      } catch (const std::exception&) {
        break;
      }
      if (detail::interval_inside(offer, a, b)) {
        Block out(b - a);
        std::iota(out.begin(), out.end(), a);
        return out;
      }
    }
    throw StrategyError("no ladder interval inside I's move within the search bound");
  }
  std::string name() const override { return "interval:pi=" + pi_.text(); }

  const Ladder& ladder() const noexcept { return pi_; }

 private:
  Ladder pi_;
  Nat search_;
};

/// Seeded random play for either side. Each move depends only on the
/// strategy seed, the play seed and the history.
class RandomStrategyI final : public StrategyI {
 public:
  RandomStrategyI(std::uint64_t seed, Mover mover, FilterSpec f) : seed_(seed), mover_(mover), f_(std::move(f)) {}

  SetValue move(const History& h) const override {
    std::mt19937_64 rng(detail::mix(detail::mix(seed_, h.seed), h.round()));
    const Nat k = h.round();
    std::set<Nat> holes;
    for (int i = std::uniform_int_distribution<int>(0, 3)(rng); i > 0; --i)
      holes.insert(std::uniform_int_distribution<Nat>(0, 4 * k + 8)(rng));
    SetValue base;
    switch (mover_) {
      case Mover::Fr:
        base = UPSet::tail(std::uniform_int_distribution<Nat>(0, 2 * k + 4)(rng));
        if (f_.plane()) base = as_grid(base);
        break;
      case Mover::AllInfinite: {
        Nat m = std::uniform_int_distribution<Nat>(1, 4)(rng);
        base = UPSet::residue(m, std::uniform_int_distribution<Nat>(0, m - 1)(rng)) & UPSet::tail(k);
        break;
      }
      case Mover::F:
      case Mover::Fplus:
        base = basis(f_, std::uniform_int_distribution<Nat>(0, std::min<Nat>(k, 6))(rng));
        break;
    }
    return detail::remove_finite(base, holes);
  }
  std::string name() const override { return "random:seed=" + std::to_string(seed_); }

 private:
  std::uint64_t seed_;
  Mover mover_;
  FilterSpec f_;
};

class RandomStrategyII final : public StrategyII {
 public:
  RandomStrategyII(std::uint64_t seed, MoveKind kind) : seed_(seed), kind_(kind) {}

  Reply move(const History& h, const SetValue& offer) const override {
    std::mt19937_64 rng(detail::mix(detail::mix(seed_, h.seed), h.round() + 0x51ed));
    Nat from = std::uniform_int_distribution<Nat>(0, 3 * h.round() + 6)(rng);
    std::size_t count = kind_ == MoveKind::Element ? 1 : std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    Block out;
    Nat cur = from;
    while (out.size() < count) {
      auto e = next_element(offer, cur);
      if (!e) {
        if (!out.empty()) break;
        if (from == 0) throw StrategyError("I's move is empty");
        cur = from = 0;
        continue;
      }
      out.push_back(*e);
      cur = *e + 1 + std::uniform_int_distribution<Nat>(0, 2)(rng);
    }
    if (kind_ == MoveKind::Element) return out.front();
    return out;
  }
  std::string name() const override { return "random:seed=" + std::to_string(seed_); }

 private:
  std::uint64_t seed_;
  MoveKind kind_;
};

/// Strategies given by plain functions, for scripted opponents.
class FunctionStrategyI final : public StrategyI {
 public:
  FunctionStrategyI(std::string name, std::function<SetValue(const History&)> fn)
      : name_(std::move(name)), fn_(std::move(fn)) {}
  SetValue move(const History& h) const override { return fn_(h); }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  std::function<SetValue(const History&)> fn_;
};

class FunctionStrategyII final : public StrategyII {
 public:
  FunctionStrategyII(std::string name, std::function<Reply(const History&, const SetValue&)> fn)
      : name_(std::move(name)), fn_(std::move(fn)) {}
  Reply move(const History& h, const SetValue& x) const override { return fn_(h, x); }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  std::function<Reply(const History&, const SetValue&)> fn_;
};

/// I plays [t, ∞) where t = threshold(history).
inline StrategyIPtr threshold_strategy(std::string name, std::function<Nat(const History&)> threshold) {
  return std::make_shared<FunctionStrategyI>(
      std::move(name), [threshold = std::move(threshold)](const History& h) -> SetValue {
        return UPSet::tail(threshold(h));
      });
}

class FunctionG1I final : public G1StrategyI {
 public:
  FunctionG1I(std::string name, std::function<Nat(const G1History&)> fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  Nat move(const G1History& h) const override { return fn_(h); }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  std::function<Nat(const G1History&)> fn_;
};

class FunctionG1II final : public G1StrategyII {
 public:
  FunctionG1II(std::string name, std::function<Nat(const G1History&)> fn)
      : name_(std::move(name)), fn_(std::move(fn)) {}
  Nat move(const G1History& h) const override { return fn_(h); }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  std::function<Nat(const G1History&)> fn_;
};

}  // namespace fg
