#pragma once

#include <functional>
#include <string>
#include <vector>

#include "filtergames/strategies.hpp"

namespace fg {

/// A scripted play built against a strategy for I, with the construction's
/// intermediate data kept for audit. `ok` is false when a witness failed its
/// own check or a bound was hit; `error` then says which.
struct RefuterRun {
  std::string kind;
  bool ok = false;
  std::string error;
  std::vector<Nat> points;  // π_k (ladder split) or n_k (Ramsey construction)
  Transcript play;
  std::vector<std::string> audit;
};

namespace detail {

inline Nat cofinite_threshold(const SetValue& x, const std::string& who) {
  auto* u = std::get_if<UPSet>(&x);
  if (!u || !u->is_cofinite()) throw std::invalid_argument(who + " played a set that is not cofinite: " + format(x));
  return *u->threshold();
}

/// Visits I's move after every legal increasing sequence of II-moves drawn
/// from `allowed(position, value)`, values below `below`. Returns false once
/// more than `budget` sequences were visited.
inline bool for_each_legal_sequence(const StrategyI& s, Nat below,
                                    const std::function<bool(std::size_t, Nat)>& allowed,
                                    const std::function<void(const History&, const SetValue&)>& visit, Nat budget) {
  Nat spent = 0;
  History h;
  std::function<bool(Nat)> dfs = [&](Nat from) -> bool {
    SetValue x = s.move(h);
    if (!h.replies.empty()) {
      if (++spent > budget) return false;
      visit(h, x);
    }
    for (Nat n = from; n < below; ++n) {
      if (!contains(x, n) || !allowed(h.replies.size(), n)) continue;
      h.offers.push_back(x);
      h.replies.push_back(n);
      bool more = dfs(n + 1);
      h.offers.pop_back();
      h.replies.pop_back();
      if (!more) return false;
    }
    return true;
  };
  return dfs(0);
}

/// Plays `outcome` in order against s and records the transcript.
inline Transcript script_play(const GameConfig& c, const StrategyI& s, const std::vector<Nat>& outcome) {
  FunctionStrategyII script("script", [outcome](const History& h, const SetValue&) -> Reply {
    return outcome[h.replies.size()];
  });
  return run_bounded(c, s, script, std::max<std::size_t>(1, outcome.size()), 0);
}

}  // namespace detail

// ---- π-ladder split ---------------------------------------------------------

/// π_0 = threshold of $(∅); π_{k+1} is one past π_k or the largest threshold of
/// $(n_0, …, n_i) over legal increasing n_0 < … < n_i < π_k, whichever is larger.
/// Only legal sequences matter: every prefix of the final play is legal.
inline std::vector<Nat> extract_pi_ladder(const StrategyI& s, Nat length, Nat budget = 200'000) {
  std::vector<Nat> pi{detail::cofinite_threshold(s.move(History{}), s.name())};
  while (pi.size() < length) {
    Nat next = pi.back() + 1;
    bool done = detail::for_each_legal_sequence(
        s, pi.back(), [](std::size_t, Nat) { return true; },
        [&](const History&, const SetValue& x) { next = std::max(next, detail::cofinite_threshold(x, s.name())); },
        budget);
    if (!done)
      throw std::length_error("ladder extraction exceeded " + std::to_string(budget) + " sequences at point " +
                              std::to_string(pi.size()));
    pi.push_back(next);
  }
  return pi;
}

/// Builds a selector for the ladder from its materialized points.
using LadderSelector = std::function<std::vector<Nat>(const std::vector<Nat>& pi)>;

inline LadderSelector selector_from_set(SetValue x) {
  return [x = std::move(x)](const std::vector<Nat>& pi) {
    std::vector<Nat> out;
    for (Nat n = 0; n < pi.back(); ++n)
      if (contains(x, n)) out.push_back(n);
    return out;
  };
}

inline LadderSelector every_other_ladder_point() {
  return [](const std::vector<Nat>& pi) {
    std::vector<Nat> out;
    for (std::size_t k = 0; k + 1 < pi.size(); k += 2) out.push_back(pi[k]);
    return out;
  };
}

/// Splits a ladder selector X into X_0, X_1 by the parity of the interval each
/// point falls in, keeps the half that meets more of the first `samples` basis
/// sets (ties go to X_0), and plays it against $ in 𝔊(Fr, ω, ℱ⁺).
inline RefuterRun pi_ladder_split(const StrategyI& s, const FilterSpec& f, const LadderSelector& selector,
                                  Nat length = 10, Nat samples = 8, Nat budget = 200'000) {
  RefuterRun run{"piLadderSplit"};
  if (f.plane()) throw std::invalid_argument("ladder split works on filters over ω");
  try {
    run.points = extract_pi_ladder(s, length, budget);
  } catch (const std::exception& e) {
    run.error = e.what();
    return run;
  }
  const auto& pi = run.points;
  std::string ladder = "ladder:";
  for (Nat p : pi) ladder += " " + std::to_string(p);
  run.audit.push_back(ladder);

  std::vector<Nat> x = selector(pi);
  std::vector<Nat> halves[2];
  std::vector<Nat> hits(pi.size(), 0);
  for (Nat n : x) {
    if (n < pi.front() || n >= pi.back()) continue;
    std::size_t k = std::upper_bound(pi.begin(), pi.end(), n) - pi.begin() - 1;
    if (++hits[k] > 1) {
      run.error = "selector meets [" + std::to_string(pi[k]) + ", " + std::to_string(pi[k + 1]) + ") twice";
      return run;
    }
    halves[k % 2].push_back(n);
  }
  Nat score[2] = {0, 0};
  for (int i = 0; i < 2; ++i)
    for (Nat j = 0; j < samples; ++j) {
      SetValue b = basis(f, j);
      if (std::any_of(halves[i].begin(), halves[i].end(), [&](Nat n) { return contains(b, n); })) ++score[i];
    }
  int parity = score[1] > score[0] ? 1 : 0;
  run.audit.push_back("basis hits: X_0 " + std::to_string(score[0]) + ", X_1 " + std::to_string(score[1]) +
                      "; playing X_" + std::to_string(parity));
  if (halves[parity].empty()) {
    run.error = "chosen half of the selector is empty below the last ladder point";
    return run;
  }
  run.play = detail::script_play(GameConfig::standard(Mover::Fr, MoveKind::Element, Payoff::Fplus, f), s,
                                 halves[parity]);
  run.ok = run.play.legal();
  if (!run.ok) run.error = "scripted play is illegal: " + run.play.violation->reason;
  return run;
}

// ---- Ramsey construction ----------------------------------------------------

/// Output of the selectivity witness: indices k_0 < k_1 < … of intervals
/// [n_k, n_{k+1}) and y_0 < y_1 < … with y_j ∈ [n_{k_j + 1}, n_{k_{j+1}}).
struct SelectiveChoice {
  std::vector<Nat> ks;
  std::vector<Nat> ys;
};

/// Given Y and the constructed points n_0 < n_1 < …, chooses the skipped
/// intervals and the points of Y′. No Ramsey filter is computable, so this is
/// supplied by the caller.
using SelectivityWitness = std::function<SelectiveChoice(const SetValue& y, const std::vector<Nat>& n)>;

/// Greedy choice: y_j is the least element of Y at or above n_{k_j + 1}, and
/// k_{j+1} is the first index past y_j, at least k_j + 2 so an interval is
/// always skipped.
inline SelectiveChoice alternate_intervals(const SetValue& y, const std::vector<Nat>& n) {
  SelectiveChoice c;
  Nat k = 0;
  while (k + 1 < n.size()) {
    auto e = next_element(y, n[k + 1]);
    if (!e) break;
    Nat next = k + 2;
    while (next < n.size() && n[next] <= *e) ++next;
    if (next >= n.size()) break;
    c.ks.push_back(k);
    c.ys.push_back(*e);
    k = next;
  }
  if (!c.ys.empty()) c.ks.push_back(k);
  return c;
}

/// Builds X_{k+1} = ∩{$(m_0, …, m_i) : i ≤ k, m_j ∈ [n_j, n_k] ∩ Y increasing and
/// legal} and n_{k+1} with Y ∖ n_{k+1} ⊆ X_{k+1}, then plays the witness's Y′
/// against $ in 𝔊(ℱ, ω, ℱ), checking y_j ∈ X_{k_j+1} ⊆ $(y_0, …, y_{j-1}).
/// `y` is the pseudo-intersection witness: Y ⊆* $(s) for every s.
inline RefuterRun ramsey_construct(const StrategyI& s, const FilterSpec& f, const SetValue& y,
                                   const SelectivityWitness& witness, Nat stages = 8, Nat budget = 200'000) {
  RefuterRun run{"ramseyConstruct"};
  if (f.plane()) throw std::invalid_argument("Ramsey construction works on filters over ω");
  std::vector<SetValue> xs{s.move(History{})};
  auto n0 = detail::subset_from(y, xs[0]);
  if (!n0) {
    run.error = "Y is not almost contained in $(∅)";
    return run;
  }
  run.points.push_back(*n0);
  for (Nat k = 0; k + 1 < stages; ++k) {
    const auto& n = run.points;
    SetValue x = set_and(y, xs[0]);
    bool done = detail::for_each_legal_sequence(
        s, n[k] + 1, [&](std::size_t j, Nat m) { return j <= k && m >= n[j] && contains(y, m); },
        [&](const History&, const SetValue& move) { x = set_and(x, move); }, budget);
    if (!done) {
      run.error = "stage " + std::to_string(k + 1) + " exceeded " + std::to_string(budget) + " sequences";
      return run;
    }
    auto next = detail::subset_from(y, x);
    if (!next) {
      run.error = "Y is not almost contained in X_" + std::to_string(k + 1);
      return run;
    }
    xs.push_back(x);
    run.points.push_back(std::max(*next, n[k] + 1));
    run.audit.push_back("n_" + std::to_string(k + 1) + " = " + std::to_string(run.points.back()) +
                        ": Y minus n_" + std::to_string(k + 1) + " inside X_" + std::to_string(k + 1));
  }

  SelectiveChoice c = witness(y, run.points);
  const auto& n = run.points;
  if (c.ys.empty() || c.ks.size() < c.ys.size() + 1) {
    run.error = "selectivity witness returned too few points";
    return run;
  }
  for (std::size_t j = 0; j < c.ys.size(); ++j) {
    Nat lo = c.ks[j] + 1, hi = c.ks[j + 1];
    if (hi >= n.size() || lo >= hi || !contains(y, c.ys[j]) || c.ys[j] < n[lo] || c.ys[j] >= n[hi] ||
        (j && c.ys[j] <= c.ys[j - 1])) {
      run.error = "selectivity witness point y_" + std::to_string(j) + " is misplaced";
      return run;
    }
  }
  run.play = detail::script_play(GameConfig::standard(Mover::F, MoveKind::Element, Payoff::F, f), s, c.ys);
  History h;
  for (std::size_t j = 0; j < c.ys.size(); ++j) {
    const SetValue& xj = xs[c.ks[j] + 1];
    SetValue move = s.move(h);
    if (!contains(xj, c.ys[j]) || !subset(xj, move)) {
      run.error = "containment fails at y_" + std::to_string(j);
      return run;
    }
    run.audit.push_back("y_" + std::to_string(j) + " = " + std::to_string(c.ys[j]) + " in X_" +
                        std::to_string(c.ks[j] + 1) + ", inside I's move");
    h.offers.push_back(move);
    h.replies.push_back(c.ys[j]);
  }
  run.ok = run.play.legal();
  if (!run.ok) run.error = "scripted play is illegal: " + run.play.violation->reason;
  return run;
}

}  // namespace fg
