#pragma once

#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "filtergames/strategies.hpp"
#include "filtergames/witnesses.hpp"

namespace fg {

// Extractors read a combinatorial witness off a strategy by enumerating its
// histories, then hand the result to the matching bounded check.

namespace detail {

/// Visits II's answer to every threshold sequence m_0, …, m_i (I playing
/// [m_j, ∞)) with i < length and m_j below `values_below(j)`. A branch ends
/// where II cannot answer. Returns false once more than `budget` nodes were
/// visited.
inline bool for_each_threshold_sequence(const StrategyII& s, Nat length, const std::function<Nat(Nat)>& values_below,
                                        const std::function<void(const History&, const Reply&)>& visit, Nat budget) {
  Nat spent = 0;
  History h;
  std::function<bool()> dfs = [&]() -> bool {
    if (h.replies.size() >= length) return true;
    for (Nat m = 0; m < values_below(h.replies.size()); ++m) {
      if (++spent > budget) return false;
      SetValue x = UPSet::tail(m);
      Reply r;
      try {
        r = s.move(h, x);
      } catch (const StrategyError&) {
        continue;
      }
      visit(h, r);
      h.offers.push_back(std::move(x));
      h.replies.push_back(std::move(r));
      bool more = dfs();
      h.offers.pop_back();
      h.replies.pop_back();
      if (!more) return false;
    }
    return true;
  };
  return dfs();
}

}  // namespace detail

// ---- diagonalizing family ---------------------------------------------------

/// The sets X_s = {$(s⌢n) : n ∈ ω} for II's strategy $, one per threshold
/// history s, in the order the histories were enumerated.
struct DiagExtraction {
  std::vector<std::vector<Nat>> histories;
  SetFamily family;
  WitnessReport audit;
};

/// Enumerates histories s of length < depth with thresholds below `width` and
/// takes X_s from the strategy's closed-form image. The family is then checked
/// for plain diagonalization against the first `samples` basis sets.
inline DiagExtraction extract_diag_family(const StrategyII& s, const FilterSpec& f, Nat depth, Nat width,
                                          Nat samples = 10) {
  DiagExtraction out;
  std::vector<SetValue> members;
  auto take = [&](const History& h) {
    auto img = s.image(h, f);
    if (!img) throw StrategyError(s.name() + " has no closed-form image to extract a family from");
    std::vector<Nat> thresholds;
    for (const auto& x : h.offers) thresholds.push_back(*std::get<UPSet>(x).threshold());
    out.histories.push_back(std::move(thresholds));
    members.push_back(*img);
  };
  take(History{});
  std::function<void(History&)> walk = [&](History& h) {
    if (h.replies.size() + 1 >= depth) return;
    for (Nat m = 0; m < width; ++m) {
      SetValue x = UPSet::tail(m);
      Reply r;
      try {
        r = s.move(h, x);
      } catch (const StrategyError&) {
        continue;
      }
      h.offers.push_back(x);
      h.replies.push_back(r);
      take(h);
      walk(h);
      h.offers.pop_back();
      h.replies.pop_back();
    }
  };
  History root;
  walk(root);
  out.family = SetFamily::list("extracted:" + s.name(), members);
  out.audit = check_diag(out.family, f, DiagMode::Plain, samples, members.size());
  return out;
}

// ---- ladder from a strategy for II ------------------------------------------

struct LadderExtraction {
  std::vector<Nat> points;
  Nat visited = 0;
  WitnessReport audit;
};

/// π_0 = 1 and π_{k+1} = max{$(m_0, …, m_i) : i ≤ k, m_j ≤ π_k} + 1, where
/// $(m_0, …, m_i) is the largest element II plays against the thresholds
/// m_0, …, m_i (kept strictly increasing). Every threshold sequence is
/// evaluated, so the cost grows like π_k^(k+1); `budget` caps the nodes visited.
/// The ladder is audited with the interval check against the first
/// `basis_count` basis sets of f.
inline LadderExtraction extract_ladder(const StrategyII& s, const FilterSpec& f, Nat length, Nat basis_count,
                                       Nat budget = 2'000'000) {
  if (length < 2) throw std::invalid_argument("ladder extraction needs at least two points");
  LadderExtraction out;
  out.points = {1};
  while (out.points.size() < length) {
    const Nat k = out.points.size() - 1, bound = out.points.back();
    Nat top = bound;
    Nat spent = 0;
    bool done = detail::for_each_threshold_sequence(
        s, k + 1, [&](Nat) { return bound + 1; },
        [&](const History&, const Reply& r) {
          ++spent;
          Block e = elements_of(r);
          if (!e.empty()) top = std::max(top, e.back());
        },
        budget);
    out.visited += spent;
    if (!done)
      throw std::length_error("ladder extraction exceeded " + std::to_string(budget) + " histories at point " +
                              std::to_string(out.points.size()));
    out.points.push_back(top + 1);
  }
  out.audit = check_talagrand(Ladder(out.points), f, basis_count, out.points.size() - 1);
  return out;
}

// ---- generators -------------------------------------------------------------

struct GeneratorExtraction {
  std::vector<UPSet> generators;
  FilterSpec filter;
};

/// Collects I's moves $(s) over histories s of length < depth in which II
/// plays one of the first `width` unused elements of each move. The moves
/// generate a filter with the cofinite sets.
inline GeneratorExtraction extract_generators(const StrategyI& s, Nat depth, Nat width) {
  std::vector<UPSet> gens;
  std::set<std::string> seen;
  History h;
  std::function<void()> walk = [&] {
    SetValue x = s.move(h);
    auto* u = std::get_if<UPSet>(&x);
    if (!u) throw std::invalid_argument(s.name() + " plays sets over ω × ω; generators need sets over ω");
    if (seen.insert(format(*u)).second) gens.push_back(*u);
    if (h.replies.size() + 1 >= depth) return;
    std::set<Nat> used;
    for (Nat n : h.played()) used.insert(n);
    Nat tried = 0;
    for (auto e = next_element(x, 0); e && tried < width; e = next_element(x, *e + 1)) {
      if (used.contains(*e)) continue;
      ++tried;
      h.offers.push_back(x);
      h.replies.push_back(*e);
      walk();
      h.offers.pop_back();
      h.replies.pop_back();
    }
  };
  walk();
  return {gens, FilterSpec::finite_gen(gens)};
}

/// Seeded ultimately periodic sets with prefix length <= 8 and period drawn
/// from the divisors of 128 and a few odd multiples.
inline std::vector<UPSet> sample_descriptors(Nat count, std::uint64_t seed) {
  static constexpr Nat periods[] = {1, 2, 3, 4, 6, 8, 12, 16, 32, 64, 128};
  std::mt19937_64 rng(seed);
  std::vector<UPSet> out;
  for (Nat i = 0; i < count; ++i) {
    std::vector<bool> pre(rng() % 9), per(periods[rng() % std::size(periods)]);
    for (std::size_t j = 0; j < pre.size(); ++j) pre[j] = rng() & 1;
    // sparse periods make the interesting membership cases (a single residue class)
    bool sparse = rng() & 1;
    for (std::size_t j = 0; j < per.size(); ++j) per[j] = sparse ? (j == 0) : (rng() & 1);
    out.emplace_back(std::move(pre), std::move(per));
  }
  return out;
}

/// Compares classifications of the sample sets under two filters; Refuted
/// names the first sample they disagree on.
inline WitnessReport compare_filters(const FilterSpec& a, const FilterSpec& b, const std::vector<UPSet>& samples,
                                     Depth depth = Depth{8}) {
  WitnessReport r{"filter-agreement", WitnessVerdict::Verified, depth.d, samples.size()};
  for (Nat i = 0; i < samples.size(); ++i) {
    Region x = classify(a, samples[i], depth), y = classify(b, samples[i], depth);
    if (x != y) {
      r.verdict = WitnessVerdict::Refuted;
      r.counterexample = {i};
      r.detail = format(samples[i]) + ": " + to_string(x) + " under " + a.text() + ", " + to_string(y) + " under " +
                 b.text();
      return r;
    }
  }
  return r;
}

}  // namespace fg
