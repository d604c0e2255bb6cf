#pragma once

#include <string>
#include <variant>

#include "filtergames/witnesses.hpp"

namespace fg {

enum class VerdictTag { WinI, WinII, Undetermined };

inline const char* to_string(VerdictTag t) {
  switch (t) {
    case VerdictTag::WinI: return "WinI";
    case VerdictTag::WinII: return "WinII";
    case VerdictTag::Undetermined: return "Undetermined";
  }
  return "?";
}

/// Verdict on a bounded play. A win is only claimed when `certificate` names
/// a prefix invariant that forces the limit outcome and that invariant held on
/// every recorded round; otherwise the verdict is Undetermined(rounds).
struct Verdict {
  VerdictTag tag = VerdictTag::Undetermined;
  Nat rounds = 0;
  std::string certificate;
  std::string detail;

  std::string text() const {
    if (tag == VerdictTag::Undetermined) return "Undetermined(" + std::to_string(rounds) + ")";
    return to_string(tag);
  }
};

class IncompatibleCertifier : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace cert {

/// Outcome meets every block at most once. Premise (asserted by the caller):
/// no positive set is a selector for the partition, so the outcome is not
/// positive and I wins 𝔊(Fr, ω, ℱ⁺) (or 𝔊(Fr, ω, ℱ)).
struct PartitionSelector {
  Partition blocks;
};

/// Every reply is a full ladder interval [π_k, π_{k+1}) with k > round, and
/// the sampled basis meets all late ladder intervals; then the outcome
/// contains infinitely many intervals and meets every set in ℱ.
struct IntervalLadder {
  Ladder pi;
  Nat basis_count = 10;
  Nat interval_count = 12;
};

/// Every reply n_k lies in X_σ(k) ∩ Y_k and n_k >= k, and the family
/// diagonalizes the sampled basis; the outcome meets each X_n infinitely
/// often and is therefore positive.
struct SigmaDiag {
  SetFamily family;
  Nat samples = 10;
  Nat bound = 16;
};

/// Every reply lies inside x. For payoff ℱ^c this wins for II when x ∉ ℱ;
/// for payoff ℱ* when x ∈ ℱ*.
struct FixedSet {
  UPSet x;
};

/// n_k ∈ basis(i) for all i < k and n_k >= k: the outcome is an infinite
/// pseudo-intersection of a generating basis, so it is positive and not in ℱ*.
struct ChainPseudoIntersection {};

/// Only the forfeit rule.
struct ForfeitOnly {};

}  // namespace cert

using Certifier = std::variant<cert::PartitionSelector, cert::IntervalLadder, cert::SigmaDiag, cert::FixedSet,
                               cert::ChainPseudoIntersection, cert::ForfeitOnly>;

inline std::string certifier_name(const Certifier& c) {
  struct {
    std::string operator()(const cert::PartitionSelector&) const { return "partition"; }
    std::string operator()(const cert::IntervalLadder&) const { return "interval"; }
    std::string operator()(const cert::SigmaDiag&) const { return "sigma"; }
    std::string operator()(const cert::FixedSet&) const { return "fixed"; }
    std::string operator()(const cert::ChainPseudoIntersection&) const { return "chain"; }
    std::string operator()(const cert::ForfeitOnly&) const { return "forfeit"; }
  } v;
  return std::visit(v, c);
}

namespace detail {

inline Verdict undetermined(const Transcript& t, std::string cert, std::string why) {
  return Verdict{VerdictTag::Undetermined, t.completed_rounds(), std::move(cert), std::move(why)};
}

inline Verdict win(VerdictTag tag, const Transcript& t, std::string cert, std::string why) {
  return Verdict{tag, t.completed_rounds(), std::move(cert), std::move(why)};
}

inline void require(bool ok, const std::string& cert, const std::string& what) {
  if (!ok) throw IncompatibleCertifier(cert + " certificate needs " + what);
}

}  // namespace detail

inline Verdict certify(const Transcript& t, const Certifier& c) {
  const std::string name = certifier_name(c);
  const GameConfig& cfg = t.config;

  if (t.violation) {
    VerdictTag tag = t.violation->violator == Player::I ? VerdictTag::WinII : VerdictTag::WinI;
    return detail::win(tag, t, "forfeit", std::string(to_string(t.violation->violator)) + " forfeits at round " +
                                              std::to_string(t.violation->round) + ": " + t.violation->reason);
  }
  if (t.completed_rounds() == 0) return detail::undetermined(t, name, "no moves");

  const auto offers = t.offers();
  const auto replies = t.replies();

  if (std::holds_alternative<cert::ForfeitOnly>(c)) return detail::undetermined(t, name, "no violation");

  if (auto* p = std::get_if<cert::PartitionSelector>(&c)) {
    detail::require(cfg.variant == Variant::Standard && cfg.mover == Mover::Fr && cfg.move == MoveKind::Element &&
                        (cfg.payoff == Payoff::Fplus || cfg.payoff == Payoff::F),
                    name, "game fr,elem,fplus or fr,elem,f");
    std::map<Nat, Nat> hits;
    for (Nat n : t.outcome())
      if (++hits[p->blocks.block_of(n)] > 1)
        return detail::undetermined(t, name, "outcome meets block " + std::to_string(p->blocks.block_of(n)) + " twice");
    return detail::win(VerdictTag::WinI, t, name, "outcome is a selector for the partition");
  }

  if (auto* il = std::get_if<cert::IntervalLadder>(&c)) {
    detail::require(cfg.variant == Variant::Standard && cfg.move == MoveKind::FiniteBlock && cfg.payoff == Payoff::Fplus,
                    name, "game *,block,fplus");
    for (std::size_t k = 0; k < replies.size(); ++k) {
      Block b = elements_of(replies[k]);
      Nat j = il->pi.index_at_or_above(b.front());
      bool full = il->pi[j] == b.front() && j > k && b.back() + 1 == il->pi[j + 1] &&
                  b.size() == il->pi[j + 1] - il->pi[j];
      if (!full) return detail::undetermined(t, name, "round " + std::to_string(k) + " is not a late ladder interval");
    }
    WitnessReport tal = check_talagrand(il->pi, cfg.filter, il->basis_count, il->interval_count);
    if (!tal.verified()) return detail::undetermined(t, name, "ladder check: " + tal.detail);
    return detail::win(VerdictTag::WinII, t, name, "every round played a late ladder interval; " + tal.detail);
  }

  if (auto* sd = std::get_if<cert::SigmaDiag>(&c)) {
    detail::require(cfg.variant == Variant::Standard && cfg.payoff == Payoff::Fplus, name, "payoff fplus");
    for (std::size_t k = 0; k < replies.size(); ++k) {
      SetValue xs = sd->family(sigma(k));
      for (Nat n : elements_of(replies[k]))
        if (!contains(xs, n) || !contains(offers[k], n) || n < k)
          return detail::undetermined(t, name, "round " + std::to_string(k) + " left X_sigma(k) ∩ Y_k \\ k");
    }
    WitnessReport d = check_diag(sd->family, cfg.filter, DiagMode::Plain, sd->samples, sd->bound, cfg.depth);
    if (!d.verified()) return detail::undetermined(t, name, "family check: " + d.detail);
    return detail::win(VerdictTag::WinII, t, name, "every reply in X_sigma(k) ∩ Y_k \\ k; family diagonalizes");
  }

  if (auto* fx = std::get_if<cert::FixedSet>(&c)) {
    detail::require(cfg.variant == Variant::Standard && (cfg.payoff == Payoff::Fcomp || cfg.payoff == Payoff::Fstar),
                    name, "payoff fcomp or fstar");
    for (Nat n : t.outcome())
      if (!fx->x.contains(n)) return detail::undetermined(t, name, std::to_string(n) + " outside the fixed set");
    Region r = classify(cfg.filter, fx->x, cfg.depth);
    bool ok = cfg.payoff == Payoff::Fcomp ? r.known() && !r.in_f() : r.in_star();
    if (!ok) return detail::undetermined(t, name, "fixed set classifies " + to_string(r));
    return detail::win(VerdictTag::WinII, t, name, "outcome inside a set classifying " + to_string(r));
  }

  detail::require(cfg.variant == Variant::Standard && cfg.move == MoveKind::Element && cfg.payoff == Payoff::Fstar &&
                      cfg.filter.kind() != FilterKind::FrTensorFr && cfg.filter.kind() != FilterKind::ProductInner,
                  name, "game *,elem,fstar over a countably generated filter");
  for (std::size_t k = 0; k < replies.size(); ++k) {
    Nat n = std::get<Nat>(replies[k]);
    if (n < k) return detail::undetermined(t, name, "round " + std::to_string(k) + " below k");
    for (Nat i = 0; i < k; ++i)
      if (!contains(basis(cfg.filter, i), n))
        return detail::undetermined(t, name, "round " + std::to_string(k) + " outside basis set " + std::to_string(i));
  }
  return detail::win(VerdictTag::WinI, t, name, "outcome is a pseudo-intersection of the basis");
}

/// Parses a certifier name; parameters come from the caller.
inline Certifier parse_certifier(std::string_view text, const std::optional<Partition>& blocks = std::nullopt,
                                 const std::optional<Ladder>& pi = std::nullopt,
                                 const std::optional<SetFamily>& family = std::nullopt,
                                 const std::optional<UPSet>& fixed = std::nullopt) {
  auto need = [&](bool ok) {
    if (!ok) throw std::invalid_argument("certifier '" + std::string(text) + "' is missing its parameter");
  };
  if (text == "partition") {
    need(blocks.has_value());
    return cert::PartitionSelector{*blocks};
  }
  if (text == "interval") {
    need(pi.has_value());
    return cert::IntervalLadder{*pi};
  }
  if (text == "sigma") {
    need(family.has_value());
    return cert::SigmaDiag{*family};
  }
  if (text == "fixed") {
    need(fixed.has_value());
    return cert::FixedSet{*fixed};
  }
  if (text == "chain") return cert::ChainPseudoIntersection{};
  if (text == "forfeit") return cert::ForfeitOnly{};
  throw SyntaxError("unknown certifier '" + std::string(text) + "'", 0);
}

}  // namespace fg
