#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "filtergames/gridset.hpp"

namespace fg {

enum class RegionTag { InF, InFplusOnly, InFstar, Unknown };

/// Where a set sits relative to a filter ℱ: in ℱ, in ℱ⁺ but not ℱ, in the
/// dual ideal ℱ*, or undecided after exhausting `depth`.
struct Region {
  RegionTag tag = RegionTag::Unknown;
  unsigned depth = 0;

  bool known() const { return tag != RegionTag::Unknown; }
  bool in_f() const { return tag == RegionTag::InF; }
  bool in_plus() const { return tag == RegionTag::InF || tag == RegionTag::InFplusOnly; }
  bool in_star() const { return tag == RegionTag::InFstar; }

  friend bool operator==(const Region&, const Region&) = default;
};

inline Region region(RegionTag t) { return Region{t, 0}; }

inline std::string to_string(const Region& r) {
  switch (r.tag) {
    case RegionTag::InF: return "InF";
    case RegionTag::InFplusOnly: return "InFplusOnly";
    case RegionTag::InFstar: return "InFstar";
    case RegionTag::Unknown: return "Unknown(" + std::to_string(r.depth) + ")";
  }
  return "?";
}

struct Depth {
  unsigned d;
  explicit Depth(unsigned value = 8) : d(value) {
    if (value < 1) throw std::invalid_argument("depth must be >= 1");
  }
};

class ImproperFilter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class FilterKind { Frechet, FiniteGen, DyadicChain, FrTensorFr, ProductInner };

/// A computable filter presentation. Immutable once built.
class FilterSpec {
 public:
  static FilterSpec frechet() { return FilterSpec(FilterKind::Frechet); }
  static FilterSpec dyadic_chain() { return FilterSpec(FilterKind::DyadicChain); }
  static FilterSpec fr_tensor_fr() { return FilterSpec(FilterKind::FrTensorFr); }

  /// Filter generated by the given sets together with the cofinite sets.
  static FilterSpec finite_gen(std::vector<UPSet> generators) {
    UPSet meet = UPSet::all();
    for (const auto& g : generators) meet = meet & g;
    if (meet.is_finite()) throw ImproperFilter("improper family: intersection of generators is finite");
    FilterSpec f(FilterKind::FiniteGen);
    f.generators_ = std::move(generators);
    f.meet_ = std::move(meet);
    return f;
  }

  /// {X ⊆ ω×ω : every column of X is in the inner filter, and cofinitely many
  /// columns are cofinite}.
  static FilterSpec product_inner(FilterSpec inner) {
    if (inner.plane()) throw std::invalid_argument("product inner filter must live on ω");
    FilterSpec f(FilterKind::ProductInner);
    f.inner_ = std::make_shared<const FilterSpec>(std::move(inner));
    return f;
  }

  FilterKind kind() const noexcept { return kind_; }
  const std::vector<UPSet>& generators() const noexcept { return generators_; }
  const UPSet& generator_meet() const noexcept { return meet_; }
  const FilterSpec& inner() const { return *inner_; }

  /// Whether the natural universe is ω×ω (GridSet members).
  bool plane() const { return kind_ == FilterKind::FrTensorFr || kind_ == FilterKind::ProductInner; }

  std::string text() const {
    switch (kind_) {
      case FilterKind::Frechet: return "frechet";
      case FilterKind::DyadicChain: return "dyadic";
      case FilterKind::FrTensorFr: return "frtensorfr";
      case FilterKind::ProductInner: return "product:" + inner_->text();
      case FilterKind::FiniteGen: {
        std::string s = "finitegen:";
        for (std::size_t i = 0; i < generators_.size(); ++i) s += (i ? "," : "") + generators_[i].format();
        return s;
      }
    }
    return "?";
  }

 private:
  explicit FilterSpec(FilterKind k) : kind_(k) {}

  FilterKind kind_;
  std::vector<UPSet> generators_;
  UPSet meet_ = UPSet::all();
  std::shared_ptr<const FilterSpec> inner_;
};

/// Multiples of 2ⁿ.
inline UPSet dyadic_set(Nat n) {
  if (n > 26) throw std::overflow_error("dyadic level too deep to materialize");
  return UPSet::multiples(Nat{1} << n);
}

namespace detail {

inline Region from_membership(bool in_f, bool comp_in_f) {
  if (in_f) return region(RegionTag::InF);
  if (comp_in_f) return region(RegionTag::InFstar);
  return region(RegionTag::InFplusOnly);
}

inline Region by_cardinality(CardClass c) {
  switch (c) {
    case CardClass::Cofinite: return region(RegionTag::InF);
    case CardClass::Finite: return region(RegionTag::InFstar);
    default: return region(RegionTag::InFplusOnly);
  }
}

// Some A_n ⊆* s. Beyond n = v2(|period|) the residues of multiples of 2ⁿ
// modulo the period no longer change, so n <= v2 + 1 decides it; the A_n
// decrease, so it is enough to test A_{v2 + 1}, one joint period past the
// prefix.
inline bool dyadic_member(const UPSet& s) {
  const Nat p = s.period_length(), L = s.prefix_length();
  const Nat step = Nat{2} << v2(p);
  const Nat span = (p >> v2(p)) * step;  // lcm(p, step)
  for (Nat m = (L + step - 1) / step * step; m < L + span; m += step)
    if (!s.contains(m)) return false;
  return true;
}

// Columns n >= v2(|period|) of a flattened UPSet all read the same residues
// of the period word: those j with j ≡ -1 - |prefix| (mod 2^v2).
inline bool tensor_member(const UPSet& s) {
  const Nat p = s.period_length();
  const Nat a = Nat{1} << v2(p);
  const Nat L = s.prefix_length();
  const Nat r = (a - 1 - (L % a) + a) % a;  // (-1 - L) mod a
  for (Nat j = r; j < p; j += a)
    if (!s.period()[j]) return false;
  return true;
}

inline bool tensor_member(const GridSet& g) {
  return cofinite_columns_mod_finite(pieces(g)).is_cofinite();
}

inline std::optional<GridSet> grid_if_trivial(const SetValue& s) {
  if (auto* g = std::get_if<GridSet>(&s)) return *g;
  return to_grid(std::get<UPSet>(s));
}

}  // namespace detail

Region classify(const FilterSpec& f, const SetValue& s, Depth depth = Depth{});

namespace detail {

// Three-valued membership in the product filter: nullopt means undecided.
inline std::optional<bool> product_member(const FilterSpec& f, const GridSet& g, Depth depth) {
  if (!tensor_member(g)) return false;
  bool unknown = false;
  auto check = [&](const UPSet& col) {
    Region r = classify(f.inner(), col, depth);
    if (!r.known()) {
      unknown = true;
      return true;
    }
    return r.in_f();
  };
  for (const auto& [k, col] : g.overrides())
    if (!check(col)) return false;
  for (const auto& [cols, content] : pieces(g).classes)
    if (!cols.is_empty() && !check(content)) return false;
  if (unknown) return std::nullopt;
  return true;
}

}  // namespace detail

/// Three-valued classification of `s` against `f`.
inline Region classify(const FilterSpec& f, const SetValue& s, Depth depth) {
  switch (f.kind()) {
    case FilterKind::Frechet:
      return detail::by_cardinality(card_class(s));

    case FilterKind::FiniteGen:
    case FilterKind::DyadicChain: {
      const UPSet* u = std::get_if<UPSet>(&s);
      if (!u) {
        CardClass c = card_class(s);
        if (c == CardClass::InfiniteCoinfinite)
          throw UniverseMismatch(f.text() + " cannot classify a column-wise set");
        return detail::by_cardinality(c);
      }
      if (f.kind() == FilterKind::DyadicChain)
        return detail::from_membership(detail::dyadic_member(*u), detail::dyadic_member(~*u));
      return detail::from_membership(almost_subset(f.generator_meet(), *u),
                                     almost_subset(f.generator_meet(), ~*u));
    }

    case FilterKind::FrTensorFr: {
      if (auto* u = std::get_if<UPSet>(&s))
        return detail::from_membership(detail::tensor_member(*u), detail::tensor_member(~*u));
      const auto& g = std::get<GridSet>(s);
      return detail::from_membership(detail::tensor_member(g), detail::tensor_member(complement(g)));
    }

    case FilterKind::ProductInner: {
      auto g = detail::grid_if_trivial(s);
      if (!g) throw UniverseMismatch("product filter needs a column-wise set");
      auto in = detail::product_member(f, *g, depth);
      if (in && *in) return region(RegionTag::InF);
      auto out = detail::product_member(f, complement(*g), depth);
      if (out && *out) return region(RegionTag::InFstar);
      if (in && out) return region(RegionTag::InFplusOnly);
      return Region{RegionTag::Unknown, depth.d};
    }
  }
  return Region{RegionTag::Unknown, depth.d};
}

/// i-th member of the generating basis; every member classifies InF.
inline SetValue basis(const FilterSpec& f, Nat i) {
  switch (f.kind()) {
    case FilterKind::Frechet: return UPSet::tail(i);
    case FilterKind::DyadicChain: return dyadic_set(i) & UPSet::tail(i);
    case FilterKind::FiniteGen: {
      const auto& gens = f.generators();
      if (gens.empty()) return UPSet::tail(i);
      return gens[i % gens.size()] & UPSet::tail(i / gens.size());
    }
    case FilterKind::FrTensorFr: return GridSet(UPSet::tail(i), UPSet::tail(i), UPSet::empty());
    case FilterKind::ProductInner: {
      SetValue inner = basis(f.inner(), i);
      return GridSet(UPSet::tail(i), UPSet::tail(i), std::get<UPSet>(inner));
    }
  }
  return UPSet::all();
}

/// Parses "frechet", "dyadic", "frtensorfr", "finitegen:<set>,<set>,…" and
/// "product:<inner>"; sets may be descriptors or names such as evens.
inline FilterSpec make_filter(std::string_view text) {
  if (text == "frechet" || text == "fr") return FilterSpec::frechet();
  if (text == "dyadic" || text == "dyadicchain") return FilterSpec::dyadic_chain();
  if (text == "frtensorfr") return FilterSpec::fr_tensor_fr();
  if (text.starts_with("product:")) return FilterSpec::product_inner(make_filter(text.substr(8)));
  if (text.starts_with("finitegen:")) {
    std::vector<UPSet> gens;
    std::string_view rest = text.substr(10);
    std::size_t offset = 10;
    while (!rest.empty()) {
      std::size_t comma = rest.find(',');
      std::string_view item = rest.substr(0, comma);
      SetValue v;
      try {
        v = parse_named_set(item);
      } catch (const SyntaxError& e) {
        throw SyntaxError(std::string("bad generator: ") + e.what(), offset + e.position());
      }
      if (is_grid(v)) throw SyntaxError("generators must be subsets of ω", offset);
      gens.push_back(std::get<UPSet>(v));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
      offset += comma + 1;
    }
    return FilterSpec::finite_gen(std::move(gens));
  }
  throw SyntaxError("unknown filter '" + std::string(text) + "'", 0);
}

}  // namespace fg
