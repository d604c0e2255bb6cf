#pragma once

#include <bit>
#include <map>
#include <utility>
#include <variant>

#include "filtergames/upset.hpp"

namespace fg {

/// ⟨n,m⟩ = 2ⁿ(2m+1) − 1; the column is the trailing-zero count of k+1.
inline Nat pair_index(Nat col, Nat row) {
  if (col >= 63 || row > ((UINT64_MAX >> col) - 1) / 2) throw std::overflow_error("pairing overflow");
  return (Nat{1} << col) * (2 * row + 1) - 1;
}

inline std::pair<Nat, Nat> unpair(Nat k) {
  if (k == UINT64_MAX) throw std::overflow_error("unpair overflow");
  const Nat x = k + 1;
  const Nat col = static_cast<Nat>(std::countr_zero(x));
  return {col, ((x >> col) - 1) / 2};
}

/// Column {col} × ω as a subset of ω under the pairing.
inline UPSet column_set(Nat col) {
  if (col >= 62) throw std::overflow_error("column index too large for a flattened column");
  return UPSet::residue(Nat{1} << (col + 1), (Nat{1} << col) - 1);
}

class UniverseMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotRepresentable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A subset of ω×ω given column-wise: covered columns share `default_column`,
/// the rest share `outside_column`, and finitely many columns are overridden.
class GridSet {
 public:
  GridSet() = default;
  GridSet(UPSet covered, UPSet default_column, UPSet outside_column, std::map<Nat, UPSet> overrides = {})
      : covered_(std::move(covered)),
        default_(std::move(default_column)),
        outside_(std::move(outside_column)),
        overrides_(std::move(overrides)) {
    normalize();
  }

  static GridSet full() { return GridSet(UPSet::all(), UPSet::all(), UPSet::all()); }
  static GridSet none() { return GridSet(); }

  /// {col} × rows
  static GridSet lift_rows(const UPSet& rows, Nat col) {
    return GridSet(UPSet::empty(), UPSet::empty(), UPSet::empty(), {{col, rows}});
  }

  const UPSet& covered() const noexcept { return covered_; }
  const UPSet& default_column() const noexcept { return default_; }
  const UPSet& outside_column() const noexcept { return outside_; }
  const std::map<Nat, UPSet>& overrides() const noexcept { return overrides_; }

  const UPSet& column(Nat n) const {
    if (auto it = overrides_.find(n); it != overrides_.end()) return it->second;
    return covered_.contains(n) ? default_ : outside_;
  }

  bool contains(Nat col, Nat row) const { return column(col).contains(row); }

  /// Membership of k under the pairing.
  bool contains(Nat k) const {
    auto [col, row] = unpair(k);
    return contains(col, row);
  }

  std::string format() const {
    std::string s = "grid:cols=" + covered_.format() + ";def=" + default_.format() + ";out=" + outside_.format();
    if (!overrides_.empty()) {
      s += ";ovr=";
      bool first = true;
      for (const auto& [k, v] : overrides_) {
        if (!first) s += ",";
        first = false;
        s += std::to_string(k) + ":" + v.format();
      }
    }
    return s;
  }

  friend bool operator==(const GridSet&, const GridSet&) = default;

 private:
  void normalize() {
    if (default_ == outside_) covered_ = UPSet::empty();
    for (auto it = overrides_.begin(); it != overrides_.end();) {
      const UPSet& base = covered_.contains(it->first) ? default_ : outside_;
      it = (it->second == base) ? overrides_.erase(it) : std::next(it);
    }
  }

  UPSet covered_;
  UPSet default_;
  UPSet outside_;
  std::map<Nat, UPSet> overrides_;
};

/// Column classes of one or two GridSets: every column outside `explicit_columns`
/// belongs to exactly one class, and all columns of a class share its content.
struct GridPieces {
  std::vector<std::pair<UPSet, UPSet>> classes;  // (column indices, column content)
  std::map<Nat, UPSet> explicit_columns;
};

namespace detail {

inline UPSet key_set(const std::map<Nat, UPSet>& a, const std::map<Nat, UPSet>* b = nullptr) {
  std::vector<Nat> keys;
  for (const auto& kv : a) keys.push_back(kv.first);
  if (b)
    for (const auto& kv : *b) keys.push_back(kv.first);
  return UPSet::finite(keys);
}

}  // namespace detail

inline GridPieces pieces(const GridSet& g) {
  GridPieces p;
  UPSet keys = detail::key_set(g.overrides());
  p.classes.emplace_back(g.covered() - keys, g.default_column());
  p.classes.emplace_back(~g.covered() - keys, g.outside_column());
  p.explicit_columns = g.overrides();
  return p;
}

inline GridPieces combine(const GridSet& a, const GridSet& b, BoolOp op) {
  GridPieces p;
  UPSet keys = detail::key_set(a.overrides(), &b.overrides());
  const UPSet ca = a.covered(), cb = b.covered();
  p.classes.emplace_back((ca & cb) - keys, combine(a.default_column(), b.default_column(), op));
  p.classes.emplace_back((ca - cb) - keys, combine(a.default_column(), b.outside_column(), op));
  p.classes.emplace_back((cb - ca) - keys, combine(a.outside_column(), b.default_column(), op));
  p.classes.emplace_back(~(ca | cb) - keys, combine(a.outside_column(), b.outside_column(), op));
  for (auto k : keys.elements(0, keys.prefix_length()))
    p.explicit_columns.emplace(k, combine(a.column(k), b.column(k), op));
  return p;
}

inline CardClass card_class(const GridPieces& p) {
  bool finite = true;
  for (const auto& [k, col] : p.explicit_columns) finite = finite && col.is_finite();
  for (const auto& [cols, content] : p.classes) {
    if (cols.is_empty()) continue;
    if (cols.is_infinite())
      finite = finite && content.is_empty();
    else
      finite = finite && content.is_finite();
  }
  if (finite) return CardClass::Finite;
  // cofinite iff the complement is finite
  bool cofinite = true;
  for (const auto& [k, col] : p.explicit_columns) cofinite = cofinite && col.is_cofinite();
  for (const auto& [cols, content] : p.classes) {
    if (cols.is_empty()) continue;
    if (cols.is_infinite())
      cofinite = cofinite && content == UPSet::all();
    else
      cofinite = cofinite && content.is_cofinite();
  }
  return cofinite ? CardClass::Cofinite : CardClass::InfiniteCoinfinite;
}

/// Column indices whose content is cofinite, up to the explicit columns
/// (which are finitely many and therefore irrelevant to cofiniteness).
inline UPSet cofinite_columns_mod_finite(const GridPieces& p) {
  UPSet out = UPSet::empty();
  for (const auto& [cols, content] : p.classes)
    if (content.is_cofinite()) out = out | cols;
  return out;
}

inline GridSet to_gridset(const GridPieces& p) {
  std::map<Nat, UPSet> ovr = p.explicit_columns;
  std::vector<std::pair<UPSet, UPSet>> infinite;
  for (const auto& [cols, content] : p.classes) {
    if (cols.is_empty()) continue;
    if (cols.is_finite()) {
      for (Nat k : cols.elements(0, cols.prefix_length())) ovr.emplace(k, content);
      continue;
    }
    auto same = std::find_if(infinite.begin(), infinite.end(), [&](const auto& e) { return e.second == content; });
    if (same != infinite.end())
      same->first = same->first | cols;
    else
      infinite.emplace_back(cols, content);
  }
  if (infinite.empty()) return GridSet(UPSet::empty(), UPSet::empty(), UPSet::empty(), std::move(ovr));
  if (infinite.size() == 1) return GridSet(UPSet::all(), infinite[0].second, infinite[0].second, std::move(ovr));
  if (infinite.size() == 2)
    return GridSet(infinite[0].first, infinite[0].second, infinite[1].second, std::move(ovr));
  throw NotRepresentable("grid combination needs more than two column classes");
}

inline GridSet complement(const GridSet& g) {
  std::map<Nat, UPSet> ovr;
  for (const auto& [k, v] : g.overrides()) ovr.emplace(k, ~v);
  return GridSet(g.covered(), ~g.default_column(), ~g.outside_column(), std::move(ovr));
}

inline GridSet set_and(const GridSet& a, const GridSet& b) { return to_gridset(combine(a, b, BoolOp::And)); }
inline GridSet set_or(const GridSet& a, const GridSet& b) { return to_gridset(combine(a, b, BoolOp::Or)); }
inline GridSet set_diff(const GridSet& a, const GridSet& b) { return to_gridset(combine(a, b, BoolOp::Diff)); }

inline CardClass card_class(const GridSet& g) { return card_class(pieces(g)); }

inline bool almost_subset(const GridSet& a, const GridSet& b) {
  return card_class(combine(a, b, BoolOp::Diff)) == CardClass::Finite;
}

inline bool is_empty(const GridPieces& p) {
  for (const auto& [k, col] : p.explicit_columns)
    if (!col.is_empty()) return false;
  for (const auto& [cols, content] : p.classes)
    if (!cols.is_empty() && !content.is_empty()) return false;
  return true;
}

inline bool subset(const GridSet& a, const GridSet& b) { return is_empty(combine(a, b, BoolOp::Diff)); }

/// A finite or cofinite subset of ω re-expressed column-wise.
inline std::optional<GridSet> to_grid(const UPSet& s) {
  auto from_finite = [](const UPSet& f) {
    std::map<Nat, std::vector<Nat>> cols;
    for (Nat k : f.elements(0, f.prefix_length())) {
      auto [c, r] = unpair(k);
      cols[c].push_back(r);
    }
    std::map<Nat, UPSet> ovr;
    for (auto& [c, rows] : cols) ovr.emplace(c, UPSet::finite(rows));
    return GridSet(UPSet::empty(), UPSet::empty(), UPSet::empty(), std::move(ovr));
  };
  if (s.is_finite()) return from_finite(s);
  if (s.is_cofinite()) return complement(from_finite(~s));
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// SetValue: either kind of set, viewed as a subset of ω through the pairing.

using SetValue = std::variant<UPSet, GridSet>;

inline bool is_grid(const SetValue& s) { return std::holds_alternative<GridSet>(s); }

inline bool contains(const SetValue& s, Nat n) {
  return std::visit([n](const auto& v) { return v.contains(n); }, s);
}

inline std::string format(const SetValue& s) {
  return std::visit([](const auto& v) { return v.format(); }, s);
}

inline CardClass card_class(const SetValue& s) {
  if (auto* u = std::get_if<UPSet>(&s)) return u->card_class();
  return card_class(std::get<GridSet>(s));
}

inline GridSet as_grid(const SetValue& s) {
  if (auto* g = std::get_if<GridSet>(&s)) return *g;
  auto g = to_grid(std::get<UPSet>(s));
  if (!g) throw UniverseMismatch("set " + format(s) + " has no column-wise form");
  return *g;
}

inline SetValue complement(const SetValue& s) {
  return std::visit([](const auto& v) -> SetValue { return complement(v); }, s);
}

inline SetValue combine(const SetValue& a, const SetValue& b, BoolOp op) {
  if (!is_grid(a) && !is_grid(b)) return combine(std::get<UPSet>(a), std::get<UPSet>(b), op);
  return to_gridset(combine(as_grid(a), as_grid(b), op));
}

inline SetValue set_and(const SetValue& a, const SetValue& b) { return combine(a, b, BoolOp::And); }
inline SetValue set_or(const SetValue& a, const SetValue& b) { return combine(a, b, BoolOp::Or); }
inline SetValue set_diff(const SetValue& a, const SetValue& b) { return combine(a, b, BoolOp::Diff); }

inline bool almost_subset(const SetValue& a, const SetValue& b) {
  if (!is_grid(a) && !is_grid(b)) return almost_subset(std::get<UPSet>(a), std::get<UPSet>(b));
  return almost_subset(as_grid(a), as_grid(b));
}

inline bool subset(const SetValue& a, const SetValue& b) {
  if (!is_grid(a) && !is_grid(b)) return subset(std::get<UPSet>(a), std::get<UPSet>(b));
  return subset(as_grid(a), as_grid(b));
}

/// Search bound used when scanning GridSets element by element.
inline constexpr Nat kGridScan = Nat{1} << 16;

/// Least element >= from. UPSets are answered exactly; GridSets are scanned
/// for at most `scan` positions.
inline std::optional<Nat> next_element(const SetValue& s, Nat from, Nat scan = kGridScan) {
  if (auto* u = std::get_if<UPSet>(&s)) return u->next_element(from);
  const auto& g = std::get<GridSet>(s);
  for (Nat n = from; n < from + scan; ++n)
    if (g.contains(n)) return n;
  return std::nullopt;
}

inline Bits window(const SetValue& s, Nat bound) {
  Bits w(bound);
  for (Nat n = 0; n < bound; ++n) w[n] = contains(s, n);
  return w;
}

/// Characteristic word on [0, bound) together with its bound.
struct Window {
  Nat bound = 0;
  Bits bits;

  static Window of(const SetValue& s, Nat bound) { return {bound, window(s, bound)}; }
  bool operator[](Nat n) const { return bits.at(n); }
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline GridSet parse_grid_at(Cursor& c) {
  c.expect("grid:cols=");
  UPSet cols = parse_upset_at(c);
  c.expect(";def=");
  UPSet def = parse_upset_at(c);
  c.expect(";out=");
  UPSet out = parse_upset_at(c);
  std::map<Nat, UPSet> ovr;
  if (c.consume(";ovr=")) {
    do {
      std::size_t at = c.pos;
      Nat idx = c.number();
      c.expect(":");
      UPSet col = parse_upset_at(c);
      if (!ovr.emplace(idx, std::move(col)).second) throw SyntaxError("duplicate override column", at);
    } while (c.consume(","));
  }
  return GridSet(std::move(cols), std::move(def), std::move(out), std::move(ovr));
}

}  // namespace detail

inline GridSet parse_gridset(std::string_view text) {
  detail::Cursor c{text};
  GridSet g = detail::parse_grid_at(c);
  if (!c.at_end()) throw SyntaxError("trailing characters", c.pos);
  return g;
}

/// Parses either descriptor form.
inline SetValue parse_set(std::string_view text) {
  if (text.starts_with("grid:")) return parse_gridset(text);
  if (text.starts_with("up:")) return parse_upset(text);
  throw SyntaxError("expected 'up:' or 'grid:'", 0);
}

/// Descriptor or one of the names evens, odds, omega, empty, mult<m>, tail<n>,
/// col<n> (a flattened column).
inline SetValue parse_named_set(std::string_view text) {
  if (text == "evens") return UPSet::multiples(2);
  if (text == "odds") return UPSet::residue(2, 1);
  if (text == "omega" || text == "all") return UPSet::all();
  if (text == "empty") return UPSet::empty();
  auto numeric_suffix = [&](std::string_view head) -> std::optional<Nat> {
    if (!text.starts_with(head) || text.size() == head.size()) return std::nullopt;
    detail::Cursor c{text, head.size()};
    Nat v = c.number();
    if (!c.at_end()) throw SyntaxError("trailing characters", c.pos);
    return v;
  };
  if (auto m = numeric_suffix("mult")) {
    if (*m == 0) throw SyntaxError("mult0 is not a set", 4);
    return UPSet::multiples(*m);
  }
  if (auto n = numeric_suffix("tail")) return UPSet::tail(*n);
  if (auto n = numeric_suffix("col")) return column_set(*n);
  return parse_set(text);
}

}  // namespace fg
