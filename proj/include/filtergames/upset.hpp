#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fg {

using Nat = std::uint64_t;
using Bits = std::vector<bool>;

// Raised by every descriptor parser; position is a 0-based offset into the
// text that was handed to the parser.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

enum class CardClass { Finite, InfiniteCoinfinite, Cofinite };

inline const char* to_string(CardClass c) {
  switch (c) {
    case CardClass::Finite: return "Finite";
    case CardClass::InfiniteCoinfinite: return "Infinite-Coinfinite";
    case CardClass::Cofinite: return "Cofinite";
  }
  return "?";
}

enum class BoolOp { And, Or, Diff, Xor };

/// An ultimately periodic subset of ω: `prefix` fixes membership of
/// 0..|prefix|-1, and n >= |prefix| is a member iff
/// period[(n - |prefix|) mod |period|] is set.
///
/// Values are kept canonical (primitive period, shortest prefix), so two
/// UPSets denote the same set exactly when they compare equal.
class UPSet {
 public:
  UPSet() : period_{false} {}

  UPSet(Bits prefix, Bits period) : prefix_(std::move(prefix)), period_(std::move(period)) {
    if (period_.empty()) throw std::invalid_argument("UPSet: empty period");
    canonicalize();
  }

  static UPSet empty() { return UPSet(); }
  static UPSet all() { return UPSet({}, {true}); }

  /// [n, ∞)
  static UPSet tail(Nat n) { return UPSet(Bits(n, false), {true}); }

  /// [lo, hi)
  static UPSet interval(Nat lo, Nat hi) {
    if (hi <= lo) return empty();
    Bits pre(hi, false);
    std::fill(pre.begin() + static_cast<std::ptrdiff_t>(lo), pre.end(), true);
    return UPSet(std::move(pre), {false});
  }

  static UPSet finite(const std::vector<Nat>& elems) {
    if (elems.empty()) return empty();
    Nat top = *std::max_element(elems.begin(), elems.end());
    Bits pre(top + 1, false);
    for (Nat e : elems) pre[e] = true;
    return UPSet(std::move(pre), {false});
  }
  static UPSet finite(std::initializer_list<Nat> elems) {
    return finite(std::vector<Nat>(elems));
  }

  /// {n : n ≡ residue (mod modulus)}
  static UPSet residue(Nat modulus, Nat residue) {
    if (modulus == 0) throw std::invalid_argument("UPSet::residue: zero modulus");
    Bits per(modulus, false);
    per[residue % modulus] = true;
    return UPSet({}, std::move(per));
  }
  static UPSet multiples(Nat m) { return residue(m, 0); }

  const Bits& prefix() const noexcept { return prefix_; }
  const Bits& period() const noexcept { return period_; }
  std::size_t prefix_length() const noexcept { return prefix_.size(); }
  std::size_t period_length() const noexcept { return period_.size(); }

  bool contains(Nat n) const {
    if (n < prefix_.size()) return prefix_[n];
    return period_[(n - prefix_.size()) % period_.size()];
  }

  CardClass card_class() const {
    bool any = false, every = true;
    for (bool b : period_) {
      any = any || b;
      every = every && b;
    }
    if (!any) return CardClass::Finite;
    if (every) return CardClass::Cofinite;
    return CardClass::InfiniteCoinfinite;
  }
  bool is_finite() const { return card_class() == CardClass::Finite; }
  bool is_cofinite() const { return card_class() == CardClass::Cofinite; }
  bool is_infinite() const { return !is_finite(); }
  bool is_empty() const { return is_finite() && std::none_of(prefix_.begin(), prefix_.end(), [](bool b) { return b; }); }

  /// Least element >= from, if any.
  std::optional<Nat> next_element(Nat from) const {
    const Nat start = from;
    const Nat horizon = std::max<Nat>(from, prefix_.size()) + period_.size();
    for (Nat n = start; n < horizon; ++n)
      if (contains(n)) return n;
    return std::nullopt;
  }
  std::optional<Nat> min_element() const { return next_element(0); }

  /// Largest element of a finite set.
  std::optional<Nat> max_element() const {
    if (!is_finite()) return std::nullopt;
    for (std::size_t i = prefix_.size(); i-- > 0;)
      if (prefix_[i]) return i;
    return std::nullopt;
  }

  /// Least t with [t, ∞) ⊆ this; only meaningful for cofinite sets.
  std::optional<Nat> threshold() const {
    if (!is_cofinite()) return std::nullopt;
    return prefix_.size();
  }

  /// Elements in [lo, hi).
  std::vector<Nat> elements(Nat lo, Nat hi) const {
    std::vector<Nat> out;
    for (Nat n = lo; n < hi; ++n)
      if (contains(n)) out.push_back(n);
    return out;
  }

  /// First `count` elements >= from (fewer if the set runs out).
  std::vector<Nat> first_elements(std::size_t count, Nat from = 0) const {
    std::vector<Nat> out;
    Nat cur = from;
    while (out.size() < count) {
      auto e = next_element(cur);
      if (!e) break;
      out.push_back(*e);
      cur = *e + 1;
    }
    return out;
  }

  /// Characteristic word on [0, bound).
  Bits window(Nat bound) const {
    Bits w(bound);
    for (Nat n = 0; n < bound; ++n) w[n] = contains(n);
    return w;
  }

  /// Length that covers the prefix plus one full period.
  Nat horizon() const { return prefix_.size() + period_.size(); }

  std::string format() const {
    std::string s = "up:pre=";
    for (bool b : prefix_) s.push_back(b ? '1' : '0');
    s += ";per=";
    for (bool b : period_) s.push_back(b ? '1' : '0');
    return s;
  }

  friend bool operator==(const UPSet&, const UPSet&) = default;

 private:
  void canonicalize() {
    // shortest period word
    const std::size_t p = period_.size();
    for (std::size_t d = 1; d < p; ++d) {
      if (p % d != 0) continue;
      bool ok = true;
      for (std::size_t i = d; i < p && ok; ++i) ok = period_[i] == period_[i % d];
      if (ok) {
        period_.resize(d);
        break;
      }
    }
    // absorb trailing prefix bits into the period: r bits absorbed is a
    // rotation of the period by r
    const std::size_t q = period_.size(), len = prefix_.size();
    std::size_t r = 0;
    while (r < len && prefix_[len - 1 - r] == period_[(q - 1) - (r % q)]) ++r;
    if (r > 0) {
      prefix_.resize(len - r);
      std::rotate(period_.begin(), period_.begin() + (q - r % q), period_.end());
    }
  }

  Bits prefix_;
  Bits period_;
};

inline Nat lcm_checked(Nat a, Nat b) {
  Nat g = std::gcd(a, b);
  Nat q = a / g;
  if (b != 0 && q > UINT64_MAX / b) throw std::overflow_error("period lcm overflow");
  return q * b;
}

inline bool apply(BoolOp op, bool x, bool y) {
  switch (op) {
    case BoolOp::And: return x && y;
    case BoolOp::Or: return x || y;
    case BoolOp::Diff: return x && !y;
    case BoolOp::Xor: return x != y;
  }
  return false;
}

inline UPSet combine(const UPSet& a, const UPSet& b, BoolOp op) {
  const Nat len = std::max(a.prefix_length(), b.prefix_length());
  const Nat per = lcm_checked(a.period_length(), b.period_length());
  Bits pre(len), cyc(per);
  for (Nat n = 0; n < len; ++n) pre[n] = apply(op, a.contains(n), b.contains(n));
  for (Nat j = 0; j < per; ++j) cyc[j] = apply(op, a.contains(len + j), b.contains(len + j));
  return UPSet(std::move(pre), std::move(cyc));
}

inline UPSet set_and(const UPSet& a, const UPSet& b) { return combine(a, b, BoolOp::And); }
inline UPSet set_or(const UPSet& a, const UPSet& b) { return combine(a, b, BoolOp::Or); }
inline UPSet set_diff(const UPSet& a, const UPSet& b) { return combine(a, b, BoolOp::Diff); }

inline UPSet complement(const UPSet& a) {
  Bits pre = a.prefix(), per = a.period();
  pre.flip();
  per.flip();
  return UPSet(std::move(pre), std::move(per));
}

inline UPSet operator&(const UPSet& a, const UPSet& b) { return set_and(a, b); }
inline UPSet operator|(const UPSet& a, const UPSet& b) { return set_or(a, b); }
inline UPSet operator-(const UPSet& a, const UPSet& b) { return set_diff(a, b); }
inline UPSet operator~(const UPSet& a) { return complement(a); }

inline CardClass classify_card(const UPSet& a) { return a.card_class(); }

/// a ⊆* b: a \ b is finite.
inline bool almost_subset(const UPSet& a, const UPSet& b) { return set_diff(a, b).is_finite(); }

inline bool subset(const UPSet& a, const UPSet& b) { return set_diff(a, b).is_empty(); }

/// 2-adic valuation.
inline unsigned v2(Nat n) {
  if (n == 0) return 64;
  unsigned v = 0;
  while ((n & 1) == 0) {
    n >>= 1;
    ++v;
  }
  return v;
}

namespace detail {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  bool at_end() const { return pos >= text.size(); }
  bool consume(std::string_view lit) {
    if (text.substr(pos, lit.size()) == lit) {
      pos += lit.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view lit) {
    if (!consume(lit)) throw SyntaxError("expected '" + std::string(lit) + "'", pos);
  }
  Bits bits() {
    Bits out;
    while (!at_end() && (text[pos] == '0' || text[pos] == '1')) out.push_back(text[pos++] == '1');
    return out;
  }
  Nat number() {
    std::size_t start = pos;
    Nat v = 0;
    while (!at_end() && text[pos] >= '0' && text[pos] <= '9') {
      Nat d = static_cast<Nat>(text[pos] - '0');
      if (v > (UINT64_MAX - d) / 10) throw SyntaxError("number too large", start);
      v = v * 10 + d;
      ++pos;
    }
    if (pos == start) throw SyntaxError("expected number", pos);
    return v;
  }
};

inline UPSet parse_upset_at(Cursor& c) {
  c.expect("up:pre=");
  Bits pre = c.bits();
  c.expect(";per=");
  std::size_t at = c.pos;
  Bits per = c.bits();
  if (per.empty()) throw SyntaxError("empty period", at);
  return UPSet(std::move(pre), std::move(per));
}

}  // namespace detail

inline UPSet parse_upset(std::string_view text) {
  detail::Cursor c{text};
  UPSet s = detail::parse_upset_at(c);
  if (!c.at_end()) throw SyntaxError("trailing characters", c.pos);
  return s;
}

}  // namespace fg
