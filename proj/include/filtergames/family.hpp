#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "filtergames/games.hpp"

namespace fg {

/// An indexed family ⟨X_n : n ∈ ω⟩ of sets, given by a rule.
struct SetFamily {
  std::string name;
  std::function<SetValue(Nat)> at;

  SetValue operator()(Nat n) const { return at(n); }

  static SetFamily columns() {
    return {"columns", [](Nat n) -> SetValue { return GridSet::lift_rows(UPSet::all(), n); }};
  }
  static SetFamily constant(SetValue x) {
    return {"const:" + format(x), [x](Nat) { return x; }};
  }
  static SetFamily list(std::string name, std::vector<SetValue> xs) {
    if (xs.empty()) throw std::invalid_argument("empty family");
    return {std::move(name), [xs](Nat n) { return xs[std::min<std::size_t>(n, xs.size() - 1)]; }};
  }
};

/// A family ⟨X_n⟩ where each X_n is an infinite collection of finite sets
/// {x_{n,0}, x_{n,1}, …}.
struct BlockFamily {
  std::string name;
  std::function<Block(Nat n, Nat j)> at;
};

/// "columns", "omega", or "const:<set>".
inline SetFamily parse_family(std::string_view text) {
  if (text == "columns") return SetFamily::columns();
  if (text == "omega") return SetFamily::constant(UPSet::all());
  if (text.starts_with("const:")) return SetFamily::constant(parse_named_set(text.substr(6)));
  throw SyntaxError("unknown family '" + std::string(text) + "'", 0);
}

/// σ(k) = number of trailing one bits of k+1; every value is hit infinitely often.
inline Nat sigma(Nat k) {
  Nat v = k + 1, n = 0;
  while (v & 1) {
    v >>= 1;
    ++n;
  }
  return n;
}

}  // namespace fg
