#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "filtergames/upset.hpp"

namespace fg {

/// An integer sequence k ↦ f(k) written as an arithmetic expression in `k`
/// with + - * ^ and parentheses, e.g. "2^k", "k^2", "(k+1)^2", "3*k+1".
/// Evaluation is overflow-checked.
class SeqRule {
 public:
  SeqRule() : SeqRule("k") {}
  explicit SeqRule(std::string text) : text_(std::move(text)) {
    detail::Cursor c{text_};
    root_ = parse_expr(c);
    if (!c.at_end()) throw SyntaxError("unexpected character in sequence rule", c.pos);
  }

  Nat operator()(Nat k) const { return root_->eval(k); }
  const std::string& text() const noexcept { return text_; }

 private:
  struct Node {
    char op = 0;  // 0 = literal, 'k' = variable, otherwise binary operator
    Nat value = 0;
    std::shared_ptr<const Node> lhs, rhs;

    Nat eval(Nat k) const {
      switch (op) {
        case 0: return value;
        case 'k': return k;
        default: break;
      }
      const Nat a = lhs->eval(k), b = rhs->eval(k);
      switch (op) {
        case '+':
          if (a > UINT64_MAX - b) throw std::overflow_error("sequence rule overflow");
          return a + b;
        case '-':
          if (b > a) throw std::domain_error("sequence rule went negative");
          return a - b;
        case '*':
          if (a != 0 && b > UINT64_MAX / a) throw std::overflow_error("sequence rule overflow");
          return a * b;
        case '^': {
          Nat r = 1;
          for (Nat i = 0; i < b; ++i) {
            if (a != 0 && r > UINT64_MAX / a) throw std::overflow_error("sequence rule overflow");
            r *= a;
          }
          return r;
        }
      }
      return 0;
    }
  };
  using NodePtr = std::shared_ptr<const Node>;

  static NodePtr binary(char op, NodePtr l, NodePtr r) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  static NodePtr parse_expr(detail::Cursor& c) {
    NodePtr l = parse_term(c);
    while (!c.at_end() && (c.text[c.pos] == '+' || c.text[c.pos] == '-')) {
      char op = c.text[c.pos++];
      l = binary(op, l, parse_term(c));
    }
    return l;
  }
  static NodePtr parse_term(detail::Cursor& c) {
    NodePtr l = parse_factor(c);
    while (c.consume("*")) l = binary('*', l, parse_factor(c));
    return l;
  }
  static NodePtr parse_factor(detail::Cursor& c) {
    NodePtr base = parse_base(c);
    if (c.consume("^")) return binary('^', base, parse_factor(c));
    return base;
  }
  static NodePtr parse_base(detail::Cursor& c) {
    if (c.consume("(")) {
      NodePtr e = parse_expr(c);
      c.expect(")");
      return e;
    }
    auto n = std::make_shared<Node>();
    if (c.consume("k")) {
      n->op = 'k';
      return n;
    }
    n->value = c.number();
    return n;
  }

  std::string text_;
  NodePtr root_;
};

/// Strictly increasing integer ladder π₀ < π₁ < … with π₀ >= 1.
class Ladder {
 public:
  Ladder() : Ladder(SeqRule("2^k")) {}
  explicit Ladder(SeqRule rule) : rule_(std::move(rule)) {}
  explicit Ladder(std::vector<Nat> explicit_points) : points_(std::move(explicit_points)) {}

  Nat operator[](Nat k) const {
    if (!points_.empty()) {
      if (k >= points_.size()) throw std::out_of_range("ladder index beyond explicit points");
      return points_[k];
    }
    return rule_(k);
  }

  /// Number of materializable points (unbounded for rule ladders).
  Nat size() const { return points_.empty() ? UINT64_MAX : points_.size(); }

  /// Throws unless π₀ >= 1 and π is strictly increasing on [0, upto].
  void validate(Nat upto) const {
    if ((*this)[0] < 1) throw std::invalid_argument("ladder must start at >= 1");
    for (Nat k = 0; k < upto && k + 1 < size(); ++k)
      if ((*this)[k + 1] <= (*this)[k])
        throw std::invalid_argument("ladder not strictly increasing at index " + std::to_string(k + 1));
  }

  /// Least k with π_k >= n.
  Nat index_at_or_above(Nat n) const {
    Nat k = 0;
    while ((*this)[k] < n) ++k;
    return k;
  }

  std::string text() const {
    if (points_.empty()) return rule_.text();
    std::string s;
    for (std::size_t i = 0; i < points_.size(); ++i) s += (i ? "," : "") + std::to_string(points_[i]);
    return s;
  }

 private:
  SeqRule rule_;
  std::vector<Nat> points_;
};

/// Partition of ω into finite intervals s_k = [b_k, b_{k+1}). When the rule does
/// not start at 0 an initial block [0, rule(0)) is prepended.
class Partition {
 public:
  explicit Partition(SeqRule boundaries) : rule_(std::move(boundaries)) { shift_ = rule_(0) == 0 ? 0 : 1; }

  Nat boundary(Nat k) const {
    if (shift_ == 0) return rule_(k);
    return k == 0 ? 0 : rule_(k - 1);
  }

  /// Index of the block containing n.
  Nat block_of(Nat n) const {
    Nat hi = 1;
    while (boundary(hi) <= n) hi *= 2;
    Nat lo = 0;  // boundary(lo) <= n < boundary(hi)
    while (hi - lo > 1) {
      Nat mid = lo + (hi - lo) / 2;
      (boundary(mid) <= n ? lo : hi) = mid;
    }
    return lo;
  }

  UPSet block(Nat k) const { return UPSet::interval(boundary(k), boundary(k + 1)); }

  const SeqRule& rule() const noexcept { return rule_; }

 private:
  SeqRule rule_;
  Nat shift_;
};

}  // namespace fg
