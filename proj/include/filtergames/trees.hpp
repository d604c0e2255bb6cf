#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "filtergames/strategies.hpp"
#include "filtergames/transforms.hpp"

namespace fg {

enum class NodeKind { ElementSuccessors, FiniteSetSuccessors };
enum class TreeFamily { F, Fplus };

inline const char* to_string(TreeFamily f) { return f == TreeFamily::F ? "F" : "Fplus"; }

/// Node of a tree: the moves along it. Element trees use singleton blocks.
using Path = std::vector<Block>;

inline std::vector<Nat> support(const Path& p) {
  std::vector<Nat> out;
  for (const auto& b : p) out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::string path_text(const Path& p) {
  std::string s = "<";
  for (std::size_t i = 0; i < p.size(); ++i) {
    s += i ? " " : "";
    s += "{";
    for (std::size_t j = 0; j < p[i].size(); ++j) s += (j ? "," : "") + std::to_string(p[i][j]);
    s += "}";
  }
  return s + ">";
}

/// A rule-labeled tree: node s̄ has successors s̄⌢n for n ∈ X_s̄ (element
/// trees) or s̄⌢a for finite a ⊆ X_s̄. Labels are computed on demand.
struct FTree {
  std::string name;
  NodeKind kind = NodeKind::FiniteSetSuccessors;
  TreeFamily family = TreeFamily::F;
  FilterSpec filter = FilterSpec::frechet();
  std::function<SetValue(const Path&)> label;
  /// Optional closed form of ⋂{X_s̄ : |s̄| = length, support(s̄) ⊆ [0, bound]},
  /// or a subset of it.
  std::function<SetValue(Nat length, Nat bound)> level_meet;

  SetValue operator()(const Path& p) const { return label(p); }

  /// Whether `a` may follow node p.
  bool child_ok(const Path& p, const Block& a) const {
    if (kind == NodeKind::ElementSuccessors && a.size() != 1) return false;
    SetValue x = label(p);
    return std::all_of(a.begin(), a.end(), [&](Nat n) { return contains(x, n); });
  }

  /// First step at which the path leaves the tree.
  std::optional<Nat> leaves_at(const Path& p) const {
    Path prefix;
    for (Nat i = 0; i < p.size(); ++i) {
      if (!child_ok(prefix, p[i])) return i;
      prefix.push_back(p[i]);
    }
    return std::nullopt;
  }

  /// Label lies in the declared family.
  bool label_sound(const Path& p, Depth depth = Depth{}) const {
    Region r = classify(filter, label(p), depth);
    return family == TreeFamily::F ? r.in_f() : r.in_plus();
  }
};

/// Tree of finite sets labeled basis(f, n) at level n.
inline FTree build_chain_tree(const FilterSpec& f) {
  FTree t;
  t.name = "chain:" + f.text();
  t.kind = NodeKind::FiniteSetSuccessors;
  t.family = TreeFamily::F;
  t.filter = f;
  t.label = [f](const Path& p) { return basis(f, p.size()); };
  t.level_meet = [f](Nat length, Nat) { return basis(f, length); };
  return t;
}

namespace detail {

/// Least k with every element of `sup` below π_k.
inline Nat covering_index(const Ladder& pi, const std::vector<Nat>& sup) {
  return sup.empty() ? 0 : pi.index_at_or_above(sup.back() + 1);
}

}  // namespace detail

/// Tree of finite sets labeled [π_{k+1}, ∞), k least with the node's support
/// inside [0, π_k). Any branch skips [π_k, π_{k+1}) at each step.
inline FTree build_interval_tree(const Ladder& pi, const FilterSpec& f = FilterSpec::frechet()) {
  pi.validate(1);
  FTree t;
  t.name = "interval:" + pi.text();
  t.kind = NodeKind::FiniteSetSuccessors;
  t.family = TreeFamily::F;
  t.filter = f;
  t.label = [pi](const Path& p) -> SetValue { return UPSet::tail(pi[detail::covering_index(pi, support(p)) + 1]); };
  // the meet over nodes with support in [0, bound] is the label of the largest such support
  t.level_meet = [pi](Nat, Nat bound) -> SetValue { return UPSet::tail(pi[pi.index_at_or_above(bound + 1) + 1]); };
  return t;
}

/// Tree with the same label X at every node.
inline FTree constant_tree(SetValue x, NodeKind kind = NodeKind::ElementSuccessors,
                           const FilterSpec& f = FilterSpec::frechet(), TreeFamily family = TreeFamily::F) {
  FTree t;
  t.name = "const:" + format(x);
  t.kind = kind;
  t.family = family;
  t.filter = f;
  t.label = [x](const Path&) { return x; };
  t.level_meet = [x](Nat, Nat) { return x; };
  return t;
}

// ---- branches ---------------------------------------------------------------

/// A finite branch prefix; `union_set` is set when the branch follows a known
/// set element by element.
struct Branch {
  Path path;
  std::optional<SetValue> union_set;
  std::vector<Nat> elements() const { return support(path); }
};

/// Follows y through the tree: each step plays the next element of y (as a
/// singleton) that the current label admits. The union is y itself while y
/// stays inside every label along the way.
inline Branch follow_set(const FTree& t, const SetValue& y, Nat depth) {
  Branch b;
  Nat from = 0;
  bool exact = true;
  for (Nat i = 0; i < depth; ++i) {
    SetValue x = t(b.path);
    auto e = detail::least_member(y, x, {}, from);
    if (!e) break;
    auto plain = next_element(y, from);
    exact = exact && plain == e;
    b.path.push_back(Block{*e});
    from = *e + 1;
  }
  if (exact) b.union_set = y;
  return b;
}

/// Marks "⊆* label at level i" for i < levels along the chain of labels of
/// the branch's prefixes. Needs a schematic union.
inline std::vector<std::pair<Nat, bool>> containment_audit(const FTree& t, const Branch& b, Nat levels) {
  std::vector<std::pair<Nat, bool>> out;
  if (!b.union_set) return out;
  Path prefix;
  for (Nat i = 0; i < levels; ++i) {
    out.emplace_back(i, almost_subset(*b.union_set, t(prefix)));
    if (i < b.path.size()) prefix.push_back(b.path[i]);
  }
  return out;
}

// ---- non-meager P-filter branch ---------------------------------------------

/// Witness callbacks for the branch construction. `p` returns Y ⊆* A_k for
/// every k; `m` returns indices k_0 < k_1 < … with Y ∩ [n_{k_ℓ}, n_{k_ℓ+1}) = ∅.
struct NmpOracles {
  std::function<SetValue(const std::vector<SetValue>& a, const std::vector<Nat>& n)> p;
  std::function<std::vector<Nat>(const SetValue& y, const std::vector<Nat>& n)> m;
};

/// Indices of intervals [n_k, n_{k+1}) missed by y, every other one taken so
/// consecutive picks are at least two apart.
inline std::vector<Nat> missed_intervals(const SetValue& y, const std::vector<Nat>& n) {
  std::vector<Nat> out;
  for (Nat k = 0; k + 1 < n.size(); ++k) {
    if (!out.empty() && k < out.back() + 2) continue;
    auto e = next_element(y, n[k], n[k + 1] - n[k]);
    if (!e || *e >= n[k + 1]) out.push_back(k);
  }
  return out;
}

struct NmpResult {
  bool ok = false;
  std::string error;
  std::optional<Nat> failing_index;
  std::vector<Nat> n;        // after reindexing
  std::vector<Nat> reindex;  // positions kept from the raw sequence
  std::vector<Nat> k;        // intervals missed by Y
  Branch branch;
  std::vector<std::string> audit;
};

namespace detail {

inline std::vector<Nat> elements_in(const SetValue& y, Nat lo, Nat hi) {
  std::vector<Nat> out;
  for (auto e = next_element(y, lo, hi > lo ? hi - lo : 1); e && *e < hi; e = next_element(y, *e + 1, hi - *e))
    out.push_back(*e);
  return out;
}

inline NmpResult nmp_fail(NmpResult r, std::string why, std::optional<Nat> index) {
  r.ok = false;
  r.error = std::move(why);
  r.failing_index = index;
  return r;
}

/// Meet of all labels at nodes of the given length with support in [0, bound],
/// enumerated over singleton and empty blocks drawn from `a` when the tree has
/// no closed form.
inline SetValue meet_at_length(const FTree& t, Nat length, Nat bound, const std::vector<SetValue>& a, Nat& budget) {
  if (t.level_meet) return t.level_meet(length, bound);
  SetValue meet = t(Path{});
  Path p;
  std::function<void()> dfs = [&] {
    if (budget == 0) throw std::length_error("label enumeration budget exhausted");
    --budget;
    if (p.size() == length) {
      meet = set_and(meet, t(p));
      return;
    }
    Nat j = p.size();
    Nat from = 0;
    for (const Block& b : p)
      if (!b.empty()) from = b.back() + 1;
    p.push_back(Block{});
    dfs();
    for (Nat e : elements_in(a[j], from, bound + 1)) {
      p.back() = Block{e};
      dfs();
    }
    p.pop_back();
  };
  dfs();
  return meet;
}

}  // namespace detail

/// Branch through a tree of finite sets whose union is Y: n_{k+1} is the next
/// element of A_k, A_{k+1} = A_k ∩ ⋂{X_⟨s_0,…,s_i⟩ : i ≤ k, s_j ⊆ A_j ∩ [0, n_{k+1}]};
/// then Y from the P-oracle, an explicit reindexing so Y ∖ n_{k+1} ⊆ A_k, the
/// missed intervals from the M-oracle, and s_ℓ = Y ∩ [n_{k_ℓ}, n_{k_{ℓ+1}}).
/// Each s_ℓ ⊆ X_⟨s_0,…,s_{ℓ-1}⟩ is checked literally.
inline NmpResult nmp_branch(const FTree& t, const NmpOracles& oracles, Nat depth, Nat levels = 0,
                            Nat budget = 100'000) {
  NmpResult r;
  if (levels == 0) levels = 2 * depth + 4;
  std::vector<Nat> n{0};
  std::vector<SetValue> a{t(Path{})};
  try {
    for (Nat k = 0; k + 1 < levels; ++k) {
      auto next = next_element(a[k], n[k] + 1);
      if (!next) return detail::nmp_fail(r, "A_" + std::to_string(k) + " has no element above n_k", k);
      n.push_back(*next);
      SetValue meet = a[k];
      for (Nat len = 1; len <= k + 1; ++len) meet = set_and(meet, detail::meet_at_length(t, len, n.back(), a, budget));
      a.push_back(meet);
    }
  } catch (const std::length_error& e) {
    return detail::nmp_fail(r, e.what(), std::nullopt);
  }

  SetValue y = oracles.p(a, n);
  for (Nat k = 0; k < levels; ++k)
    if (!almost_subset(y, a[k]))
      return detail::nmp_fail(r, "Y is not almost contained in A_" + std::to_string(k), k);

  // reindex: keep j_0 = 0 and the least j_{k+1} with Y ∖ n_{j_{k+1}} ⊆ A_{j_k}
  r.reindex = {0};
  while (true) {
    Nat j = r.reindex.back();
    Nat from = detail::subset_from(y, a[j]).value_or(0);
    Nat next = j + 1;
    while (next < n.size() && n[next] < from) ++next;
    if (next >= n.size()) break;
    r.reindex.push_back(next);
  }
  std::vector<SetValue> a2;
  for (Nat j : r.reindex) {
    r.n.push_back(n[j]);
    a2.push_back(a[j]);
  }
  r.audit.push_back("reindexed to " + std::to_string(r.n.size()) + " of " + std::to_string(n.size()) + " points");

  r.k = oracles.m(y, r.n);
  if (r.k.size() < depth + 1)
    return detail::nmp_fail(r, "M-oracle returned " + std::to_string(r.k.size()) + " intervals, need " +
                                   std::to_string(depth + 1), r.k.size());
  for (Nat l = 0; l < r.k.size(); ++l) {
    Nat k = r.k[l];
    if (k + 1 >= r.n.size() || (l && k <= r.k[l - 1]))
      return detail::nmp_fail(r, "M-oracle index " + std::to_string(l) + " out of order or range", l);
    if (!detail::elements_in(y, r.n[k], r.n[k + 1]).empty())
      return detail::nmp_fail(r, "Y meets interval " + std::to_string(k), l);
  }

  for (Nat l = 0; l < depth; ++l) {
    Block s = detail::elements_in(y, r.n[r.k[l]], r.n[r.k[l + 1]]);
    if (!t.child_ok(r.branch.path, s))
      return detail::nmp_fail(r, "block " + std::to_string(l) + " leaves the label of its prefix", l);
    bool in_a = std::all_of(s.begin(), s.end(), [&](Nat e) { return contains(a2[r.k[l]], e); });
    r.audit.push_back("s_" + std::to_string(l) + " inside X of its prefix" + (in_a ? ", inside A_k" : ""));
    r.branch.path.push_back(std::move(s));
  }
  r.ok = true;
  return r;
}

// ---- trees from strategies for II -------------------------------------------

/// Tree extracted from a strategy for II in an element game with mover ℱ: the
/// label at s̄ = ⟨s_0, …, s_i⟩ is {$(X^{s_0}_∅, …, X^{s_i}_{⟨…⟩}, X) : X ∈ ℱ} and
/// each child k remembers a set X^k_{s̄} ∈ ℱ with $(…, X^k_{s̄}) = k.
/// Materialized to `depth` levels and `width` children per node.
struct StrategyTree {
  struct Node {
    SetValue label;
    std::map<Nat, SetValue> remembered;  // child -> set producing it
  };

  FTree tree;
  std::map<std::vector<Nat>, Node> nodes;
  bool approximate = false;

  static std::vector<Nat> key(const Path& p) {
    std::vector<Nat> k;
    for (const auto& b : p) k.push_back(b.front());
    return k;
  }

  /// History of the play along a node, with remembered sets as I's moves.
  History history(const std::vector<Nat>& node) const {
    History h;
    std::vector<Nat> prefix;
    for (Nat n : node) {
      h.offers.push_back(nodes.at(prefix).remembered.at(n));
      h.replies.push_back(n);
      prefix.push_back(n);
    }
    return h;
  }

  /// Materialized root-to-leaf paths.
  std::vector<std::vector<Nat>> leaves() const {
    std::vector<std::vector<Nat>> out;
    for (const auto& [k, node] : nodes)
      if (node.remembered.empty()) out.push_back(k);
    return out;
  }
};

/// Exact mode asks the strategy for its image and preimages; approximate mode
/// (`enumeration` > 0) tries the first M basis sets, and the labels are the
/// finite sets of answers found.
inline StrategyTree tree_from_strategy_ii(const StrategyIIPtr& s, const FilterSpec& f, Nat depth, Nat width,
                                          Nat enumeration = 0) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  StrategyTree out;
  out.approximate = enumeration > 0;
  GameConfig source = GameConfig::standard(Mover::F, MoveKind::Element, Payoff::Fplus, f);
  DualI dual(s, source, enumeration > 0 ? DualMode::approx(enumeration) : DualMode::exact_image());

  std::function<void(std::vector<Nat>&, const History&)> grow = [&](std::vector<Nat>& node, const History& h) {
    StrategyTree::Node n;
    n.label = dual.image(h);
    if (node.size() + 1 < depth) {
      std::vector<Nat> children;
      for (auto e = next_element(n.label, 0); e && children.size() < width; e = next_element(n.label, *e + 1))
        children.push_back(*e);
      for (Nat c : children) {
        std::optional<SetValue> x;
        if (enumeration == 0) {
          x = s->preimage(h, f, c);
        } else {
          for (Nat i = 0; i < enumeration && !x; ++i) {
            SetValue b = detail::mover_basis(source, i);
            auto r = detail::try_move(*s, h, b);
            if (r && std::get<Nat>(*r) == c) x = b;
          }
        }
        if (x && f.plane()) x = as_grid(*x);
        if (!x) throw StrategyError("no preimage for " + std::to_string(c) + " at node " + std::to_string(node.size()));
        n.remembered.emplace(c, *x);
      }
    }
    auto remembered = n.remembered;
    out.nodes.emplace(node, std::move(n));
    for (const auto& [c, x] : remembered) {
      History next = h;
      next.offers.push_back(x);
      next.replies.push_back(c);
      node.push_back(c);
      grow(node, next);
      node.pop_back();
    }
  };
  std::vector<Nat> root;
  grow(root, History{});

  out.tree.name = "fromstrategy:" + s->name();
  out.tree.kind = NodeKind::ElementSuccessors;
  out.tree.family = TreeFamily::Fplus;
  out.tree.filter = f;
  auto nodes = std::make_shared<const std::map<std::vector<Nat>, StrategyTree::Node>>(out.nodes);
  out.tree.label = [nodes](const Path& p) -> SetValue {
    auto it = nodes->find(StrategyTree::key(p));
    if (it == nodes->end()) throw std::out_of_range("node " + path_text(p) + " is not materialized");
    return it->second.label;
  };
  return out;
}

/// Replays every materialized leaf through the strategy with the remembered
/// sets; returns the first node that does not reproduce its own path.
inline std::optional<std::vector<Nat>> replay_audit(const StrategyTree& t, const StrategyII& s) {
  for (const auto& leaf : t.leaves()) {
    History h = t.history(leaf);
    History play;
    for (Nat i = 0; i < leaf.size(); ++i) {
      Reply r = s.move(play, h.offers[i]);
      if (std::get<Nat>(r) != leaf[i]) return leaf;
      play.offers.push_back(h.offers[i]);
      play.replies.push_back(r);
    }
  }
  return std::nullopt;
}

// ---- bounded branch search ----------------------------------------------------

enum class BranchStatus { Open, CertifiedIn, CertifiedOut };

inline const char* to_string(BranchStatus s) {
  switch (s) {
    case BranchStatus::Open: return "open";
    case BranchStatus::CertifiedIn: return "certified-in-family";
    case BranchStatus::CertifiedOut: return "certified-out";
  }
  return "?";
}

struct BranchReport {
  Path path;
  BranchStatus status = BranchStatus::Open;
  std::vector<std::string> marks;
};

/// Looks at a prefix whose last step was just taken; a decided status prunes.
using BranchCertifier = std::function<std::pair<BranchStatus, std::string>(const FTree&, const Path&)>;

inline BranchCertifier no_certifier() {
  return [](const FTree&, const Path&) { return std::pair{BranchStatus::Open, std::string{}}; };
}

/// Marks the ladder interval each step of an interval-tree branch skips, and
/// checks that nothing in the branch meets it.
inline BranchCertifier interval_gap_certifier(const Ladder& pi) {
  return [pi](const FTree&, const Path& p) {
    Path before(p.begin(), p.end() - 1);
    Nat k = detail::covering_index(pi, support(before));
    bool clear = true;
    for (Nat e : support(p)) clear = clear && (e < pi[k] || e >= pi[k + 1]);
    std::string mark = "misses interval [" + std::to_string(pi[k]) + ", " + std::to_string(pi[k + 1]) + ")";
    if (!clear) return std::pair{BranchStatus::CertifiedOut, "meets [" + std::to_string(pi[k]) + ", " +
                                                             std::to_string(pi[k + 1]) + ")"};
    return std::pair{BranchStatus::Open, mark};
  };
}

/// Enumerates branch prefixes to `depth` steps. Children are the singletons of
/// the first `width` elements of each label.
inline std::vector<BranchReport> bounded_branch_search(const FTree& t, Nat depth, Nat width,
                                                       const BranchCertifier& certify = no_certifier()) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  std::vector<BranchReport> out;
  BranchReport cur;
  std::function<void()> dfs = [&] {
    if (cur.path.size() == depth - 1) {
      out.push_back(cur);
      return;
    }
    SetValue x = t(cur.path);
    Nat taken = 0;
    for (auto e = next_element(x, 0); e && taken < width; e = next_element(x, *e + 1), ++taken) {
      cur.path.push_back(Block{*e});
      auto [status, mark] = certify(t, cur.path);
      if (!mark.empty()) cur.marks.push_back(mark);
      if (status != BranchStatus::Open) {
        BranchReport r = cur;
        r.status = status;
        out.push_back(std::move(r));
      } else {
        dfs();
      }
      if (!mark.empty()) cur.marks.pop_back();
      cur.path.pop_back();
    }
    if (taken == 0) out.push_back(cur);
  };
  dfs();
  return out;
}

// ---- playing along a tree ----------------------------------------------------------

/// I plays the label of the node reached by II's moves.
class TreeStrategyI final : public StrategyI {
 public:
  explicit TreeStrategyI(FTree t) : t_(std::move(t)) {}

  SetValue move(const History& h) const override {
    Path p;
    for (const auto& r : h.replies) p.push_back(elements_of(r));
    if (auto i = t_.leaves_at(p)) throw StrategyError("history leaves the tree at step " + std::to_string(*i));
    return t_(p);
  }
  std::string name() const override { return "tree:" + t_.name; }

 private:
  FTree t_;
};

/// II walks the tree: the least element of the current label inside I's
/// move, as an element or a singleton depending on the game.
class TreeStrategyII final : public StrategyII {
 public:
  TreeStrategyII(FTree t, MoveKind kind) : t_(std::move(t)), kind_(kind) {}

  Reply move(const History& h, const SetValue& x) const override {
    Path p;
    for (const auto& r : h.replies) p.push_back(elements_of(r));
    auto n = detail::least_member(t_(p), x, {}, 0);
    if (!n) throw StrategyError("no child of " + path_text(p) + " inside I's move");
    if (kind_ == MoveKind::FiniteBlock) return Block{*n};
    return *n;
  }
  std::string name() const override { return "tree:" + t_.name; }

 private:
  FTree t_;
  MoveKind kind_;
};


}  // namespace fg
