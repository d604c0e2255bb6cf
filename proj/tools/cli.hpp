#pragma once

#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "filtergames/filtergames.hpp"
#include "filtergames/report.hpp"

namespace fg::cli {

/// Exit codes: 0 success, 1 forfeit, refuted check or replay mismatch (full report still
/// written), 2 usage error.
enum Exit : int { kOk = 0, kRefuted = 1, kUsage = 2 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GameOptions {
  std::string game = "fr,elem,fplus";
  std::string variant = "standard";
  std::string filter = "frechet";
  std::string I, II;
  std::string certifier = "auto";
  Nat rounds = 20;
  std::uint64_t seed = 0;
  unsigned depth = 8;
  Nat tree_depth = 6, tree_width = 4;

  void add_to(CLI::App* app, bool strategies = true) {
    app->add_option("--game", game, "mover,move,payoff, e.g. fr,elem,fplus")->capture_default_str();
    app->add_option("--variant", variant, "standard or g1")
        ->check(CLI::IsMember({"standard", "g1"}))
        ->capture_default_str();
    app->add_option("--filter", filter, "frechet, dyadic, frtensorfr, finitegen:<sets>, product:<inner>")
        ->capture_default_str();
    if (strategies) {
      app->add_option("--I", I, "strategy spec for I");
      app->add_option("--II", II, "strategy spec for II");
    }
    app->add_option("--rounds", rounds, "rounds to play")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--seed", seed, "play seed")->capture_default_str();
    app->add_option("--depth", depth, "classification depth")->check(CLI::PositiveNumber)->capture_default_str();
  }

  SpecContext context() const {
    FilterSpec f = make_filter(filter);
    GameConfig c = variant == "g1" ? GameConfig::g1(f) : parse_game(game, f);
    c.depth = Depth{depth};
    return SpecContext{c, tree_depth, tree_width};
  }
};

/// Writes JSON lines to --out when given, otherwise to the command's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot write '" + path + "'");
      out_ = file_.get();
    }
  }
  void line(const json& j) { *out_ << j.dump() << '\n'; }
  void lines(const std::vector<json>& js) {
    for (const auto& j : js) line(j);
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

// ---- certifiers ---------------------------------------------------------------

namespace detail {

inline std::optional<std::string_view> after(std::string_view spec, std::string_view head) {
  if (!spec.starts_with(head)) return std::nullopt;
  return spec.substr(head.size());
}

inline Certifier named_certifier(const std::string& name, const std::string& I, const std::string& II) {
  std::optional<Partition> blocks;
  std::optional<Ladder> pi;
  std::optional<SetFamily> family;
  std::optional<UPSet> fixed;
  if (auto r = after(I, "partition:b=")) blocks = Partition(SeqRule(std::string(*r)));
  if (auto r = after(II, "interval:pi=")) pi = Ladder(SeqRule(std::string(*r)));
  if (auto r = after(II, "sigma:family=")) family = parse_family(*r);
  if (auto r = after(II, "fixed:")) {
    SetValue x = parse_named_set(*r);
    if (auto* u = std::get_if<UPSet>(&x)) fixed = *u;
  }
  try {
    return parse_certifier(name, blocks, pi, family, fixed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

/// The certifier matching the strategies in play, or ForfeitOnly when none
/// applies to this game.
inline Certifier auto_certifier(const GameConfig& c, const std::string& I, const std::string& II) {
  std::vector<std::string> names;
  if (I.starts_with("partition:")) names.push_back("partition");
  if (II.starts_with("interval:")) names.push_back("interval");
  if (II.starts_with("sigma:")) names.push_back("sigma");
  if (II.starts_with("fixed:")) names.push_back("fixed");
  if (I.starts_with("chain")) names.push_back("chain");
  Transcript probe;
  probe.config = c;
  probe.moves.push_back({0, Player::I, SetValue(UPSet::all()), true});
  probe.moves.push_back({0, Player::II, c.move == MoveKind::Element ? MoveValue(Nat{0}) : MoveValue(Block{0}), true});
  for (const auto& n : names) {
    Certifier cert = named_certifier(n, I, II);
    try {
      certify(probe, cert);
      return cert;
    } catch (const IncompatibleCertifier&) {
    } catch (const std::exception&) {
      return cert;  // compatible; the probe play just is not meaningful
    }
  }
  return cert::ForfeitOnly{};
}

inline Certifier choose_certifier(const GameOptions& o, const GameConfig& c) {
  if (o.certifier == "auto") return auto_certifier(c, o.I, o.II);
  return named_certifier(o.certifier, o.I, o.II);
}

inline int exit_for(const Transcript& t) { return t.violation ? kRefuted : kOk; }

inline json header(const std::string& verb, const GameOptions& o, const GameConfig& c, const std::string& certifier,
                   std::uint64_t seed) {
  return {{"type", "header"},
          {"verb", verb},
          {"game", c.game_text()},
          {"variant", c.variant == Variant::G1 ? "g1" : "standard"},
          {"filter", c.filter.text()},
          {"I", o.I},
          {"II", o.II},
          {"rounds", o.rounds},
          {"seed", seed},
          {"depth", o.depth},
          {"certifier", certifier}};
}

inline Verdict certify_checked(const Transcript& t, const Certifier& cert) {
  try {
    return certify(t, cert);
  } catch (const IncompatibleCertifier& e) {
    throw UsageError(e.what());
  }
}

}  // namespace detail

// ---- simulate -----------------------------------------------------------------

struct SimulateResult {
  std::vector<json> lines;
  int code = kOk;
};

inline SimulateResult simulate_one(const GameOptions& o, std::uint64_t seed) {
  SpecContext ctx = o.context();
  const GameConfig& c = ctx.game;
  if (o.I.empty() || o.II.empty()) throw UsageError("simulate needs --I and --II");
  Transcript t;
  if (c.variant == Variant::G1) {
    t = run_g1(c, *parse_g1_i(o.I, ctx), *parse_g1_ii(o.II, ctx), o.rounds, seed);
  } else {
    t = run_bounded(c, *parse_strategy_i(o.I, ctx), *parse_strategy_ii(o.II, ctx), o.rounds, seed);
  }
  Certifier cert = c.variant == Variant::G1 ? Certifier(cert::ForfeitOnly{}) : detail::choose_certifier(o, c);
  Verdict v = detail::certify_checked(t, cert);
  SimulateResult r;
  r.lines.push_back(detail::header("simulate", o, c, certifier_name(cert), seed));
  for (auto& j : transcript_lines(t)) r.lines.push_back(std::move(j));
  r.lines.push_back(verdict_json(v, t));
  r.code = detail::exit_for(t);
  return r;
}

/// Runs `plays` seeded plays (seed, seed+1, …) concurrently and writes them
/// in seed order.
inline int simulate(const GameOptions& o, Nat plays, Sink& sink) {
  o.context();  // surface usage errors before fanning out
  std::vector<std::future<SimulateResult>> jobs;
  for (Nat i = 0; i < plays; ++i)
    jobs.push_back(std::async(std::launch::async, [&o, i] { return simulate_one(o, o.seed + i); }));
  int code = kOk;
  for (auto& j : jobs) {
    SimulateResult r = j.get();
    sink.lines(r.lines);
    code = std::max(code, r.code);
  }
  return code;
}

// ---- interactive play -----------------------------------------------------------

namespace detail {

inline std::optional<Reply> parse_reply(const std::string& line, MoveKind kind) {
  std::vector<Nat> nums;
  std::string token;
  std::stringstream ss(line);
  while (std::getline(ss, token, ' ')) {
    std::stringstream parts(token);
    std::string piece;
    while (std::getline(parts, piece, ',')) {
      if (piece.empty()) continue;
      if (piece.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
      try {
        nums.push_back(std::stoull(piece));
      } catch (const std::exception&) {
        return std::nullopt;
      }
    }
  }
  if (nums.empty()) return std::nullopt;
  if (kind == MoveKind::Element) {
    if (nums.size() != 1) return std::nullopt;
    return Reply{nums[0]};
  }
  return Reply{Block(nums)};
}

}  // namespace detail

/// Alternates prompts (on the diagnostic stream) with the machine's moves. An
/// illegal human move is re-prompted and counted; end of input aborts with
/// the partial transcript.
inline int interactive(const GameOptions& o, const std::string& human, std::istream& in, std::ostream& prompt,
                       Sink& sink) {
  SpecContext ctx = o.context();
  const GameConfig& c = ctx.game;
  if (c.variant != Variant::Standard) throw UsageError("interactive play supports standard games only");
  const bool human_i = human == "I";
  StrategyIPtr machine_i;
  StrategyIIPtr machine_ii;
  if (human_i) {
    if (o.II.empty()) throw UsageError("--human=I needs --II for the machine");
    machine_ii = parse_strategy_ii(o.II, ctx);
  } else {
    if (o.I.empty()) throw UsageError("--human=II needs --I for the machine");
    machine_i = parse_strategy_i(o.I, ctx);
  }
  Certifier cert = detail::choose_certifier(o, c);
  GameOptions shown = o;
  (human_i ? shown.I : shown.II) = "human";

  Play play(c, o.seed, o.rounds);
  Nat reprompts = 0;
  bool aborted = false;
  auto ask = [&](const std::string& question, auto&& accept) {
    std::string line;
    while (true) {
      prompt << question << std::flush;
      if (!std::getline(in, line)) {
        prompt << '\n';
        aborted = true;
        return;
      }
      std::optional<std::string> problem = accept(line);
      if (!problem) return;
      prompt << "illegal: " << *problem << '\n';
      ++reprompts;
    }
  };

  while (!play.finished() && !aborted) {
    const std::string round = "round " + std::to_string(play.round());
    if (human_i) {
      ask(round + ", I's move (set): ", [&](const std::string& line) -> std::optional<std::string> {
        SetValue x;
        try {
          x = parse_named_set(line);
        } catch (const std::exception& e) {
          return std::string("cannot read a set: ") + e.what();
        }
        if (auto p = play.check_offer(x)) return p;
        play.offer(std::move(x));
        return std::nullopt;
      });
      if (aborted || play.finished()) break;
      try {
        Reply r = machine_ii->move(play.history(), play.current_offer());
        prompt << "II plays " << move_json(elements_of(r)).dump() << '\n';
        play.reply(std::move(r));
      } catch (const std::exception& e) {
        play.forfeit(Player::II, std::string("strategy failed: ") + e.what());
      }
    } else {
      try {
        play.offer(machine_i->move(play.history()));
      } catch (const std::exception& e) {
        play.forfeit(Player::I, std::string("strategy failed: ") + e.what());
      }
      if (play.finished()) break;
      prompt << "I plays " << format(play.current_offer()) << '\n';
      ask(round + ", II's move: ", [&](const std::string& line) -> std::optional<std::string> {
        auto r = detail::parse_reply(line, c.move);
        if (!r) return c.move == MoveKind::Element ? "expected one natural number" : "expected natural numbers";
        if (auto p = play.check_reply(*r)) return p;
        play.reply(std::move(*r));
        return std::nullopt;
      });
    }
  }

  const Transcript& t = play.transcript();
  sink.line(detail::header("play", shown, c, certifier_name(cert), o.seed));
  sink.lines(transcript_lines(t));
  if (aborted) {
    sink.line({{"type", "abort"}, {"reason", "end of input"}, {"round", play.round()}, {"reprompts", reprompts}});
    return kRefuted;
  }
  Verdict v = detail::certify_checked(t, cert);
  sink.line(verdict_json(v, t));
  sink.line({{"type", "session"}, {"reprompts", reprompts}});
  return detail::exit_for(t);
}

// ---- replay ---------------------------------------------------------------------

/// Re-certifies every saved play (a header line through its verdict line) and
/// reports whether the verdict matches.
inline int replay(std::istream& in, Sink& sink) {
  std::vector<json> lines;
  std::string text;
  while (std::getline(in, text)) {
    if (text.empty()) continue;
    try {
      lines.push_back(json::parse(text));
    } catch (const json::parse_error& e) {
      throw UsageError(std::string("replay input is not JSON lines: ") + e.what());
    }
  }
  int code = kOk;
  Nat plays = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].value("type", "") != "header") continue;
    std::size_t end = i + 1;
    while (end < lines.size() && lines[end].value("type", "") != "header") ++end;
    std::vector<json> body(lines.begin() + i + 1, lines.begin() + end);
    const json& h = lines[i];
    Transcript t = transcript_from_lines(h, body);
    Certifier cert = detail::named_certifier(h.at("certifier").get<std::string>(), h.value("I", ""), h.value("II", ""));
    Verdict v = detail::certify_checked(t, cert);
    json fresh = verdict_json(v, t);
    std::optional<json> saved;
    for (const auto& j : body)
      if (j.value("type", "") == "verdict") saved = j;
    bool match = saved && (*saved)["verdict"] == fresh["verdict"] && (*saved)["certificate"] == fresh["certificate"] &&
                 (*saved)["detail"] == fresh["detail"] && (*saved)["outcome"] == fresh["outcome"];
    sink.line({{"type", "replay"}, {"seed", h.at("seed")}, {"saved", saved ? (*saved)["verdict"] : json(nullptr)},
               {"match", match}});
    sink.line(fresh);
    code = std::max(code, match ? detail::exit_for(t) : int(kRefuted));
    ++plays;
  }
  if (plays == 0) throw UsageError("replay input has no header line");
  return code;
}

// ---- transform ------------------------------------------------------------------

struct TransformOptions {
  std::string kind, direction, opponent;
  Nat enumeration = 0;
  Nat bound = 8;
};

namespace detail {

inline json cosim_json(const CoSimulation& c) {
  return {{"type", "cosim"},
          {"finite_outcome", c.finite.outcome()},
          {"g1_integers", c.g1.integers_of(Player::II)},
          {"off_board", c.off_board},
          {"finite_legal", c.finite.legal()},
          {"outcomes_equal", c.outcomes_equal}};
}

inline void tagged(Sink& sink, const Transcript& t, const std::string& board) {
  for (auto j : transcript_lines(t)) {
    j["board"] = board;
    sink.line(j);
  }
}

}  // namespace detail

inline int transform(const GameOptions& o, const TransformOptions& x, Sink& sink) {
  SpecContext ctx = o.context();
  const GameConfig& c = ctx.game;
  json head{{"type", "transform"}, {"kind", x.kind},     {"direction", x.direction}, {"game", c.game_text()},
            {"filter", c.filter.text()}, {"I", o.I},     {"II", o.II},               {"opponent", x.opponent},
            {"rounds", o.rounds},        {"seed", o.seed}};

  if (x.kind == "dual") {
    DualDirection d = parse_direction(x.direction);
    GameConfig target = dual_config(c);
    SpecContext tctx = ctx;
    tctx.game = target;
    if (x.opponent.empty()) throw UsageError("dual needs --opponent for the dual game");
    head["dual_game"] = target.game_text();
    sink.line(head);
    ShadowPlay sp;
    Transcript dual;
    if (d == DualDirection::IItoIPlus || d == DualDirection::IIPlusToI) {
      if (o.II.empty()) throw UsageError("this direction dualizes --II");
      DualMode mode = x.enumeration ? DualMode::approx(x.enumeration) : DualMode::exact_image();
      auto s = dualize(parse_strategy_ii(o.II, ctx), c, d, mode);
      dual = run_bounded(target, *s, *parse_strategy_ii(x.opponent, tctx), o.rounds, o.seed);
      sp = shadow_play(*s, dual);
    } else {
      if (o.I.empty()) throw UsageError("this direction dualizes --I");
      auto s = dualize(parse_strategy_i(o.I, ctx), c, d);
      dual = run_bounded(target, *parse_strategy_i(x.opponent, tctx), *s, o.rounds, o.seed);
      sp = shadow_play(*s, dual);
    }
    detail::tagged(sink, dual, "dual");
    detail::tagged(sink, sp.shadow, "shadow");
    json s{{"type", "shadow"},
           {"dual_legal", dual.legal()},
           {"shadow_legal", sp.shadow.legal()},
           {"move_identical", sp.move_identical}};
    s["flagged_round"] = sp.flagged_round ? json(*sp.flagged_round) : json(nullptr);
    sink.line(s);
    bool ok = !sp.flagged_round && sp.shadow.legal() && sp.move_identical;
    return ok ? kOk : kRefuted;
  }

  if (x.kind == "singleton") {
    if (c.move != MoveKind::FiniteBlock) throw UsageError("singleton reduction starts from a block game");
    if (o.II.empty() || x.opponent.empty()) throw UsageError("singleton needs --II and --opponent");
    GameConfig elem = with_move(c, MoveKind::Element);
    SpecContext ectx = ctx;
    ectx.game = elem;
    SingletonReduced s(parse_strategy_ii(o.II, ctx));
    Transcript t = run_bounded(elem, *parse_strategy_i(x.opponent, ectx), s, o.rounds, o.seed);
    sink.line(head);
    detail::tagged(sink, t, "reduced");
    sink.line({{"type", "singleton"}, {"legal", t.legal()}, {"outcome", t.outcome()}});
    return t.legal() ? kOk : kRefuted;
  }

  if (x.kind == "g1") {
    G1Direction d = parse_g1_direction(x.direction);
    if (x.opponent.empty()) throw UsageError("g1 needs --opponent");
    SpecContext fctx = ctx, gctx = ctx;
    fctx.game = finite_counterpart(c.filter);
    gctx.game = GameConfig::g1(c.filter);
    CoSimulation cs;
    switch (d) {
      case G1Direction::IG1ToFinite:
        cs = cosim_i_g1_to_finite(parse_g1_i(o.I, gctx), *parse_strategy_ii(x.opponent, fctx), c.filter, o.rounds,
                                  o.seed);
        break;
      case G1Direction::IFiniteToG1:
        cs = cosim_i_finite_to_g1(parse_strategy_i(o.I, fctx), *parse_g1_ii(x.opponent, gctx), c.filter, o.rounds,
                                  o.seed);
        break;
      case G1Direction::IIFiniteToG1:
        cs = cosim_ii_finite_to_g1(parse_strategy_ii(o.II, fctx), *parse_g1_i(x.opponent, gctx), c.filter, o.rounds,
                                   o.seed);
        break;
      case G1Direction::IIG1ToFinite:
        cs = cosim_ii_g1_to_finite(parse_g1_ii(o.II, gctx), *parse_strategy_i(x.opponent, fctx), c.filter, o.rounds,
                                   o.seed, x.bound);
        break;
    }
    sink.line(head);
    detail::tagged(sink, cs.finite, "finite");
    detail::tagged(sink, cs.g1, "g1");
    sink.line(detail::cosim_json(cs));
    return cs.outcomes_equal ? kOk : kRefuted;
  }

  if (x.kind == "twoboard") {
    if (o.I.empty()) throw UsageError("twoboard needs --I");
    SpecContext fctx = ctx;
    fctx.game = finite_counterpart(c.filter);
    TwoBoardResult r = two_board_pair(*parse_strategy_i(o.I, fctx), c.filter, o.rounds, o.seed);
    sink.line(head);
    detail::tagged(sink, r.a, "A");
    detail::tagged(sink, r.b, "B");
    json j{{"type", "twoboard"}, {"start", r.start}, {"covered_to", r.covered_to}, {"A", r.a.outcome()},
           {"B", r.b.outcome()}};
    j["gap"] = r.gap ? json(*r.gap) : json(nullptr);
    sink.line(j);
    return r.gap ? kRefuted : kOk;
  }

  throw UsageError("unknown transform kind '" + x.kind + "' (dual, singleton, g1, twoboard)");
}

// ---- verify-witness ---------------------------------------------------------------

struct WitnessOptions {
  std::string property, set, blocks = "k^2", family = "columns", pi = "2^k", history;
  Nat samples = 10, bound = 10, width = 3, length = 4;
};

inline std::vector<Nat> parse_list(const std::string& text) {
  std::vector<Nat> out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    if (piece.empty()) continue;
    if (piece.find_first_not_of("0123456789") != std::string::npos) throw UsageError("bad list entry '" + piece + "'");
    out.push_back(std::stoull(piece));
  }
  return out;
}

inline int verify_witness(const GameOptions& o, const WitnessOptions& w, Sink& sink) {
  SpecContext ctx = o.context();
  const FilterSpec& f = ctx.game.filter;
  WitnessReport r;
  json extra;
  const std::string& p = w.property;
  if (p == "selector") {
    if (w.set.empty()) throw UsageError("selector needs --set");
    r = check_selector(parse_named_set(w.set), Partition(SeqRule(w.blocks)), w.bound);
  } else if (p == "diag" || p == "diag-plus") {
    r = check_diag(parse_family(w.family), f, p == "diag" ? DiagMode::Plain : DiagMode::Plus, w.samples, w.bound,
                   Depth{o.depth});
  } else if (p == "talagrand") {
    r = check_talagrand(Ladder(SeqRule(w.pi)), f, w.samples, w.bound);
  } else if (p == "claim") {
    if (o.II.empty()) throw UsageError("claim needs --II (an integer-game strategy)");
    SpecContext gctx = ctx;
    gctx.game = GameConfig::g1(f);
    r = check_claim(*parse_g1_ii(o.II, gctx), parse_list(w.history), w.bound);
  } else if (p == "extract-diag") {
    if (o.II.empty()) throw UsageError("extract-diag needs --II");
    DiagExtraction d = extract_diag_family(*parse_strategy_ii(o.II, ctx), f, w.length, w.width, w.samples);
    r = d.audit;
    extra["histories"] = d.histories.size();
  } else if (p == "extract-ladder") {
    if (o.II.empty()) throw UsageError("extract-ladder needs --II");
    LadderExtraction l = extract_ladder(*parse_strategy_ii(o.II, ctx), f, w.length, w.samples);
    r = l.audit;
    extra["ladder"] = l.points;
    extra["visited"] = l.visited;
  } else if (p == "extract-generators") {
    if (o.I.empty()) throw UsageError("extract-generators needs --I");
    GeneratorExtraction g = extract_generators(*parse_strategy_i(o.I, ctx), w.length, w.width);
    r = compare_filters(g.filter, f, sample_descriptors(w.samples, o.seed), Depth{o.depth});
    std::vector<std::string> gens;
    for (const auto& u : g.generators) gens.push_back(u.format());
    extra["generators"] = gens;
  } else {
    throw UsageError("unknown property '" + p + "'");
  }
  json j = witness_json(r);
  j["filter"] = f.text();
  if (!extra.is_null()) j.update(extra);
  sink.line(j);
  return r.refuted() ? kRefuted : kOk;
}

// ---- tree ---------------------------------------------------------------------------

struct TreeOptions {
  std::string rule, file, gap_pi, follow;
  Nat depth = 4, width = 3;
};

inline json path_json(const Path& p) {
  json a = json::array();
  for (const auto& b : p) a.push_back(b);
  return a;
}

inline int tree(const GameOptions& o, const TreeOptions& t, Sink& sink) {
  SpecContext ctx = o.context();
  if (t.rule.empty() == t.file.empty()) throw UsageError("tree needs exactly one of --rule and --file");
  std::vector<FTree> trees;
  if (!t.rule.empty()) {
    trees.push_back(parse_tree_rule(t.rule, ctx));
  } else {
    std::ifstream in(t.file);
    if (!in) throw UsageError("cannot open '" + t.file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    trees = parse_tree_file(ss.str(), ctx);
  }
  BranchCertifier cert = t.gap_pi.empty() ? no_certifier() : interval_gap_certifier(Ladder(SeqRule(t.gap_pi)));
  for (const auto& tr : trees) {
    sink.line({{"type", "tree"}, {"name", tr.name}, {"family", to_string(tr.family)}, {"depth", t.depth},
               {"width", t.width}});
    if (!t.follow.empty()) {
      Branch b = follow_set(tr, parse_named_set(t.follow), t.depth);
      json audit = json::array();
      for (auto [level, ok] : containment_audit(tr, b, t.depth)) audit.push_back({{"level", level}, {"ok", ok}});
      sink.line({{"type", "follow"}, {"path", path_json(b.path)}, {"audit", audit}});
      continue;
    }
    for (const auto& r : bounded_branch_search(tr, t.depth, t.width, cert))
      sink.line({{"type", "branch"}, {"path", path_json(r.path)}, {"status", to_string(r.status)}, {"marks", r.marks}});
  }
  return kOk;
}

// ---- oracle-check ---------------------------------------------------------------------

/// Compares the descriptor operations with direct evaluation on a window long
/// enough to cover both prefixes and several joint periods.
inline int oracle_check(Nat pairs, std::uint64_t seed, Sink& sink) {
  std::mt19937_64 rng(seed);
  auto raw = [&] {
    std::vector<bool> pre(rng() % 17), per(1 + rng() % 12);
    for (std::size_t i = 0; i < pre.size(); ++i) pre[i] = rng() & 1;
    for (std::size_t i = 0; i < per.size(); ++i) per[i] = rng() & 1;
    return std::pair{pre, per};
  };
  auto bit = [](const std::pair<std::vector<bool>, std::vector<bool>>& r, Nat n) -> bool {
    const auto& [pre, per] = r;
    return n < pre.size() ? pre[n] : per[(n - pre.size()) % per.size()];
  };
  Nat mismatches = 0;
  std::string first;
  for (Nat i = 0; i < pairs; ++i) {
    auto ra = raw(), rb = raw();
    UPSet a(ra.first, ra.second), b(rb.first, rb.second);
    Nat lcm = std::lcm(ra.second.size(), rb.second.size());
    Nat start = std::max(ra.first.size(), rb.first.size()), window = start + 4 * lcm;
    UPSet both = a & b, either = a | b, diff = a - b, comp = ~a;
    bool sub = true, tail_sub = true;
    for (Nat n = 0; n < window; ++n) {
      bool x = bit(ra, n), y = bit(rb, n);
      bool ok = both.contains(n) == (x && y) && either.contains(n) == (x || y) && diff.contains(n) == (x && !y) &&
                comp.contains(n) == !x;
      if (!ok && first.empty()) first = a.format() + " vs " + b.format() + " at " + std::to_string(n);
      mismatches += !ok;
      if (x && !y) {
        sub = false;
        if (n >= start) tail_sub = false;
      }
    }
    if (subset(a, b) != sub) {
      ++mismatches;
      if (first.empty()) first = "inclusion " + a.format() + " vs " + b.format();
    }
    if (almost_subset(a, b) != tail_sub) {
      ++mismatches;
      if (first.empty()) first = "almost inclusion " + a.format() + " vs " + b.format();
    }
  }
  json j{{"type", "oracle-check"}, {"pairs", pairs}, {"seed", seed}, {"mismatches", mismatches}};
  if (!first.empty()) j["first"] = first;
  sink.line(j);
  return mismatches ? kRefuted : kOk;
}

// ---- entry ----------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plays, transforms and checks infinite filter games.", "filtergames"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "write JSON lines to this file");

  GameOptions sim_o, play_o, tr_o, wit_o, tree_o;
  Nat plays = 1;
  std::string human;
  TransformOptions tx;
  WitnessOptions wx;
  TreeOptions tt;
  Nat pairs = 1000;
  std::uint64_t oracle_seed = 0;
  std::string replay_in = "-";

  auto* sim = app.add_subcommand("simulate", "play two strategies against each other");
  sim_o.add_to(sim);
  sim->add_option("--certifier", sim_o.certifier, "partition, interval, sigma, fixed, chain, forfeit or auto")
      ->capture_default_str();
  sim->add_option("--plays", plays, "seeded plays, from --seed upward")->check(CLI::PositiveNumber);
  sim->add_option("--out", out_path, "write JSON lines to this file");

  auto* play = app.add_subcommand("play", "play one side by hand");
  play_o.add_to(play);
  play->add_option("--human", human, "side entered by hand")->required()->check(CLI::IsMember({"I", "II"}));
  play->add_option("--certifier", play_o.certifier, "certifier name or auto")->capture_default_str();
  play->add_option("--out", out_path, "write JSON lines to this file");

  auto* trn = app.add_subcommand("transform", "run a transformed strategy and its counterpart");
  tr_o.add_to(trn);
  trn->add_option("--kind", tx.kind, "dual, singleton, g1 or twoboard")->required();
  trn->add_option("--direction", tx.direction, "duality or integer-game direction");
  trn->add_option("--opponent", tx.opponent, "strategy spec for the other player in the target game");
  trn->add_option("--enumeration", tx.enumeration, "dual: try this many basis sets instead of the closed-form image");
  trn->add_option("--bound", tx.bound, "g1: claim search bound")->capture_default_str();
  trn->add_option("--out", out_path, "write JSON lines to this file");

  auto* wit = app.add_subcommand("verify-witness", "bounded check of a combinatorial property");
  wit_o.add_to(wit);
  wit->add_option("--property", wx.property,
                  "selector, diag, diag-plus, talagrand, claim, extract-diag, extract-ladder, extract-generators")
      ->required();
  wit->add_option("--set", wx.set, "selector: the set to check");
  wit->add_option("--blocks", wx.blocks, "selector: boundary rule")->capture_default_str();
  wit->add_option("--family", wx.family, "diag: columns, omega or const:<set>")->capture_default_str();
  wit->add_option("--pi", wx.pi, "talagrand: ladder rule")->capture_default_str();
  wit->add_option("--history", wx.history, "claim: I's integers so far, comma separated");
  wit->add_option("--samples", wx.samples, "basis sets (or sample sets) looked at")->capture_default_str();
  wit->add_option("--bound", wx.bound, "family index, block or interval bound")->capture_default_str();
  wit->add_option("--length", wx.length, "extraction: history depth or ladder length")->capture_default_str();
  wit->add_option("--width", wx.width, "extraction: branching per history")->capture_default_str();
  wit->add_option("--out", out_path, "write JSON lines to this file");

  auto* tre = app.add_subcommand("tree", "bounded branch search through a tree");
  tree_o.add_to(tre, false);
  tre->add_option("--II", tree_o.II, "unused; trees from strategies use fromstrategy:<spec>");
  tre->add_option("--rule", tt.rule, "chain:<filter>, interval:pi=<rule>, const:<set>, fromstrategy:<spec>");
  tre->add_option("--file", tt.file, "tree file, one rule per line");
  tre->add_option("--tree-depth", tt.depth, "levels to search")->capture_default_str();
  tre->add_option("--width", tt.width, "children per node")->capture_default_str();
  tre->add_option("--gap-pi", tt.gap_pi, "mark skipped intervals of this ladder");
  tre->add_option("--follow", tt.follow, "follow this set instead of searching");
  tre->add_option("--out", out_path, "write JSON lines to this file");

  auto* orc = app.add_subcommand("oracle-check", "compare set operations with direct evaluation");
  orc->add_option("--pairs", pairs, "random descriptor pairs")->capture_default_str();
  orc->add_option("--seed", oracle_seed, "seed")->capture_default_str();
  orc->add_option("--out", out_path, "write JSON lines to this file");

  auto* rep = app.add_subcommand("replay", "re-certify saved transcripts");
  rep->add_option("--in", replay_in, "JSON-lines file, or - for standard input")->capture_default_str();
  rep->add_option("--out", out_path, "write JSON lines to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Sink sink(out_path, out);
    if (*sim) return simulate(sim_o, plays, sink);
    if (*play) return interactive(play_o, human, in, err, sink);
    if (*trn) return transform(tr_o, tx, sink);
    if (*wit) return verify_witness(wit_o, wx, sink);
    if (*tre) {
      tree_o.tree_depth = tt.depth;
      tree_o.tree_width = tt.width;
      return tree(tree_o, tt, sink);
    }
    if (*orc) return oracle_check(pairs, oracle_seed, sink);
    if (*rep) {
      if (replay_in == "-") return replay(in, sink);
      std::ifstream file(replay_in);
      if (!file) throw UsageError("cannot open '" + replay_in + "'");
      return replay(file, sink);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const SyntaxError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace fg::cli
