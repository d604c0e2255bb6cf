#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "filtergames/certify.hpp"
#include "filtergames/witnesses.hpp"

namespace fg {

// JSON-lines forms of transcripts, verdicts and witness reports. A transcript
// is a header line (written by the caller), one line per move, and optional
// violation and G1 lines; transcript_from_lines reads the same lines back.

using json = nlohmann::json;

inline json move_json(const MoveValue& m) {
  if (auto* n = std::get_if<Nat>(&m)) return *n;
  if (auto* b = std::get_if<Block>(&m)) return *b;
  return format(std::get<SetValue>(m));
}

inline MoveValue move_from_json(const json& j) {
  if (j.is_number_unsigned()) return j.get<Nat>();
  if (j.is_array()) return j.get<Block>();
  if (j.is_string()) return parse_set(j.get<std::string>());
  throw std::invalid_argument("move is neither a number, a list nor a set: " + j.dump());
}

inline std::vector<json> transcript_lines(const Transcript& t) {
  std::vector<json> out;
  for (const auto& m : t.moves)
    out.push_back({{"type", "move"}, {"k", m.k}, {"player", to_string(m.player)}, {"move", move_json(m.move)},
                   {"legal", m.legal}});
  if (t.violation)
    out.push_back({{"type", "violation"},
                   {"round", t.violation->round},
                   {"violator", to_string(t.violation->violator)},
                   {"reason", t.violation->reason}});
  if (t.g1) {
    json g{{"type", "g1"}, {"increasing", t.g1->increasing}, {"tally", t.g1->tally}};
    g["first_non_increase"] = t.g1->first_non_increase ? json(*t.g1->first_non_increase) : json(nullptr);
    out.push_back(g);
  }
  return out;
}

inline json verdict_json(const Verdict& v, const Transcript& t) {
  return {{"type", "verdict"},     {"verdict", v.text()},   {"tag", to_string(v.tag)},
          {"rounds", v.rounds},    {"certificate", v.certificate}, {"detail", v.detail},
          {"outcome", t.outcome()}};
}

inline json witness_json(const WitnessReport& r) {
  return {{"type", "witness"},         {"property", r.property}, {"verdict", to_string(r.verdict)},
          {"bound", r.bound},          {"samples", r.samples},   {"counterexample", r.counterexample},
          {"detail", r.detail}};
}

inline Player player_from(const std::string& s) {
  if (s == "I") return Player::I;
  if (s == "II") return Player::II;
  throw std::invalid_argument("unknown player '" + s + "'");
}

/// Rebuilds a transcript from a header line (game, variant, filter, rounds,
/// seed) and the move, violation and G1 lines that follow it. Lines of other
/// types are ignored.
inline Transcript transcript_from_lines(const json& header, const std::vector<json>& lines) {
  Transcript t;
  FilterSpec f = make_filter(header.at("filter").get<std::string>());
  if (header.value("variant", "standard") == "g1") {
    t.config = GameConfig::g1(f);
  } else {
    t.config = parse_game(header.at("game").get<std::string>(), f);
  }
  t.seed = header.at("seed").get<std::uint64_t>();
  t.rounds = header.at("rounds").get<Nat>();
  for (const auto& j : lines) {
    const std::string type = j.value("type", "");
    if (type == "move") {
      t.moves.push_back({j.at("k").get<Nat>(), player_from(j.at("player").get<std::string>()), move_from_json(j.at("move")),
                         j.at("legal").get<bool>()});
    } else if (type == "violation") {
      t.violation = Violation{j.at("round").get<Nat>(), player_from(j.at("violator").get<std::string>()),
                              j.at("reason").get<std::string>()};
    } else if (type == "g1") {
      G1Flags g;
      g.increasing = j.at("increasing").get<bool>();
      g.tally = j.at("tally").get<Nat>();
      if (!j.at("first_non_increase").is_null()) g.first_non_increase = j.at("first_non_increase").get<Nat>();
      t.g1 = g;
    }
  }
  return t;
}

}  // namespace fg
