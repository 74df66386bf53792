#pragma once

#include "game.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ipfp {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GameDocument {
  Game game;
  std::optional<std::string> title;
  std::optional<std::string> source;
};

// Game file schema (JSON):
//   {
//     "title": "...", "source": "...",            // optional metadata
//     "players": [{"name": "...", "actions": ["A", ...]}, ...],
//     "payoffs": [{"profile": ["A","U","L"], "values": ["6","10/1",...]}, ...]
//   }
// Every joint profile must appear exactly once; values are rational strings.
inline GameDocument parse_game(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("game file must be a JSON object");
  if (!doc.contains("players") || !doc["players"].is_array() || doc["players"].size() < 2)
    throw ParseError("'players' must be an array of at least 2 entries");
  std::vector<std::vector<std::string>> labels;
  std::vector<std::string> names;
  for (const auto& p : doc["players"]) {
    if (!p.contains("name") || !p.contains("actions") || !p["actions"].is_array() ||
        p["actions"].empty())
      throw ParseError("each player needs a 'name' and a non-empty 'actions' list");
    names.push_back(p["name"].get<std::string>());
    std::vector<std::string> acts;
    for (const auto& a : p["actions"]) acts.push_back(a.get<std::string>());
    labels.push_back(std::move(acts));
  }
  const int np = (int)labels.size();
  std::size_t expected = 1;
  for (const auto& acts : labels) expected *= acts.size();

  if (!doc.contains("payoffs") || !doc["payoffs"].is_array())
    throw ParseError("'payoffs' must be an array");

  auto action_index = [&](int player, const std::string& label) {
    const auto& acts = labels[player];
    auto it = std::find(acts.begin(), acts.end(), label);
    if (it == acts.end())
      throw ParseError("unknown action '" + label + "' for player '" + names[player] + "'");
    return (int)(it - acts.begin());
  };

  std::map<std::vector<int>, std::vector<Rational>> by_profile;
  for (const auto& entry : doc["payoffs"]) {
    if (!entry.contains("profile") || !entry.contains("values"))
      throw ParseError("payoff entry needs 'profile' and 'values'");
    if ((int)entry["profile"].size() != np)
      throw ParseError("payoff profile has wrong length");
    std::vector<int> key(np);
    std::string shown = "(";
    for (int i = 0; i < np; ++i) {
      std::string label = entry["profile"][i].get<std::string>();
      key[i] = action_index(i, label);
      shown += (i ? "," : "") + label;
    }
    shown += ")";
    if (by_profile.count(key)) throw ParseError("duplicate payoff entry for profile " + shown);
    if ((int)entry["values"].size() != np)
      throw ParseError("payoff values for " + shown + " have wrong length");
    std::vector<Rational> vals;
    for (const auto& v : entry["values"]) {
      try {
        vals.push_back(parse_rational(v.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw ParseError("profile " + shown + ": " + e.what());
      }
    }
    by_profile[key] = std::move(vals);
  }
  if (by_profile.size() != expected) {
    // Name one missing profile for the diagnostic.
    std::vector<int> probe(np, 0);
    while (by_profile.count(probe)) {
      int i = np - 1;
      while (i >= 0) {
        if (++probe[i] < (int)labels[i].size()) break;
        probe[i] = 0;
        --i;
      }
      if (i < 0) break;
    }
    std::string shown = "(";
    for (int i = 0; i < np; ++i) shown += (i ? "," : "") + labels[i][probe[i]];
    throw ParseError("payoff table incomplete: missing profile " + shown + ")");
  }

  std::vector<std::vector<Rational>> cells;
  cells.reserve(expected);
  for (const auto& [key, vals] : by_profile) cells.push_back(vals);  // map is row-major
  GameDocument out{Game(std::move(labels), std::move(cells)), std::nullopt, std::nullopt};
  if (doc.contains("title")) out.title = doc["title"].get<std::string>();
  if (doc.contains("source")) out.source = doc["source"].get<std::string>();
  return out;
}

inline GameDocument load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open game file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("JSON error in ") + path + ": " + e.what());
  }
  return parse_game(doc);
}

inline nlohmann::json serialize_game(const GameDocument& gd) {
  const Game& g = gd.game;
  nlohmann::json doc;
  if (gd.title) doc["title"] = *gd.title;
  if (gd.source) doc["source"] = *gd.source;
  doc["players"] = nlohmann::json::array();
  for (int i = 0; i < g.player_count(); ++i) {
    doc["players"].push_back(
        {{"name", i == 0 ? "IP" : "P" + std::to_string(i)}, {"actions", g.action_labels(i)}});
  }
  doc["payoffs"] = nlohmann::json::array();
  ActionProfile y(g.player_count(), 0);
  while (true) {
    nlohmann::json entry;
    entry["profile"] = nlohmann::json::array();
    for (int i = 0; i < g.player_count(); ++i) entry["profile"].push_back(g.action_label(i, y[i]));
    entry["values"] = nlohmann::json::array();
    for (const auto& v : g.payoff(y)) entry["values"].push_back(to_string(v));
    doc["payoffs"].push_back(std::move(entry));
    int i = g.player_count() - 1;
    while (i >= 0) {
      if (++y[i] < g.action_count(i)) break;
      y[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return doc;
}

}  // namespace ipfp
