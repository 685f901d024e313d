#pragma once

// Game (de)serialization. Format:
//   {"players": n, "actions": [|A_1|, ..., |A_n|],
//    "utilities": [flat tensor per player]}
// Each flat tensor is in mixed-radix joint-action order with player 1's
// action as the most significant digit. Parse/serialize round-trips are
// bit-identical for finite doubles.

#include <fstream>
#include <string>

#include "json.hpp"
#include "regretlab/game.hpp"

namespace regretlab {

inline nlohmann::json game_to_json(const NormalFormGame& game) {
  nlohmann::json j;
  j["players"] = game.num_players();
  j["actions"] = game.action_counts();
  j["utilities"] = game.utilities();
  return j;
}

inline NormalFormGame game_from_json(const nlohmann::json& j) {
  if (!j.contains("players") || !j.contains("actions") || !j.contains("utilities")) {
    throw std::invalid_argument("game json: required keys are players, actions, utilities");
  }
  const auto players = j.at("players").get<std::size_t>();
  auto actions = j.at("actions").get<std::vector<std::size_t>>();
  if (actions.size() != players) {
    throw std::invalid_argument("game json: actions lists " + std::to_string(actions.size()) +
                                " players, header says " + std::to_string(players));
  }
  auto utilities = j.at("utilities").get<std::vector<std::vector<double>>>();
  return NormalFormGame(std::move(actions), std::move(utilities));
}

inline NormalFormGame load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open game file: " + path);
  nlohmann::json j;
  in >> j;
  return game_from_json(j);
}

inline void save_game_file(const NormalFormGame& game, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write game file: " + path);
  out << game_to_json(game).dump(2) << "\n";
}

}  // namespace regretlab
