// Scenario and statement files.
//
// A scenario file has INI-like sections:
//
//   [map]          rows of the grid ('#' wall, '.' floor, '@' agent start)
//   [legend]       X = box 1 | door red | gem 2 | key blue
//   [contents]     box1 = blue        (unlisted boxes are empty)
//   [rules]        max_hidden_keys = 2, solvable = true, minimal = true,
//                  hidden_keys = blue, hidden_key_count = 1,
//                  palette = red blue yellow, goals = 1 2 3
//   [actions]      one action per line; `right*3` repeats; `judge NAME`
//                  marks a judgment point after the actions so far
//
// '#' starts a comment only at the beginning of a line outside [map].

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "labtom/gridworld.hpp"

namespace labtom {

struct JudgmentPoint {
  std::string name;
  int t = 0;
};

struct Scenario {
  std::string name;
  std::shared_ptr<const GridMap> map;
  std::vector<std::int8_t> contents;  // true box contents
  ScenarioRules rules;
  std::vector<int> goals;             // gem indices; empty = all
  std::vector<Action> actions;
  std::vector<JudgmentPoint> judgment_points;  // as written; may be empty

  EnvState initial() const { return initial_state(*map, contents); }
  /// s_0 .. s_T.
  std::vector<EnvState> trajectory() const;
  std::vector<Observation> observations() const;
  /// Named points from the file, or else one before each open_box action
  /// (`before_open_box2`) plus `final` at T.
  std::vector<JudgmentPoint> effective_judgment_points() const;
};

/// Throws InputError with the line number on malformed input, including
/// actions that are invalid when replayed from the start state.
Scenario parse_scenario(const std::string& text, const std::string& name = "scenario");
Scenario load_scenario(const std::string& path);

enum class Tense : std::uint8_t { kCurrent, kInitial };

struct Statement {
  std::string id;
  Tense tense = Tense::kCurrent;
  bool natural_language = false;
  std::string text;
};

/// Tab-separated rows `id  current|initial  elot|nl  text`; '#' comments.
/// ELoT rows are parsed here against `sig` so errors carry the row.
std::vector<Statement> parse_statements(const std::string& text, const DomainSignature& sig);
std::vector<Statement> load_statements(const std::string& path, const DomainSignature& sig);

std::string read_file(const std::string& path);

}  // namespace labtom
