#include "labtom/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "labtom/elot.hpp"
#include "labtom/errors.hpp"

namespace labtom {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

/// Splits on whitespace outside parentheses.
std::vector<std::string> action_tokens(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : line) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == ' ' || c == '\t' || c == ',') && depth == 0) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw InputError("line " + std::to_string(line) + ": expected true or false, got '" + v + "'");
}

int parse_int(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const int i = std::stoi(v, &used);
    if (used == v.size()) return i;
  } catch (const std::exception&) {
  }
  throw InputError("line " + std::to_string(line) + ": expected an integer, got '" + v + "'");
}

struct PendingAction {
  std::string text;
  int line;
  bool judge;
};

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario parse_scenario(const std::string& text, const std::string& name) {
  Scenario scn;
  scn.name = name;
  std::vector<std::string> rows;
  std::map<char, std::string> legend;
  std::vector<std::pair<std::string, int>> contents;  // (color or empty) by box, with line
  std::map<int, std::pair<std::string, int>> content_by_box;
  std::vector<std::string> extra_colors;
  std::vector<PendingAction> pending;
  std::vector<int> goal_numbers;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      if (section != "map" && section != "legend" && section != "contents" && section != "rules" &&
          section != "actions")
        throw InputError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      continue;
    }
    if (section == "map") {
      rows.push_back(line);
      continue;
    }
    if (line.front() == '#') continue;
    if (section.empty()) throw InputError("line " + std::to_string(line_no) + ": text before the first section");

    if (section == "actions") {
      const std::vector<std::string> w = words(line);
      if (w.front() == "judge") {
        if (w.size() != 2) throw InputError("line " + std::to_string(line_no) + ": expected 'judge NAME'");
        pending.push_back({w[1], line_no, true});
        continue;
      }
      for (const std::string& tok : action_tokens(line)) pending.push_back({tok, line_no, false});
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("line " + std::to_string(line_no) + ": expected KEY = VALUE");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section == "legend") {
      if (key.size() != 1 || key == "#" || key == "." || key == "@")
        throw InputError("line " + std::to_string(line_no) + ": legend keys are single map characters");
      legend[key[0]] = value;
    } else if (section == "contents") {
      if (key.rfind("box", 0) != 0) throw InputError("line " + std::to_string(line_no) + ": expected boxN = COLOR");
      const int box = parse_int(key.substr(3), line_no);
      if (!content_by_box.emplace(box, std::pair{value, line_no}).second)
        throw InputError("line " + std::to_string(line_no) + ": " + key + " listed twice");
      if (value != "empty") extra_colors.push_back(value);
    } else {  // rules
      if (key == "max_hidden_keys") scn.rules.max_hidden_keys = parse_int(value, line_no);
      else if (key == "solvable") scn.rules.solvable = parse_bool(value, line_no);
      else if (key == "minimal") scn.rules.minimal = parse_bool(value, line_no);
      else if (key == "hidden_keys") {
        scn.rules.hidden_keys = words(value);
        for (const std::string& c : *scn.rules.hidden_keys) extra_colors.push_back(c);
      } else if (key == "hidden_key_count") scn.rules.hidden_key_count = parse_int(value, line_no);
      else if (key == "palette") {
        scn.rules.palette = words(value);
        for (const std::string& c : scn.rules.palette) extra_colors.push_back(c);
      } else if (key == "goals") {
        for (const std::string& g : words(value)) goal_numbers.push_back(parse_int(g, line_no));
      } else {
        throw InputError("line " + std::to_string(line_no) + ": unknown rule '" + key + "'");
      }
    }
  }

  if (rows.empty()) throw InputError("scenario has no [map] section");
  scn.map = std::make_shared<const GridMap>(GridMap::from_ascii(rows, legend, extra_colors));
  const GridMap& m = *scn.map;

  scn.contents.assign(m.boxes().size(), EnvState::kEmpty);
  for (const auto& [box, entry] : content_by_box) {
    if (box < 1 || box > static_cast<int>(m.boxes().size()))
      throw InputError("line " + std::to_string(entry.second) + ": no box" + std::to_string(box) + " on the map");
    if (entry.first != "empty")
      scn.contents[static_cast<std::size_t>(box - 1)] = static_cast<std::int8_t>(m.color_index(entry.first));
  }
  for (int g : goal_numbers) {
    if (g < 1 || g > static_cast<int>(m.gems().size()))
      throw InputError("rules: no gem" + std::to_string(g) + " on the map");
    scn.goals.push_back(g - 1);
  }

  // replay to validate and to resolve bare pickup_key / collect_gem
  EnvState s = scn.initial();
  for (const PendingAction& p : pending) {
    if (p.judge) {
      scn.judgment_points.push_back({p.text, static_cast<int>(scn.actions.size())});
      continue;
    }
    std::string body = p.text;
    int repeat = 1;
    if (const auto star = body.rfind('*'); star != std::string::npos) {
      repeat = parse_int(body.substr(star + 1), p.line);
      if (repeat < 1) throw InputError("line " + std::to_string(p.line) + ": repeat count must be positive");
      body = body.substr(0, star);
    }
    for (int r = 0; r < repeat; ++r) {
      Action a;
      if (body == "pickup_key" || body == "collect_gem") {
        const auto kind = body == "pickup_key" ? Action::Kind::kPickupKey : Action::Kind::kCollectGem;
        std::vector<Action> options;
        for (const Action& v : valid_actions(m, s))
          if (v.kind == kind) options.push_back(v);
        if (options.size() != 1)
          throw InputError("line " + std::to_string(p.line) + ": '" + body + "' needs a target (" +
                           std::to_string(options.size()) + " candidates here)");
        a = options.front();
      } else {
        try {
          a = parse_action(body);
        } catch (const InputError& e) {
          throw InputError("line " + std::to_string(p.line) + ": " + e.what());
        }
      }
      if (!is_valid(m, s, a))
        throw InputError("line " + std::to_string(p.line) + ": action " + to_string(a) + " is not valid at step " +
                         std::to_string(scn.actions.size() + 1));
      s = transition(m, s, a);
      scn.actions.push_back(a);
    }
  }
  return scn;
}

Scenario load_scenario(const std::string& path) {
  return parse_scenario(read_file(path), std::filesystem::path(path).stem().string());
}

std::vector<EnvState> Scenario::trajectory() const {
  std::vector<EnvState> out{initial()};
  for (const Action& a : actions) out.push_back(transition(*map, out.back(), a));
  return out;
}

std::vector<Observation> Scenario::observations() const {
  std::vector<Observation> out;
  for (const EnvState& s : trajectory()) out.push_back(observe(s));
  return out;
}

std::vector<JudgmentPoint> Scenario::effective_judgment_points() const {
  if (!judgment_points.empty()) return judgment_points;
  std::vector<JudgmentPoint> out;
  for (std::size_t t = 0; t < actions.size(); ++t)
    if (actions[t].kind == Action::Kind::kOpenBox)
      out.push_back({"before_open_box" + std::to_string(actions[t].index + 1), static_cast<int>(t)});
  out.push_back({"final", static_cast<int>(actions.size())});
  return out;
}

std::vector<Statement> parse_statements(const std::string& text, const DomainSignature& sig) {
  std::vector<Statement> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line).front() == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, '\t');) cols.push_back(c);
    const std::string where = "statements line " + std::to_string(line_no);
    if (cols.size() != 4) throw InputError(where + ": expected 4 tab-separated columns");
    Statement st;
    st.id = trim(cols[0]);
    if (st.id.empty()) throw InputError(where + ": empty id");
    for (const Statement& prev : out)
      if (prev.id == st.id) throw InputError(where + ": duplicate id '" + st.id + "'");
    const std::string tense = trim(cols[1]);
    if (tense == "current") st.tense = Tense::kCurrent;
    else if (tense == "initial") st.tense = Tense::kInitial;
    else throw InputError(where + ": tense must be current or initial");
    const std::string kind = trim(cols[2]);
    if (kind == "nl") st.natural_language = true;
    else if (kind != "elot") throw InputError(where + ": kind must be elot or nl");
    st.text = trim(cols[3]);
    if (!st.natural_language) {
      try {
        elot::parse(st.text, sig);
      } catch (const ElotError& e) {
        throw InputError(where + ": " + e.what());
      }
    }
    out.push_back(std::move(st));
  }
  return out;
}

std::vector<Statement> load_statements(const std::string& path, const DomainSignature& sig) {
  return parse_statements(read_file(path), sig);
}

}  // namespace labtom
