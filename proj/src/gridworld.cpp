#include "labtom/gridworld.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>

#include "labtom/errors.hpp"

namespace labtom {

namespace {

constexpr std::array<Cell, 4> kMoves = {Cell{0, -1}, Cell{0, 1}, Cell{-1, 0}, Cell{1, 0}};

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

int parse_index(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size() && v >= 1) return v;
  } catch (const std::exception&) {
  }
  throw InputError("bad " + what + " number '" + s + "'");
}

}  // namespace

GridMap::GridMap(int width, int height)
    : width_(width), height_(height), walls_(static_cast<std::size_t>(width * height), false) {
  if (width <= 0 || height <= 0 || width > 255 || height > 255) throw InputError("map size out of range");
}

int GridMap::color_index(const std::string& name) const {
  auto it = std::find(colors_.begin(), colors_.end(), name);
  return it == colors_.end() ? -1 : static_cast<int>(it - colors_.begin());
}

int GridMap::add_color(const std::string& name) {
  const int i = color_index(name);
  if (i >= 0) return i;
  if (static_cast<int>(colors_.size()) >= kMaxColors)
    throw InputError("more than " + std::to_string(kMaxColors) + " colors");
  colors_.push_back(name);
  return static_cast<int>(colors_.size()) - 1;
}

void GridMap::finalize() {
  if (boxes_.size() > kMaxBoxes) throw InputError("more than " + std::to_string(kMaxBoxes) + " boxes");
  if (doors_.size() > kMaxDoors) throw InputError("more than " + std::to_string(kMaxDoors) + " doors");
  if (keys_.size() > kMaxMapKeys) throw InputError("more than " + std::to_string(kMaxMapKeys) + " keys");
  if (gems_.size() > kMaxGems) throw InputError("more than " + std::to_string(kMaxGems) + " gems");
  const std::size_t n = walls_.size();
  box_at_.assign(n, -1);
  door_at_.assign(n, -1);
  gem_at_.assign(n, -1);
  key_at_.assign(n, -1);
  std::vector<bool> taken = walls_;
  auto claim = [&](Cell c, std::vector<std::int8_t>& lookup, std::size_t i, const char* what) {
    if (!in_bounds(c)) throw InputError(std::string(what) + " outside the map");
    if (taken[index(c)])
      throw InputError(std::string(what) + " at (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                       ") overlaps another object");
    taken[index(c)] = true;
    lookup[index(c)] = static_cast<std::int8_t>(i);
  };
  for (std::size_t i = 0; i < boxes_.size(); ++i) claim(boxes_[i], box_at_, i, "box");
  for (std::size_t i = 0; i < doors_.size(); ++i) claim(doors_[i].cell, door_at_, i, "door");
  for (std::size_t i = 0; i < gems_.size(); ++i) claim(gems_[i], gem_at_, i, "gem");
  for (std::size_t i = 0; i < keys_.size(); ++i) claim(keys_[i].cell, key_at_, i, "key");
  if (!in_bounds(start_) || taken[index(start_)]) throw InputError("agent start must be a free floor cell");
}

GridMap GridMap::from_ascii(const std::vector<std::string>& rows, const std::map<char, std::string>& legend,
                            const std::vector<std::string>& extra_colors) {
  if (rows.empty()) throw InputError("empty map");
  const std::size_t width = rows.front().size();
  for (const std::string& r : rows)
    if (r.size() != width) throw InputError("map rows must all have the same width");
  GridMap m(static_cast<int>(width), static_cast<int>(rows.size()));

  std::map<int, Cell> boxes, gems;
  bool have_start = false;
  for (int y = 0; y < m.height_; ++y) {
    for (int x = 0; x < m.width_; ++x) {
      const char ch = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
      const Cell c{x, y};
      if (ch == '#') {
        m.set_wall(c);
      } else if (ch == '.') {
      } else if (ch == '@') {
        if (have_start) throw InputError("more than one agent start '@'");
        m.set_start(c);
        have_start = true;
      } else {
        auto it = legend.find(ch);
        if (it == legend.end()) throw InputError(std::string("map character '") + ch + "' has no legend entry");
        const std::vector<std::string> w = split_words(it->second);
        if (w.size() != 2) throw InputError("legend entry for '" + std::string(1, ch) + "' must be 'KIND VALUE'");
        if (w[0] == "box") {
          const int i = parse_index(w[1], "box");
          if (!boxes.emplace(i, c).second) throw InputError("box " + w[1] + " appears twice");
        } else if (w[0] == "gem") {
          const int i = parse_index(w[1], "gem");
          if (!gems.emplace(i, c).second) throw InputError("gem " + w[1] + " appears twice");
        } else if (w[0] == "door") {
          m.add_door(c, m.add_color(w[1]));
        } else if (w[0] == "key") {
          m.add_key(c, m.add_color(w[1]));
        } else {
          throw InputError("unknown legend kind '" + w[0] + "'");
        }
      }
    }
  }
  if (!have_start) throw InputError("map has no agent start '@'");
  int expect = 1;
  for (const auto& [i, c] : boxes) {
    if (i != expect++) throw InputError("box numbers must be contiguous from 1");
    m.add_box(c);
  }
  expect = 1;
  for (const auto& [i, c] : gems) {
    if (i != expect++) throw InputError("gem numbers must be contiguous from 1");
    m.add_gem(c);
  }
  for (const std::string& c : extra_colors) m.add_color(c);
  m.finalize();
  return m;
}

DomainSignature GridMap::signature() const {
  return DomainSignature::doors_keys_gems(static_cast<int>(boxes_.size()), colors_,
                                          static_cast<int>(doors_.size()), static_cast<int>(gems_.size()));
}

std::vector<std::string> GridMap::render(Cell agent) const {
  std::vector<std::string> rows(static_cast<std::size_t>(height_), std::string(static_cast<std::size_t>(width_), '.'));
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) {
      char& ch = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
      const Cell c{x, y};
      if (wall(c)) ch = '#';
      else if (box_at(c) >= 0) ch = static_cast<char>('1' + box_at(c));
      else if (door_at(c) >= 0) ch = 'D';
      else if (gem_at(c) >= 0) ch = 'G';
      else if (key_at(c) >= 0) ch = 'k';
    }
  rows[static_cast<std::size_t>(agent.y)][static_cast<std::size_t>(agent.x)] = '@';
  return rows;
}

std::size_t hash_value(const EnvState& s) {
  unsigned char bytes[sizeof(EnvState)];
  std::memcpy(bytes, &s, sizeof(EnvState));
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

std::string to_string(const Action& a) {
  using K = Action::Kind;
  switch (a.kind) {
    case K::kUp: return "up";
    case K::kDown: return "down";
    case K::kLeft: return "left";
    case K::kRight: return "right";
    case K::kNoOp: return "no_op";
    case K::kOpenBox: return "open_box(" + std::to_string(a.index + 1) + ")";
    case K::kUnlockDoor: return "unlock_door(" + std::to_string(a.index + 1) + ")";
    case K::kPickupKey:
      return "pickup_key(" + std::to_string(a.target.x) + "," + std::to_string(a.target.y) + ")";
    case K::kCollectGem:
      return "collect_gem(" + std::to_string(a.target.x) + "," + std::to_string(a.target.y) + ")";
  }
  return "?";
}

Action parse_action(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  if (text == "up") return Action::up();
  if (text == "down") return Action::down();
  if (text == "left") return Action::left();
  if (text == "right") return Action::right();
  if (text == "no_op" || text == "noop") return Action::no_op();
  const std::size_t open = text.find('(');
  if (open == std::string::npos || text.back() != ')') throw InputError("unknown action '" + raw + "'");
  const std::string name = text.substr(0, open);
  const std::string args = text.substr(open + 1, text.size() - open - 2);
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw InputError("bad argument in action '" + raw + "'");
  };
  if (name == "open_box" || name == "unlock_door") {
    const int i = number(args);
    if (i < 1) throw InputError("object numbers start at 1 in '" + raw + "'");
    return name == "open_box" ? Action::open_box(i - 1) : Action::unlock_door(i - 1);
  }
  if (name == "pickup_key" || name == "collect_gem") {
    const std::size_t comma = args.find(',');
    if (comma == std::string::npos) throw InputError("expected x,y in action '" + raw + "'");
    const Cell c{number(args.substr(0, comma)), number(args.substr(comma + 1))};
    return name == "pickup_key" ? Action::pickup_key(c) : Action::collect_gem(c);
  }
  throw InputError("unknown action '" + raw + "'");
}

EnvState initial_state(const GridMap& m, const std::vector<std::int8_t>& box_contents) {
  if (box_contents.size() != m.boxes().size()) throw InputError("need one content entry per box");
  EnvState s;
  s.x = static_cast<std::uint8_t>(m.start().x);
  s.y = static_cast<std::uint8_t>(m.start().y);
  s.locked = static_cast<std::uint16_t>((1U << m.doors().size()) - 1U);
  s.keys_on_map = static_cast<std::uint16_t>((1U << m.keys().size()) - 1U);
  s.box_content.fill(EnvState::kEmpty);
  for (std::size_t i = 0; i < box_contents.size(); ++i) {
    const int c = box_contents[i];
    if (c != EnvState::kEmpty && (c < 0 || c >= static_cast<int>(m.colors().size())))
      throw InputError("box content is not a known color");
    s.box_content[i] = box_contents[i];
  }
  return s;
}

bool blocked(const GridMap& m, const EnvState& s, Cell c) {
  if (!m.in_bounds(c) || m.wall(c) || m.box_at(c) >= 0) return true;
  if (int d = m.door_at(c); d >= 0 && s.is_locked(d)) return true;
  if (int g = m.gem_at(c); g >= 0 && !s.is_collected(g)) return true;
  if (int k = m.key_at(c); k >= 0 && s.key_on_map(k)) return true;
  return false;
}

namespace {

bool adjacent(Cell a, Cell b) { return manhattan(a, b) == 1; }

bool can_pickup(const GridMap& m, const EnvState& s, Cell c) {
  if (!m.in_bounds(c) || !adjacent(s.agent(), c)) return false;
  if (int k = m.key_at(c); k >= 0) return s.key_on_map(k);
  if (int b = m.box_at(c); b >= 0) return s.is_opened(b) && s.box_content[static_cast<std::size_t>(b)] >= 0;
  return false;
}

}  // namespace

bool is_valid(const GridMap& m, const EnvState& s, const Action& a) {
  using K = Action::Kind;
  const Cell p = s.agent();
  switch (a.kind) {
    case K::kUp:
    case K::kDown:
    case K::kLeft:
    case K::kRight: {
      const Cell d = kMoves[static_cast<std::size_t>(a.kind)];
      return !blocked(m, s, {p.x + d.x, p.y + d.y});
    }
    case K::kOpenBox:
      return a.index >= 0 && a.index < static_cast<int>(m.boxes().size()) && !s.is_opened(a.index) &&
             adjacent(p, m.boxes()[static_cast<std::size_t>(a.index)]);
    case K::kUnlockDoor: {
      if (a.index < 0 || a.index >= static_cast<int>(m.doors().size())) return false;
      const GridMap::Door& door = m.doors()[static_cast<std::size_t>(a.index)];
      return s.is_locked(a.index) && adjacent(p, door.cell) && s.held[static_cast<std::size_t>(door.color)] > 0;
    }
    case K::kPickupKey:
      return can_pickup(m, s, a.target);
    case K::kCollectGem: {
      if (!m.in_bounds(a.target)) return false;
      const int g = m.gem_at(a.target);
      return g >= 0 && !s.is_collected(g) && adjacent(p, a.target);
    }
    case K::kNoOp:
      return true;
  }
  return false;
}

std::vector<Action> valid_actions(const GridMap& m, const EnvState& s) {
  std::vector<Action> out;
  for (Action a : {Action::up(), Action::down(), Action::left(), Action::right()})
    if (is_valid(m, s, a)) out.push_back(a);
  const Cell p = s.agent();
  for (std::size_t i = 0; i < m.boxes().size(); ++i)
    if (!s.is_opened(static_cast<int>(i)) && adjacent(p, m.boxes()[i])) out.push_back(Action::open_box(static_cast<int>(i)));
  for (std::size_t i = 0; i < m.doors().size(); ++i) {
    Action a = Action::unlock_door(static_cast<int>(i));
    if (is_valid(m, s, a)) out.push_back(a);
  }
  for (const GridMap::Key& k : m.keys())
    if (can_pickup(m, s, k.cell)) out.push_back(Action::pickup_key(k.cell));
  for (const Cell& b : m.boxes())
    if (can_pickup(m, s, b)) out.push_back(Action::pickup_key(b));
  for (const Cell& g : m.gems())
    if (is_valid(m, s, Action::collect_gem(g))) out.push_back(Action::collect_gem(g));
  out.push_back(Action::no_op());
  return out;
}

EnvState transition(const GridMap& m, const EnvState& s, const Action& a) {
  using K = Action::Kind;
  if (!is_valid(m, s, a)) throw InvalidActionError("action " + to_string(a) + " is not valid here");
  EnvState n = s;
  switch (a.kind) {
    case K::kUp:
    case K::kDown:
    case K::kLeft:
    case K::kRight: {
      const Cell d = kMoves[static_cast<std::size_t>(a.kind)];
      n.x = static_cast<std::uint8_t>(s.x + d.x);
      n.y = static_cast<std::uint8_t>(s.y + d.y);
      break;
    }
    case K::kOpenBox:
      n.opened = static_cast<std::uint8_t>(n.opened | (1U << a.index));
      break;
    case K::kUnlockDoor: {
      const int color = m.doors()[static_cast<std::size_t>(a.index)].color;
      --n.held[static_cast<std::size_t>(color)];
      n.locked = static_cast<std::uint16_t>(n.locked & ~(1U << a.index));
      break;
    }
    case K::kPickupKey:
      if (int k = m.key_at(a.target); k >= 0) {
        ++n.held[static_cast<std::size_t>(m.keys()[static_cast<std::size_t>(k)].color)];
        n.keys_on_map = static_cast<std::uint16_t>(n.keys_on_map & ~(1U << k));
      } else {
        const auto b = static_cast<std::size_t>(m.box_at(a.target));
        ++n.held[static_cast<std::size_t>(n.box_content[b])];
        n.box_content[b] = EnvState::kEmpty;
      }
      break;
    case K::kCollectGem:
      n.collected = static_cast<std::uint8_t>(n.collected | (1U << m.gem_at(a.target)));
      break;
    case K::kNoOp:
      break;
  }
  return n;
}

Observation observe(const EnvState& s) {
  Observation o{s};
  for (int b = 0; b < kMaxBoxes; ++b)
    if (!s.is_opened(b)) o.masked.box_content[static_cast<std::size_t>(b)] = EnvState::kHidden;
  return o;
}

bool consistent(const EnvState& s, const Observation& o) { return observe(s) == o; }

EnvState canonical(const EnvState& s) {
  EnvState c = s;
  for (int b = 0; b < kMaxBoxes; ++b)
    if (c.box_content[static_cast<std::size_t>(b)] == EnvState::kEmpty)
      c.opened = static_cast<std::uint8_t>(c.opened & ~(1U << b));
  return c;
}

std::optional<int> goal_distance(const GridMap& m, const EnvState& start, int goal, std::vector<EnvState>* path) {
  const EnvState s0 = canonical(start);
  if (s0.is_collected(goal)) {
    if (path) *path = {s0};
    return 0;
  }
  // parent links double as the visited set
  std::unordered_map<EnvState, EnvState, EnvStateHash> parent;
  std::deque<std::pair<EnvState, int>> frontier;
  parent.emplace(s0, s0);
  frontier.emplace_back(s0, 0);
  while (!frontier.empty()) {
    const auto [s, d] = frontier.front();
    frontier.pop_front();
    for (const Action& a : valid_actions(m, s)) {
      if (a.kind == Action::Kind::kNoOp) continue;
      if (a.kind == Action::Kind::kOpenBox && s.box_content[static_cast<std::size_t>(a.index)] == EnvState::kEmpty)
        continue;
      const EnvState n = canonical(transition(m, s, a));
      if (!parent.emplace(n, s).second) continue;
      if (n.is_collected(goal)) {
        if (path) {
          path->clear();
          for (EnvState cur = n;; cur = parent.at(cur)) {
            path->push_back(cur);
            if (cur == s0) break;
          }
          std::reverse(path->begin(), path->end());
        }
        return d + 1;
      }
      frontier.emplace_back(n, d + 1);
    }
  }
  return std::nullopt;
}

std::vector<EnvState> enumerate_initial_states(const GridMap& m, const Observation& o0, const ScenarioRules& rules) {
  std::vector<int> palette;
  if (rules.palette.empty()) {
    for (const GridMap::Door& d : m.doors())
      if (std::find(palette.begin(), palette.end(), d.color) == palette.end()) palette.push_back(d.color);
    // named hidden keys may open nothing on this map
    if (rules.hidden_keys)
      for (const std::string& c : *rules.hidden_keys) {
        const int i = m.color_index(c);
        if (i >= 0 && std::find(palette.begin(), palette.end(), i) == palette.end()) palette.push_back(i);
      }
  } else {
    for (const std::string& c : rules.palette) {
      const int i = m.color_index(c);
      if (i < 0) throw InputError("palette color '" + c + "' is not registered on the map");
      palette.push_back(i);
    }
  }
  std::sort(palette.begin(), palette.end());

  std::optional<std::vector<int>> wanted;
  if (rules.hidden_keys) {
    wanted.emplace();
    for (const std::string& c : *rules.hidden_keys) {
      const int i = m.color_index(c);
      if (i < 0) throw InputError("hidden key color '" + c + "' is not registered on the map");
      wanted->push_back(i);
    }
    std::sort(wanted->begin(), wanted->end());
  }

  std::vector<std::size_t> hidden;  // unopened boxes
  for (std::size_t b = 0; b < m.boxes().size(); ++b)
    if (o0.masked.box_content[b] == EnvState::kHidden) hidden.push_back(b);

  auto solvable = [&](const EnvState& s) {
    for (std::size_t g = 0; g < m.gems().size(); ++g)
      if (!reachable(m, s, static_cast<int>(g))) return false;
    return true;
  };

  // choice[i] indexes {empty} + palette for hidden box i
  std::vector<std::size_t> choice(hidden.size(), 0);
  std::vector<EnvState> out;
  for (;;) {
    EnvState s = o0.masked;
    std::vector<int> colors;
    for (std::size_t i = 0; i < hidden.size(); ++i) {
      const int c = choice[i] == 0 ? EnvState::kEmpty : palette[choice[i] - 1];
      s.box_content[hidden[i]] = static_cast<std::int8_t>(c);
      if (c >= 0) colors.push_back(c);
    }
    std::sort(colors.begin(), colors.end());
    const int n_keys = static_cast<int>(colors.size());
    bool ok = n_keys <= rules.max_hidden_keys && (!wanted || colors == *wanted) &&
              (!rules.hidden_key_count || n_keys == *rules.hidden_key_count);
    if (ok && rules.solvable) ok = solvable(s);
    if (ok && rules.minimal) {
      for (std::size_t b : hidden) {
        if (s.box_content[b] < 0) continue;
        EnvState fewer = s;
        fewer.box_content[b] = EnvState::kEmpty;
        if (solvable(fewer)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) out.push_back(s);

    std::size_t i = 0;  // odometer increment, last box fastest
    for (i = hidden.size(); i-- > 0;) {
      if (++choice[i] <= palette.size()) break;
      choice[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  if (out.empty()) throw InputError("no initial state is consistent with the observation and scenario rules");
  return out;
}

std::vector<GroundAtom> describe_state(const GridMap& m, const EnvState& s) {
  std::vector<GroundAtom> facts;
  auto num = [](const char* stem, std::size_t i) { return stem + std::to_string(i + 1); };
  const auto& colors = m.colors();
  facts.push_back({"agent", {"player"}});
  for (const std::string& c : colors) facts.push_back({"color", {c}});
  for (std::size_t b = 0; b < m.boxes().size(); ++b) {
    facts.push_back({"box", {num("box", b)}});
    if (s.box_content[b] == EnvState::kEmpty) facts.push_back({"empty", {num("box", b)}});
    if (s.is_opened(static_cast<int>(b))) facts.push_back({"opened", {num("box", b)}});
  }
  for (std::size_t d = 0; d < m.doors().size(); ++d) {
    facts.push_back({"door", {num("door", d)}});
    facts.push_back({"iscolor", {num("door", d), colors[static_cast<std::size_t>(m.doors()[d].color)]}});
    if (s.is_locked(static_cast<int>(d))) facts.push_back({"locked", {num("door", d)}});
  }
  for (std::size_t g = 0; g < m.gems().size(); ++g) {
    facts.push_back({"gem", {num("gem", g)}});
    if (s.is_collected(static_cast<int>(g))) facts.push_back({"collected", {num("gem", g)}});
  }
  std::size_t next_key = 0;
  auto key = [&](int color) {
    const std::string name = num("key", next_key++);
    facts.push_back({"key", {name}});
    facts.push_back({"iscolor", {name, colors[static_cast<std::size_t>(color)]}});
    return name;
  };
  for (std::size_t k = 0; k < m.keys().size(); ++k)
    if (s.key_on_map(static_cast<int>(k))) key(m.keys()[k].color);
  for (std::size_t b = 0; b < m.boxes().size(); ++b)
    if (s.box_content[b] >= 0) facts.push_back({"inside", {key(s.box_content[b]), num("box", b)}});
  for (std::size_t c = 0; c < colors.size(); ++c)
    for (int n = 0; n < s.held[c]; ++n) facts.push_back({"has", {"player", key(static_cast<int>(c))}});
  return facts;
}

namespace {

const std::set<std::string>& vocabulary() {
  static const std::set<std::string> v = {"agent",  "box",   "color",  "door",   "gem",    "key",   "inside",
                                          "iscolor", "empty", "has",   "locked", "opened", "collected"};
  return v;
}

class FactModel {
 public:
  explicit FactModel(const std::vector<GroundAtom>& facts) {
    for (const GroundAtom& f : facts) {
      facts_.insert(f);
      if (f.args.size() == 1) members_[f.predicate].push_back(f.args[0]);
    }
  }

  bool eval(const BaseFormula& f, std::vector<std::pair<std::string, std::string>>& env) const {
    using K = BaseFormula::Kind;
    switch (f.kind()) {
      case K::kAtom: {
        if (!vocabulary().count(f.predicate()))
          throw UnknownSymbolError("unknown predicate '" + f.predicate() + "'");
        GroundAtom a{f.predicate(), {}};
        for (const Term& t : f.args()) a.args.push_back(t.is_variable() ? lookup(env, t.name) : t.name);
        return facts_.count(a) > 0;
      }
      case K::kAnd:
        for (const BaseFormula& c : f.children())
          if (!eval(c, env)) return false;
        return true;
      case K::kOr:
        for (const BaseFormula& c : f.children())
          if (eval(c, env)) return true;
        return false;
      case K::kNot:
        return !eval(f.children().front(), env);
      case K::kImplies:
        return !eval(f.children()[0], env) || eval(f.children()[1], env);
      case K::kExists:
      case K::kForall: {
        const bool exists = f.kind() == K::kExists;
        if (!vocabulary().count(f.bound_class()))
          throw UnknownSymbolError("unknown class '" + f.bound_class() + "'");
        auto it = members_.find(f.bound_class());
        if (it == members_.end()) return !exists;
        for (const std::string& o : it->second) {
          env.emplace_back(f.bound_variable(), o);
          const bool in = eval(f.restriction(), env);
          const bool holds = in && eval(f.body(), env);
          env.pop_back();
          if (exists && holds) return true;
          if (!exists && in && !holds) return false;
        }
        return !exists;
      }
    }
    return false;
  }

 private:
  static const std::string& lookup(const std::vector<std::pair<std::string, std::string>>& env,
                                   const std::string& var) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == var) return it->second;
    throw UnknownSymbolError("variable " + var + " is not bound");
  }

  std::set<GroundAtom> facts_;
  std::map<std::string, std::vector<std::string>> members_;
};

}  // namespace

bool satisfies(const std::vector<GroundAtom>& facts, const BaseFormula& phi) {
  std::vector<std::pair<std::string, std::string>> env;
  return FactModel(facts).eval(phi, env);
}

bool state_satisfies(const GridMap& m, const EnvState& s, const BaseFormula& phi) {
  return satisfies(describe_state(m, s), phi);
}

}  // namespace labtom
