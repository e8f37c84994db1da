// Doors, Keys & Gems: a 4-connected gridworld with single-use colored keys,
// same-colored locked doors, boxes that may hide keys, and goal gems.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "labtom/base_formula.hpp"
#include "labtom/domain.hpp"

namespace labtom {

inline constexpr int kMaxBoxes = 8;
inline constexpr int kMaxDoors = 16;
inline constexpr int kMaxMapKeys = 16;
inline constexpr int kMaxGems = 4;
inline constexpr int kMaxColors = 6;

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

inline int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

/// Static layout. Object indices are 0-based here; their names (box1, door1,
/// gem1, ...) are 1-based.
class GridMap {
 public:
  struct Door {
    Cell cell;
    int color;
  };
  struct Key {
    Cell cell;
    int color;
  };

  /// Rows top to bottom. '#' wall, '.' floor, '@' agent start; every other
  /// character must appear in `legend` as "box N", "door COLOR", "gem N" or
  /// "key COLOR". Throws InputError.
  static GridMap from_ascii(const std::vector<std::string>& rows, const std::map<char, std::string>& legend,
                            const std::vector<std::string>& extra_colors = {});

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  bool wall(Cell c) const { return walls_[index(c)]; }
  Cell start() const { return start_; }

  const std::vector<Cell>& boxes() const { return boxes_; }
  const std::vector<Door>& doors() const { return doors_; }
  const std::vector<Cell>& gems() const { return gems_; }
  const std::vector<Key>& keys() const { return keys_; }
  const std::vector<std::string>& colors() const { return colors_; }

  int box_at(Cell c) const { return box_at_[index(c)]; }
  int door_at(Cell c) const { return door_at_[index(c)]; }
  int gem_at(Cell c) const { return gem_at_[index(c)]; }
  int key_at(Cell c) const { return key_at_[index(c)]; }
  /// Color index, or -1.
  int color_index(const std::string& name) const;
  int add_color(const std::string& name);

  DomainSignature signature() const;

  /// Rows for display, with the given agent position.
  std::vector<std::string> render(Cell agent) const;

  // Builder interface (used by from_ascii and tests); call finalize() last.
  GridMap(int width, int height);
  void set_wall(Cell c, bool wall = true) { walls_[index(c)] = wall; }
  void set_start(Cell c) { start_ = c; }
  void add_box(Cell c) { boxes_.push_back(c); }
  void add_door(Cell c, int color) { doors_.push_back({c, color}); }
  void add_gem(Cell c) { gems_.push_back(c); }
  void add_key(Cell c, int color) { keys_.push_back({c, color}); }
  /// Validates limits and disjointness and builds cell lookups. Throws InputError.
  void finalize();

 private:
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.y * width_ + c.x); }

  int width_, height_;
  Cell start_;
  std::vector<bool> walls_;
  std::vector<Cell> boxes_;
  std::vector<Door> doors_;
  std::vector<Cell> gems_;
  std::vector<Key> keys_;
  std::vector<std::string> colors_;
  std::vector<std::int8_t> box_at_, door_at_, gem_at_, key_at_;
};

/// Complete world configuration including hidden box contents. Packed and
/// trivially copyable so it can be hashed by bytes.
struct EnvState {
  static constexpr std::int8_t kEmpty = -1;
  static constexpr std::int8_t kHidden = -2;  // only in observations

  std::uint8_t x = 0, y = 0;
  std::uint8_t collected = 0;     // gem bits
  std::uint8_t opened = 0;        // box bits
  std::uint16_t locked = 0;       // door bits
  std::uint16_t keys_on_map = 0;  // map-key bits
  std::array<std::uint8_t, kMaxColors> held{};
  std::array<std::int8_t, kMaxBoxes> box_content{};  // kEmpty or color index

  Cell agent() const { return {x, y}; }
  bool is_opened(int box) const { return (opened >> box) & 1U; }
  bool is_locked(int door) const { return (locked >> door) & 1U; }
  bool key_on_map(int key) const { return (keys_on_map >> key) & 1U; }
  bool is_collected(int gem) const { return (collected >> gem) & 1U; }

  friend bool operator==(const EnvState&, const EnvState&) = default;
};

static_assert(std::is_trivially_copyable_v<EnvState>);
static_assert(std::has_unique_object_representations_v<EnvState>);

std::size_t hash_value(const EnvState& s);

struct EnvStateHash {
  std::size_t operator()(const EnvState& s) const { return hash_value(s); }
};

/// The percept shared by agent and observer: the state with the contents of
/// unopened boxes replaced by kHidden.
struct Observation {
  EnvState masked;
  friend bool operator==(const Observation&, const Observation&) = default;
};

struct Action {
  enum class Kind : std::uint8_t {
    kUp, kDown, kLeft, kRight, kOpenBox, kUnlockDoor, kPickupKey, kCollectGem, kNoOp
  };

  Kind kind = Kind::kNoOp;
  int index = 0;  // 0-based box / door index
  Cell target;    // pickup / collect cell

  static Action up() { return {Kind::kUp, 0, {}}; }
  static Action down() { return {Kind::kDown, 0, {}}; }
  static Action left() { return {Kind::kLeft, 0, {}}; }
  static Action right() { return {Kind::kRight, 0, {}}; }
  static Action no_op() { return {Kind::kNoOp, 0, {}}; }
  static Action open_box(int box) { return {Kind::kOpenBox, box, {}}; }
  static Action unlock_door(int door) { return {Kind::kUnlockDoor, door, {}}; }
  static Action pickup_key(Cell c) { return {Kind::kPickupKey, 0, c}; }
  static Action collect_gem(Cell c) { return {Kind::kCollectGem, 0, c}; }

  bool is_move() const { return kind <= Kind::kRight; }

  friend bool operator==(const Action&, const Action&) = default;
};

/// `up`, `open_box(2)`, `unlock_door(1)`, `pickup_key(3,4)`, `collect_gem(5,1)`,
/// `no_op` (box and door numbers 1-based).
std::string to_string(const Action& a);
/// Inverse of to_string. Throws InputError.
Action parse_action(const std::string& text);

EnvState initial_state(const GridMap& m, const std::vector<std::int8_t>& box_contents);

/// Cells the agent cannot enter in `s`.
bool blocked(const GridMap& m, const EnvState& s, Cell c);

/// Deterministic order: moves (up, down, left, right), open_box, unlock_door,
/// pickup_key, collect_gem (each by object index), no_op last.
std::vector<Action> valid_actions(const GridMap& m, const EnvState& s);
bool is_valid(const GridMap& m, const EnvState& s, const Action& a);

/// Throws InvalidActionError if `a` is not valid in `s`.
EnvState transition(const GridMap& m, const EnvState& s, const Action& a);

Observation observe(const EnvState& s);
/// Whether `s` could have produced `o`.
bool consistent(const EnvState& s, const Observation& o);

struct ScenarioRules {
  int max_hidden_keys = 2;
  bool solvable = true;  // every gem reachable
  bool minimal = true;   // no hidden key can be removed without losing solvability
  std::optional<std::vector<std::string>> hidden_keys;  // exact multiset of colors
  std::optional<int> hidden_key_count;
  std::vector<std::string> palette;  // colors a hidden key may have; empty = door colors
};

/// All states with `o0`'s observable layer whose unopened boxes hold an
/// assignment allowed by `rules`, in lexicographic order of box contents.
/// Throws InputError if none remain.
std::vector<EnvState> enumerate_initial_states(const GridMap& m, const Observation& o0, const ScenarioRules& rules);

/// `s` with the opened flag of empty boxes cleared: such boxes behave the same
/// opened or not, so planning treats the two states as one.
EnvState canonical(const EnvState& s);

/// Length of a shortest action sequence from `s` that collects gem `goal`
/// (0 if already collected), by breadth-first search over the full state
/// graph. nullopt if unreachable. When `path` is given it receives the
/// canonical states along one shortest plan, starting with canonical(s).
std::optional<int> goal_distance(const GridMap& m, const EnvState& s, int goal,
                                 std::vector<EnvState>* path = nullptr);
inline bool reachable(const GridMap& m, const EnvState& s, int goal) {
  return goal_distance(m, s, goal).has_value();
}

struct GroundAtom {
  std::string predicate;
  std::vector<std::string> args;
  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

/// Every true atom of `s`, class atoms included (box(box1), key(key2), ...).
/// Keys are named key1..keyN: keys still on the map, then keys inside boxes,
/// then held keys.
std::vector<GroundAtom> describe_state(const GridMap& m, const EnvState& s);

/// Truth of a closed base formula in `s` (box contents are the real ones).
/// Throws UnknownSymbolError for predicates outside the domain vocabulary.
bool state_satisfies(const GridMap& m, const EnvState& s, const BaseFormula& phi);

/// Same evaluation over an explicit fact list.
bool satisfies(const std::vector<GroundAtom>& facts, const BaseFormula& phi);

}  // namespace labtom
