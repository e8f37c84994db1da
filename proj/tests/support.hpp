// Test fixtures, random generators and reference implementations.
//
// The reference code here is written against the plain definitions (fact
// tables, threshold comparisons, the product of per-step likelihoods) and
// shares no evaluation code with the library beyond the environment
// dynamics (valid_actions / transition / observe).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "labtom/belief.hpp"
#include "labtom/bsips.hpp"
#include "labtom/elot.hpp"
#include "labtom/gridworld.hpp"
#include "labtom/pipeline.hpp"
#include "labtom/planner.hpp"
#include "labtom/scenario.hpp"
#include "labtom/thresholds.hpp"

namespace labtom::testkit {

using Rng = std::mt19937_64;
using Env = std::map<std::string, std::string>;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }
template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(v.size()) - 1))];
}

inline std::string bytes_of(const EnvState& s) {
  std::string out(sizeof(EnvState), '\0');
  std::memcpy(out.data(), &s, sizeof(EnvState));
  return out;
}

// ---------------------------------------------------------------------------
// Maps

/// Three boxes, red and blue doors, two gems, one visible yellow key.
inline GridMap property_map() {
  return GridMap::from_ascii({"#########",
                              "#1.2.@.3#",
                              "##R###B##",
                              "#a..y..b#",
                              "#########"},
                             {{'1', "box 1"},
                              {'2', "box 2"},
                              {'3', "box 3"},
                              {'R', "door red"},
                              {'B', "door blue"},
                              {'a', "gem 1"},
                              {'b', "gem 2"},
                              {'y', "key yellow"}},
                             {"green"});
}

/// Arbitrary (not necessarily reachable) state on `m`; every field varies.
inline EnvState random_state(const GridMap& m, Rng& rng) {
  EnvState s;
  std::vector<Cell> floor;
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      const Cell c{x, y};
      if (!m.wall(c) && m.box_at(c) < 0 && m.door_at(c) < 0 && m.gem_at(c) < 0 && m.key_at(c) < 0)
        floor.push_back(c);
    }
  const Cell at = pick(rng, floor);
  s.x = static_cast<std::uint8_t>(at.x);
  s.y = static_cast<std::uint8_t>(at.y);
  const int n_colors = static_cast<int>(m.colors().size());
  for (std::size_t b = 0; b < m.boxes().size(); ++b) {
    s.box_content[b] = coin(rng) ? EnvState::kEmpty : static_cast<std::int8_t>(uniform(rng, 0, n_colors - 1));
    if (coin(rng)) s.opened |= static_cast<std::uint8_t>(1U << b);
  }
  for (std::size_t b = m.boxes().size(); b < kMaxBoxes; ++b) s.box_content[b] = EnvState::kEmpty;
  for (std::size_t d = 0; d < m.doors().size(); ++d)
    if (coin(rng)) s.locked |= static_cast<std::uint16_t>(1U << d);
  for (std::size_t k = 0; k < m.keys().size(); ++k)
    if (coin(rng)) s.keys_on_map |= static_cast<std::uint16_t>(1U << k);
  for (std::size_t g = 0; g < m.gems().size(); ++g)
    if (coin(rng, 0.3)) s.collected |= static_cast<std::uint8_t>(1U << g);
  for (int c = 0; c < n_colors; ++c) s.held[static_cast<std::size_t>(c)] = static_cast<std::uint8_t>(uniform(rng, 0, 1) * uniform(rng, 0, 2));
  return s;
}

inline Belief random_belief(const GridMap& m, Rng& rng) {
  std::vector<EnvState> states;
  std::vector<int> counts;
  const int n = uniform(rng, 1, 4);
  for (int i = 0; i < n; ++i) {
    states.push_back(random_state(m, rng));
    counts.push_back(uniform(rng, 1, 4));
  }
  return Belief(states, counts);
}

// ---------------------------------------------------------------------------
// Reference base-formula semantics, read straight off the state fields.

class RefWorld {
 public:
  RefWorld(const GridMap& m, const EnvState& s) : m_(m), s_(s) {
    const auto add_key = [&](int color, int box, bool held) {
      keys_.push_back({color, box, held});
    };
    for (std::size_t k = 0; k < m.keys().size(); ++k)
      if (s.key_on_map(static_cast<int>(k))) add_key(m.keys()[k].color, -1, false);
    for (std::size_t b = 0; b < m.boxes().size(); ++b)
      if (s.box_content[b] >= 0) add_key(s.box_content[b], static_cast<int>(b), false);
    for (std::size_t c = 0; c < m.colors().size(); ++c)
      for (int n = 0; n < s.held[c]; ++n) add_key(static_cast<int>(c), -1, true);
    universe_.push_back("player");
    for (std::size_t i = 0; i < m.boxes().size(); ++i) universe_.push_back("box" + std::to_string(i + 1));
    for (std::size_t i = 0; i < m.doors().size(); ++i) universe_.push_back("door" + std::to_string(i + 1));
    for (std::size_t i = 0; i < m.gems().size(); ++i) universe_.push_back("gem" + std::to_string(i + 1));
    for (const std::string& c : m.colors()) universe_.push_back(c);
    for (std::size_t i = 0; i < keys_.size(); ++i) universe_.push_back("~key" + std::to_string(i));
  }

  bool holds(const BaseFormula& f, Env env = {}) const { return eval(f, env); }

 private:
  struct Key {
    int color;
    int box;  // -1 unless inside a box
    bool held;
  };

  static int number(const std::string& name, const std::string& stem, std::size_t count) {
    if (name.rfind(stem, 0) != 0 || name.size() == stem.size()) return -1;
    const std::string digits = name.substr(stem.size());
    if (digits.find_first_not_of("0123456789") != std::string::npos) return -1;
    const int i = std::stoi(digits) - 1;
    return i >= 0 && i < static_cast<int>(count) ? i : -1;
  }
  int box(const std::string& o) const { return number(o, "box", m_.boxes().size()); }
  int door(const std::string& o) const { return number(o, "door", m_.doors().size()); }
  int gem(const std::string& o) const { return number(o, "gem", m_.gems().size()); }
  int key_index(const std::string& o) const {
    if (o.rfind("~key", 0) != 0) return -1;
    return std::stoi(o.substr(4));
  }
  bool is_color(const std::string& o) const {
    return std::find(m_.colors().begin(), m_.colors().end(), o) != m_.colors().end();
  }
  const std::string& color_name(int c) const { return m_.colors()[static_cast<std::size_t>(c)]; }

  bool atom(const std::string& p, const std::vector<std::string>& a) const {
    if (p == "agent") return a[0] == "player";
    if (p == "box") return box(a[0]) >= 0;
    if (p == "door") return door(a[0]) >= 0;
    if (p == "gem") return gem(a[0]) >= 0;
    if (p == "color") return is_color(a[0]);
    if (p == "key") return key_index(a[0]) >= 0;
    if (p == "inside") {
      const int k = key_index(a[0]);
      return k >= 0 && box(a[1]) >= 0 && keys_[static_cast<std::size_t>(k)].box == box(a[1]);
    }
    if (p == "iscolor") {
      if (const int k = key_index(a[0]); k >= 0) return color_name(keys_[static_cast<std::size_t>(k)].color) == a[1];
      if (const int d = door(a[0]); d >= 0) return color_name(m_.doors()[static_cast<std::size_t>(d)].color) == a[1];
      return false;
    }
    if (p == "empty") return box(a[0]) >= 0 && s_.box_content[static_cast<std::size_t>(box(a[0]))] == EnvState::kEmpty;
    if (p == "has") {
      const int k = key_index(a[1]);
      return a[0] == "player" && k >= 0 && keys_[static_cast<std::size_t>(k)].held;
    }
    if (p == "locked") return door(a[0]) >= 0 && s_.is_locked(door(a[0]));
    if (p == "opened") return box(a[0]) >= 0 && s_.is_opened(box(a[0]));
    if (p == "collected") return gem(a[0]) >= 0 && s_.is_collected(gem(a[0]));
    throw std::logic_error("reference world: unknown predicate " + p);
  }

  bool eval(const BaseFormula& f, Env& env) const {
    using K = BaseFormula::Kind;
    switch (f.kind()) {
      case K::kAtom: {
        std::vector<std::string> args;
        for (const Term& t : f.args()) args.push_back(t.is_variable() ? env.at(t.name) : t.name);
        return atom(f.predicate(), args);
      }
      case K::kAnd:
        return std::all_of(f.children().begin(), f.children().end(), [&](const auto& c) { return eval(c, env); });
      case K::kOr:
        return std::any_of(f.children().begin(), f.children().end(), [&](const auto& c) { return eval(c, env); });
      case K::kNot:
        return !eval(f.children()[0], env);
      case K::kImplies:
        return !eval(f.children()[0], env) || eval(f.children()[1], env);
      case K::kExists:
      case K::kForall: {
        const bool exists = f.kind() == K::kExists;
        const std::string var = f.restriction().kind() == K::kAnd ? f.restriction().children()[0].args()[0].name
                                                                  : f.restriction().args()[0].name;
        const auto saved = env.find(var) == env.end() ? std::nullopt : std::optional(env[var]);
        bool result = !exists;
        for (const std::string& o : universe_) {
          env[var] = o;
          const bool r = eval(f.restriction(), env);
          if (exists && r && eval(f.body(), env)) result = true;
          if (!exists && r && !eval(f.body(), env)) result = false;
          if (result == exists) break;
        }
        if (saved) env[var] = *saved;
        else env.erase(var);
        return result;
      }
    }
    return false;
  }

  const GridMap& m_;
  const EnvState& s_;
  std::vector<Key> keys_;
  std::vector<std::string> universe_;
};

inline double ref_prob(const GridMap& m, const Belief& b, const BaseFormula& phi, const Env& env = {}) {
  double p = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (RefWorld(m, b.states()[i]).holds(phi, env)) p += static_cast<double>(b.counts()[i]) / b.total();
  return p;
}

// ---------------------------------------------------------------------------
// Reference epistemic semantics: the operator definitions applied directly,
// without lowering.

class RefEpistemic {
 public:
  RefEpistemic(const GridMap& m, const EnvState& s, const Belief& b, const ThresholdTable& th)
      : m_(m), s_(s), b_(b), th_(th) {}

  bool eval(const elot::EpistemicFormula& f, const Env& env = {}) const {
    using elot::Op;
    switch (f.op()) {
      case Op::kBelieves: return ge(pr(f.formula(1), env), th_.get("believes"));
      case Op::kBelievesModal: return modal(f.child(1), env);
      case Op::kKnowsThat: return knows_that(f.formula(1), env);
      case Op::kKnowsIf: return knows_if(f.formula(1), env);
      case Op::kNotKnowsThat: return !ge(pr(f.formula(1), env), th_.get("believes")) && truth(f.formula(1), env);
      case Op::kNotKnowsIf: return !knows_if(f.formula(1), env);
      case Op::kCertainThat: return ge(pr(f.formula(1), env), th_.get("certain"));
      case Op::kUncertainIf:
        return lt(pr(f.formula(1), env), th_.get("uncertain")) && lt(pr(f.formula(2), env), th_.get("uncertain"));
      case Op::kKnowsAbout:
      case Op::kCertainAbout:
      case Op::kUncertainAbout: {
        const std::string var = f.formula(1).args()[0].name;
        bool any = false, all = true;
        for (const std::string& o : objects(f.formula(1).predicate())) {
          Env e = env;
          e[var] = o;
          bool v;
          if (f.op() == Op::kKnowsAbout) v = knows_that(f.formula(2), e);
          else if (f.op() == Op::kCertainAbout) v = ge(pr(f.formula(2), e), th_.get("certain"));
          else v = lt(pr(f.formula(2), e), th_.get("uncertain"));
          any = any || v;
          all = all && v;
        }
        return f.op() == Op::kUncertainAbout ? all : any;
      }
      case Op::kAnd:
        for (std::size_t i = 0; i < f.args().size(); ++i)
          if (!eval(f.child(i), env)) return false;
        return true;
      case Op::kOr:
        for (std::size_t i = 0; i < f.args().size(); ++i)
          if (eval(f.child(i), env)) return true;
        return false;
      case Op::kNot: return !eval(f.child(0), env);
      case Op::kImplies: return !eval(f.child(0), env) || eval(f.child(1), env);
      case Op::kExists:
      case Op::kForall: {
        const BaseFormula& r = f.formula(0);
        const BaseFormula& head = r.kind() == BaseFormula::Kind::kAnd ? r.children()[0] : r;
        const std::string var = head.args()[0].name;
        const bool exists = f.op() == Op::kExists;
        for (const std::string& o : objects(head.predicate())) {
          Env e = env;
          e[var] = o;
          if (!truth(r, e)) continue;
          const bool v = eval(f.child(1), e);
          if (exists && v) return true;
          if (!exists && !v) return false;
        }
        return !exists;
      }
      default: throw std::logic_error("reference: not a statement");
    }
  }

 private:
  static bool ge(double a, double b) { return a >= b - 1e-9; }
  static bool gt(double a, double b) { return a > b + 1e-9; }
  static bool le(double a, double b) { return a <= b + 1e-9; }
  static bool lt(double a, double b) { return a < b - 1e-9; }

  double pr(const BaseFormula& phi, const Env& env) const { return ref_prob(m_, b_, phi, env); }
  bool truth(const BaseFormula& phi, const Env& env) const { return RefWorld(m_, s_).holds(phi, env); }
  bool knows_that(const BaseFormula& phi, const Env& env) const {
    return ge(pr(phi, env), th_.get("believes")) && truth(phi, env);
  }
  bool knows_if(const BaseFormula& phi, const Env& env) const {
    return knows_that(phi, env) || knows_that(BaseFormula::negation(phi), env);
  }

  std::vector<std::string> objects(const std::string& cls) const {
    std::vector<std::string> out;
    auto numbered = [&](const char* stem, std::size_t n) {
      for (std::size_t i = 0; i < n; ++i) out.push_back(stem + std::to_string(i + 1));
    };
    if (cls == "box") numbered("box", m_.boxes().size());
    else if (cls == "door") numbered("door", m_.doors().size());
    else if (cls == "gem") numbered("gem", m_.gems().size());
    else if (cls == "color") out = m_.colors();
    else if (cls == "agent") out = {"player"};
    else throw std::logic_error("reference: class without objects " + cls);
    return out;
  }

  std::string resolve(const std::string& name, const Env& env) const {
    auto it = env.find(name);
    return it == env.end() ? name : it->second;
  }

  bool modal(const elot::EpistemicFormula& f, const Env& env) const {
    using elot::Op;
    switch (f.op()) {
      case Op::kCould: return ge(pr(f.formula(0), env), th_.get("could"));
      case Op::kMight: return ge(pr(f.formula(0), env), th_.get("might"));
      case Op::kMay: return ge(pr(f.formula(0), env), th_.get("may"));
      case Op::kShould: return ge(pr(f.formula(0), env), th_.get("should"));
      case Op::kMust: return ge(pr(f.formula(0), env), th_.get("must"));
      case Op::kLikely: return ge(pr(f.formula(0), env), th_.get("likely"));
      case Op::kUnlikely: return le(pr(f.formula(0), env), th_.get("unlikely"));
      case Op::kMore: return gt(pr(f.formula(1), env), pr(f.formula(2), env));
      case Op::kLess: return lt(pr(f.formula(1), env), pr(f.formula(2), env));
      case Op::kMostStr:
        return ge(pr(f.formula(1), env), std::min(1.0, th_.get(f.symbol(0).name) * th_.alpha_most()));
      case Op::kLeastStr:
        return le(pr(f.formula(1), env), th_.get(f.symbol(0).name) / th_.alpha_most());
      case Op::kMostSup:
      case Op::kLeastSup: {
        const std::string chosen = resolve(f.symbol(1).name, env);
        const std::string var = f.formula(2).args()[0].name;
        Env e = env;
        e[var] = chosen;
        const double p = pr(f.formula(3), e);
        for (const std::string& o : objects(f.formula(2).predicate())) {
          if (o == chosen) continue;
          e[var] = o;
          const double q = pr(f.formula(3), e);
          if (f.op() == Op::kMostSup ? !ge(p, q) : !le(p, q)) return false;
        }
        return true;
      }
      default: throw std::logic_error("reference: not a modal term");
    }
  }

  const GridMap& m_;
  const EnvState& s_;
  const Belief& b_;
  const ThresholdTable& th_;
};

// ---------------------------------------------------------------------------
// Random well-typed formulas over a map's vocabulary.

class FormulaGen {
 public:
  FormulaGen(const GridMap& m, Rng& rng) : rng_(rng) {
    for (std::size_t i = 0; i < m.boxes().size(); ++i) objects_["box"].push_back("box" + std::to_string(i + 1));
    for (std::size_t i = 0; i < m.doors().size(); ++i) objects_["door"].push_back("door" + std::to_string(i + 1));
    for (std::size_t i = 0; i < m.gems().size(); ++i) objects_["gem"].push_back("gem" + std::to_string(i + 1));
    objects_["color"] = m.colors();
  }

  /// Closed over `scope` (variable -> class).
  BaseFormula base(int depth, std::vector<std::pair<std::string, std::string>> scope = {}) {
    if (depth <= 0 || coin(rng_, 0.35)) return atom(scope);
    switch (uniform(rng_, 0, 5)) {
      case 0: return BaseFormula::conjunction({base(depth - 1, scope), base(depth - 1, scope)});
      case 1: return BaseFormula::disjunction({base(depth - 1, scope), base(depth - 1, scope)});
      case 2: return BaseFormula::negation(base(depth - 1, scope));
      case 3: return BaseFormula::implication(base(depth - 1, scope), base(depth - 1, scope));
      default: {
        static const std::vector<std::string> classes = {"key", "key", "box", "color"};
        const std::string cls = pick(rng_, classes);
        const std::string var = fresh(cls);
        BaseFormula restriction = BaseFormula::atom(cls, {Term::variable(var)});
        scope.emplace_back(var, cls);
        if (cls == "key" && coin(rng_)) {
          restriction = BaseFormula::conjunction(
              {restriction, BaseFormula::atom("iscolor", {Term::variable(var), object("color", scope)})});
        }
        BaseFormula body = base(depth - 1, scope);
        return coin(rng_) ? BaseFormula::exists(restriction, body) : BaseFormula::forall(restriction, body);
      }
    }
  }

  /// A statement (type E) of nesting depth <= depth.
  elot::FormulaPtr statement(int depth, std::vector<std::pair<std::string, std::string>> scope = {}) {
    using elot::Op;
    if (depth <= 1 || coin(rng_, 0.4)) return leaf(scope);
    switch (uniform(rng_, 0, 5)) {
      case 0: return elot::make(Op::kAnd, {statement(depth - 1, scope), statement(depth - 1, scope)});
      case 1: return elot::make(Op::kOr, {statement(depth - 1, scope), statement(depth - 1, scope)});
      case 2: return elot::make(Op::kNot, {statement(depth - 1, scope)});
      case 3: return elot::make(Op::kImplies, {statement(depth - 1, scope), statement(depth - 1, scope)});
      default: {
        static const std::vector<std::string> classes = {"box", "color", "gem", "door"};
        const std::string cls = pick(rng_, classes);
        const std::string var = fresh(cls);
        const BaseFormula restriction = BaseFormula::atom(cls, {Term::variable(var)});
        scope.emplace_back(var, cls);
        return elot::make(coin(rng_) ? Op::kExists : Op::kForall, {restriction, statement(depth - 1, scope)});
      }
    }
  }

 private:
  std::string fresh(const std::string& cls) {
    return std::string(1, static_cast<char>(std::toupper(cls[0]))) + std::to_string(++counter_);
  }

  Term object(const std::string& cls, const std::vector<std::pair<std::string, std::string>>& scope) {
    std::vector<Term> options;
    for (const auto& [var, c] : scope)
      if (c == cls) options.push_back(Term::variable(var));
    if (cls != "key")
      for (const std::string& o : objects_[cls]) options.push_back(Term::constant(o));
    return pick(rng_, options);
  }

  bool has_class(const std::vector<std::pair<std::string, std::string>>& scope, const std::string& cls) const {
    return std::any_of(scope.begin(), scope.end(), [&](const auto& p) { return p.second == cls; });
  }

  BaseFormula atom(const std::vector<std::pair<std::string, std::string>>& scope) {
    const bool keys = has_class(scope, "key");
    for (;;) {
      switch (uniform(rng_, 0, 8)) {
        case 0: return BaseFormula::atom("empty", {object("box", scope)});
        case 1: return BaseFormula::atom("opened", {object("box", scope)});
        case 2: return BaseFormula::atom("locked", {object("door", scope)});
        case 3: return BaseFormula::atom("collected", {object("gem", scope)});
        case 4:
          if (keys) return BaseFormula::atom("inside", {object("key", scope), object("box", scope)});
          break;
        case 5:
          if (keys) return BaseFormula::atom("has", {Term::constant("player"), object("key", scope)});
          break;
        case 6:
          if (keys) return BaseFormula::atom("iscolor", {object("key", scope), object("color", scope)});
          break;
        case 7: return BaseFormula::atom("iscolor", {object("door", scope), object("color", scope)});
        default: {
          // the common "a key of color C is in box B" shape
          const std::string var = fresh("key");
          auto inner = scope;
          inner.emplace_back(var, "key");
          return BaseFormula::exists(
              BaseFormula::conjunction({BaseFormula::atom("key", {Term::variable(var)}),
                                        BaseFormula::atom("iscolor", {Term::variable(var), object("color", scope)})}),
              BaseFormula::atom("inside", {Term::variable(var), object("box", scope)}));
        }
      }
    }
  }

  elot::FormulaPtr modal_term(const std::vector<std::pair<std::string, std::string>>& scope) {
    using elot::Op;
    static const std::vector<std::string> preds = {"likely", "believes", "might", "certain", "unlikely", "must"};
    switch (uniform(rng_, 0, 6)) {
      case 0: {
        static const std::vector<Op> ops = {Op::kCould, Op::kMight,  Op::kMay,     Op::kShould,
                                            Op::kMust,  Op::kLikely, Op::kUnlikely};
        return elot::make(pick(rng_, ops), {base(2, scope)});
      }
      case 1: return elot::make(Op::kMore, {elot::Symbol{pick(rng_, preds)}, base(2, scope), base(2, scope)});
      case 2: return elot::make(Op::kLess, {elot::Symbol{pick(rng_, preds)}, base(2, scope), base(2, scope)});
      case 3: return elot::make(Op::kMostStr, {elot::Symbol{pick(rng_, preds)}, base(2, scope)});
      case 4: return elot::make(Op::kLeastStr, {elot::Symbol{pick(rng_, preds)}, base(2, scope)});
      default: {
        static const std::vector<std::string> classes = {"box", "color", "gem"};
        const std::string cls = pick(rng_, classes);
        const std::string chosen = object(cls, scope).name;
        const std::string var = fresh(cls);
        auto inner = scope;
        inner.emplace_back(var, cls);
        return elot::make(coin(rng_) ? Op::kMostSup : Op::kLeastSup,
                          {elot::Symbol{pick(rng_, preds)}, elot::Symbol{chosen},
                           BaseFormula::atom(cls, {Term::variable(var)}), open(var, cls, inner)});
      }
    }
  }

  /// A base formula that mentions `var`.
  BaseFormula open(const std::string& var, const std::string& cls,
                   const std::vector<std::pair<std::string, std::string>>& scope) {
    const Term v = Term::variable(var);
    BaseFormula core;
    if (cls == "box") core = coin(rng_) ? BaseFormula::atom("empty", {v}) : BaseFormula::atom("opened", {v});
    else if (cls == "gem") core = BaseFormula::atom("collected", {v});
    else if (cls == "door") core = BaseFormula::atom("locked", {v});
    else {
      const std::string k = fresh("key");
      core = BaseFormula::exists(
          BaseFormula::conjunction({BaseFormula::atom("key", {Term::variable(k)}),
                                    BaseFormula::atom("iscolor", {Term::variable(k), v})}),
          BaseFormula::atom("inside", {Term::variable(k), object("box", scope)}));
    }
    if (coin(rng_)) return core;
    return coin(rng_) ? BaseFormula::conjunction({core, base(1, scope)}) : BaseFormula::negation(core);
  }

  elot::FormulaPtr leaf(const std::vector<std::pair<std::string, std::string>>& scope) {
    using elot::Op;
    const elot::Symbol player{"player"};
    switch (uniform(rng_, 0, 10)) {
      case 0: return elot::make(Op::kBelieves, {player, base(3, scope)});
      case 1:
      case 2: return elot::make(Op::kBelievesModal, {player, modal_term(scope)});
      case 3: return elot::make(Op::kKnowsThat, {player, base(3, scope)});
      case 4: return elot::make(Op::kKnowsIf, {player, base(2, scope)});
      case 5: return elot::make(Op::kNotKnowsThat, {player, base(2, scope)});
      case 6: return elot::make(Op::kNotKnowsIf, {player, base(2, scope)});
      case 7: return elot::make(Op::kCertainThat, {player, base(3, scope)});
      case 8: return elot::make(Op::kUncertainIf, {player, base(2, scope), base(2, scope)});
      default: {
        static const std::vector<Op> ops = {Op::kKnowsAbout, Op::kCertainAbout, Op::kUncertainAbout};
        static const std::vector<std::string> classes = {"box", "color", "gem", "door"};
        const std::string cls = pick(rng_, classes);
        const std::string var = fresh(cls);
        auto inner = scope;
        inner.emplace_back(var, cls);
        return elot::make(pick(rng_, ops), {player, BaseFormula::atom(cls, {Term::variable(var)}),
                                            open(var, cls, inner)});
      }
    }
  }

  Rng& rng_;
  std::map<std::string, std::vector<std::string>> objects_;
  int counter_ = 0;
};

// ---------------------------------------------------------------------------
// Reference inverse planner: explicit enumeration of every hypothesis path
// and the product of its per-step action likelihoods.

/// Belief as sorted (state bytes, count) with counts divided by their gcd.
using BeliefKey = std::vector<std::pair<std::string, int>>;

inline BeliefKey belief_key(const std::vector<std::pair<EnvState, int>>& particles) {
  std::map<std::string, int> merged;
  for (const auto& [s, c] : particles) merged[bytes_of(s)] += c;
  int g = 0;
  for (const auto& [s, c] : merged) g = std::gcd(g, c);
  BeliefKey out;
  for (const auto& [s, c] : merged) out.emplace_back(s, c / g);
  return out;
}

inline BeliefKey belief_key(const Belief& b) {
  std::vector<std::pair<EnvState, int>> p;
  for (std::size_t i = 0; i < b.size(); ++i) p.emplace_back(b.states()[i], b.counts()[i]);
  return belief_key(p);
}

class RefPlanner {
 public:
  RefPlanner(const GridMap& m, PolicyParams params) : m_(m), params_(params) {}

  /// Shortest number of actions to collect `goal`, by plain BFS.
  std::optional<int> distance(const EnvState& s, int goal) {
    const std::string key = bytes_of(s) + static_cast<char>(goal);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::optional<int> result;
    std::unordered_set<std::string> seen{bytes_of(s)};
    std::deque<std::pair<EnvState, int>> queue{{s, 0}};
    while (!queue.empty()) {
      auto [u, d] = queue.front();
      queue.pop_front();
      if (u.is_collected(goal)) {
        result = d;
        break;
      }
      for (const Action& a : valid_actions(m_, u)) {
        const EnvState v = transition(m_, u, a);
        if (seen.insert(bytes_of(v)).second) queue.emplace_back(v, d + 1);
      }
    }
    memo_.emplace(key, result);
    return result;
  }

  /// P(a | b, goal) with costs recomputed from scratch.
  double likelihood(const std::vector<std::pair<EnvState, int>>& b, int goal, const Action& a) {
    const std::vector<Action> actions = valid_actions(m_, b.front().first);
    int total = 0;
    for (const auto& p : b) total += p.second;
    std::vector<double> q;
    for (const Action& c : actions) {
      if (params_.variant == Variant::kNonPlanning) {
        const EnvState& s = b.front().first;
        const Cell gem = m_.gems()[static_cast<std::size_t>(goal)];
        if ((c.kind == Action::Kind::kCollectGem && c.target == gem) || s.is_collected(goal)) {
          q.push_back(1.0);
        } else {
          const Cell at = transition(m_, s, c).agent();
          q.push_back(1.0 + std::abs(at.x - gem.x) + std::abs(at.y - gem.y));
        }
        continue;
      }
      double v = 0.0;
      for (const auto& [s, n] : b) {
        double cost = 10.0 * m_.width() * m_.height();
        if (is_valid(m_, s, c))
          if (auto d = distance(transition(m_, s, c), goal)) cost = 1.0 + *d;
        v += cost * n / total;
      }
      q.push_back(v);
    }
    const double lo = *std::min_element(q.begin(), q.end());
    double z = 0.0, num = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double e = std::exp(-params_.beta * (q[i] - lo));
      z += e;
      if (actions[i] == a) num = e;
    }
    return num / z;
  }

 private:
  const GridMap& m_;
  PolicyParams params_;
  std::unordered_map<std::string, std::optional<int>> memo_;
};

/// Every multiset of k draws from n items, as count vectors.
inline std::vector<std::vector<int>> ref_multisets(int n, int k) {
  if (n == 0) return {};
  if (n == 1) return {{k}};
  std::vector<std::vector<int>> out;
  for (int first = k; first >= 0; --first)
    for (std::vector<int> rest : ref_multisets(n - 1, k - first)) {
      rest.insert(rest.begin(), first);
      out.push_back(rest);
    }
  return out;
}

struct RefRoot {
  int goal;
  std::string state0;
  BeliefKey belief0;
  friend auto operator<=>(const RefRoot&, const RefRoot&) = default;
};

struct RefPosterior {
  std::map<RefRoot, double> roots;  // normalized marginal over step-0 hypotheses
  std::map<std::pair<std::string, BeliefKey>, double> joint;  // (s_T, b_T) at the horizon
  std::map<int, double> goals;
};

/// Direct enumeration. `particles` is k for the initial and re-formed beliefs.
inline RefPosterior ref_bsips(const GridMap& m, const std::vector<int>& goals, const std::vector<EnvState>& initial,
                              int particles, const PolicyParams& params, DeadBelief dead,
                              const std::vector<Action>& actions, const std::vector<Observation>& obs) {
  using Particles = std::vector<std::pair<EnvState, int>>;
  struct Path {
    RefRoot root;
    int goal;
    EnvState s;
    Particles b;
    double logw;
  };
  auto beliefs_over = [&](const std::vector<EnvState>& states) {
    std::vector<Particles> out;
    for (const std::vector<int>& counts : ref_multisets(static_cast<int>(states.size()), particles)) {
      Particles b;
      for (std::size_t i = 0; i < states.size(); ++i)
        if (counts[i] > 0) b.emplace_back(states[i], counts[i]);
      out.push_back(b);
    }
    return out;
  };

  const bool true_belief = params.variant == Variant::kTrueBelief;
  std::vector<Path> paths;
  const std::vector<Particles> b0s = beliefs_over(initial);
  for (int g : goals)
    for (const EnvState& s : initial) {
      std::vector<Particles> bs = true_belief ? std::vector<Particles>{{{s, 1}}} : b0s;
      for (const Particles& b : bs) paths.push_back({{g, bytes_of(s), belief_key(b)}, g, s, b, 0.0});
    }
  const double n0 = static_cast<double>(paths.size());
  for (Path& p : paths) p.logw = -std::log(n0);
  std::erase_if(paths, [&](const Path& p) { return !(observe(p.s) == obs[0]); });

  RefPlanner planner(m, params);
  std::vector<std::optional<EnvState>> worlds(initial.begin(), initial.end());
  for (std::size_t t = 0; t < actions.size(); ++t) {
    const Action& a = actions[t];
    for (auto& w : worlds)
      if (w) w = is_valid(m, *w, a) ? std::optional(transition(m, *w, a)) : std::nullopt;
    std::vector<Path> next;
    for (const Path& p : paths) {
      if (!is_valid(m, p.s, a)) continue;
      const EnvState s2 = transition(m, p.s, a);
      if (!(observe(s2) == obs[t + 1])) continue;
      const double lik = planner.likelihood(p.b, p.goal, a);
      if (lik <= 0.0) continue;
      Particles b2;
      for (const auto& [x, n] : p.b) {
        if (!is_valid(m, x, a)) continue;
        const EnvState y = transition(m, x, a);
        if (observe(y) == observe(s2)) b2.emplace_back(y, n);
      }
      if (!b2.empty()) {
        next.push_back({p.root, p.goal, s2, b2, p.logw + std::log(lik)});
        continue;
      }
      if (dead == DeadBelief::kReject) continue;
      std::vector<EnvState> cand;
      for (const auto& w : worlds)
        if (w && observe(*w) == observe(s2) &&
            std::find(cand.begin(), cand.end(), *w) == cand.end())
          cand.push_back(*w);
      const std::vector<Particles> kids = beliefs_over(cand);
      for (const Particles& k : kids)
        next.push_back({p.root, p.goal, s2, k, p.logw + std::log(lik) - std::log(static_cast<double>(kids.size()))});
    }
    paths = std::move(next);
  }

  RefPosterior out;
  if (paths.empty()) return out;
  double top = -std::numeric_limits<double>::infinity();
  for (const Path& p : paths) top = std::max(top, p.logw);
  double z = 0.0;
  for (const Path& p : paths) z += std::exp(p.logw - top);
  for (const Path& p : paths) {
    const double w = std::exp(p.logw - top) / z;
    out.roots[p.root] += w;
    out.joint[{bytes_of(p.s), belief_key(p.b)}] += w;
    out.goals[p.goal] += w;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Small scenarios used by the inference tests.

struct NamedScenario {
  std::string name;
  std::string text;
};

inline const std::vector<NamedScenario>& small_scenarios() {
  static const std::vector<NamedScenario> all = {
      {"two_boxes",
       "[map]\n#######\n#1.@.2#\n###D###\n#a...b#\n#######\n"
       "[legend]\n1 = box 1\n2 = box 2\nD = door blue\na = gem 1\nb = gem 2\n"
       "[contents]\nbox1 = blue\n[rules]\nhidden_keys = blue\n"
       "[actions]\nleft\njudge before\nopen_box(1)\npickup_key\nright\nunlock_door(1)\ndown\ndown\nleft\n"
       "collect_gem\njudge final\n"},
      {"wrong_box_first",
       "[map]\n#######\n#1.@.2#\n###D###\n#a...b#\n#######\n"
       "[legend]\n1 = box 1\n2 = box 2\nD = door blue\na = gem 1\nb = gem 2\n"
       "[contents]\nbox2 = blue\n[rules]\nhidden_keys = blue\n"
       "[actions]\nleft\nopen_box(1)\njudge box1_empty\nright\nright\nopen_box(2)\npickup_key\nleft\n"
       "unlock_door(1)\ndown\ndown\nright\ncollect_gem\njudge final\n"},
      {"two_doors",
       "[map]\n#########\n#1.2.@.3#\n##R###B##\n#a.....b#\n#########\n"
       "[legend]\n1 = box 1\n2 = box 2\n3 = box 3\nR = door red\nB = door blue\na = gem 1\nb = gem 2\n"
       "[contents]\nbox3 = blue\n"
       "[rules]\nhidden_key_count = 1\npalette = red blue\nsolvable = false\nminimal = false\n"
       "[actions]\nright\nopen_box(3)\npickup_key\nunlock_door(2)\ndown\ndown\ncollect_gem\n"},
      {"visible_key",
       "[map]\n########\n#y.@..1#\n####D###\n#a....b#\n########\n"
       "[legend]\n1 = box 1\ny = key red\nD = door red\na = gem 1\nb = gem 2\n"
       "[rules]\nmax_hidden_keys = 1\nsolvable = false\nminimal = false\npalette = red\n"
       "[actions]\nleft\npickup_key\nright\nright\nunlock_door(1)\ndown\ndown\nright\ncollect_gem\n"},
  };
  return all;
}

/// Library posterior at the horizon, summarized like RefPosterior.
inline RefPosterior summarize(const Posterior& p, const BsipsConfig& cfg) {
  RefPosterior out;
  const int T = p.horizon();
  const std::vector<double> w = p.weights(T);
  const bool true_belief = p.variant() == Variant::kTrueBelief;
  for (std::size_t h = 0; h < w.size(); ++h) {
    if (w[h] == 0.0) continue;
    const Hypothesis& hy = p.hypothesis(T, h);
    const EnvState& s0 = cfg.initial_states[static_cast<std::size_t>(hy.state0)];
    const Belief b0 = true_belief ? Belief::certain(s0) : cfg.initial_beliefs[static_cast<std::size_t>(hy.belief0)];
    out.roots[{hy.goal, bytes_of(s0), belief_key(b0)}] += w[h];
    out.joint[{bytes_of(p.state(T, h)), belief_key(p.belief(T, h))}] += w[h];
    out.goals[hy.goal] += w[h];
  }
  return out;
}

/// Largest |log lib - log ref| over matching keys; infinite when the supports differ.
template <class K>
double max_log_gap(const std::map<K, double>& lib, const std::map<K, double>& ref) {
  if (lib.size() != ref.size()) return std::numeric_limits<double>::infinity();
  double gap = 0.0;
  for (const auto& [k, v] : ref) {
    const auto it = lib.find(k);
    if (it == lib.end()) return std::numeric_limits<double>::infinity();
    gap = std::max(gap, std::abs(std::log(it->second) - std::log(v)));
  }
  return gap;
}

struct OracleCase {
  std::string scenario;  // a small_scenarios() name, or a path
  Variant variant = Variant::kFull;
  DeadBelief dead = DeadBelief::kRevise;
  int particles = 3;
};

struct OracleResult {
  std::size_t hypotheses = 0;  // at step 0
  double roots = 0.0, joint = 0.0, goals = 0.0;  // max log gaps
  double worst() const { return std::max({roots, joint, goals}); }
};

inline Scenario load_small(const std::string& name) {
  for (const NamedScenario& s : small_scenarios())
    if (s.name == name) return parse_scenario(s.text, s.name);
  return load_scenario(name);
}

inline OracleResult run_oracle(const OracleCase& c) {
  const Scenario scn = load_small(c.scenario);
  RunConfig rc;
  rc.params.variant = c.variant;
  rc.dead_belief = c.dead;
  rc.particles = c.particles;
  const BsipsConfig cfg = make_bsips_config(scn, rc);
  std::vector<int> goals = cfg.goals;
  if (goals.empty())
    for (std::size_t g = 0; g < scn.map->gems().size(); ++g) goals.push_back(static_cast<int>(g));
  const Posterior lib = bsips(scn.map, cfg, scn.actions, scn.observations());
  const RefPosterior ref =
      ref_bsips(*scn.map, goals, cfg.initial_states, c.particles, rc.params, c.dead, scn.actions, scn.observations());
  const RefPosterior got = summarize(lib, cfg);
  OracleResult r;
  r.hypotheses = lib.size(0);
  r.roots = max_log_gap(got.roots, ref.roots);
  r.joint = max_log_gap(got.joint, ref.joint);
  r.goals = max_log_gap(got.goals, ref.goals);
  return r;
}

/// Incremental stepping reproduces the batch posterior bit for bit at every prefix.
inline bool incremental_equals_batch(const Scenario& scn, const RunConfig& rc) {
  const BsipsConfig cfg = make_bsips_config(scn, rc);
  const auto obs = scn.observations();
  Bsips engine(scn.map, cfg, obs[0]);
  for (std::size_t t = 0; t < scn.actions.size(); ++t) {
    engine.step(scn.actions[t], obs[t + 1]);
    const std::vector<Action> prefix(scn.actions.begin(), scn.actions.begin() + static_cast<long>(t) + 1);
    const std::vector<Observation> prefix_obs(obs.begin(), obs.begin() + static_cast<long>(t) + 2);
    const Posterior batch = bsips(scn.map, cfg, prefix, prefix_obs);
    const Posterior& inc = engine.posterior();
    if (inc.horizon() != batch.horizon()) return false;
    for (int u = 0; u <= inc.horizon(); ++u)
      if (inc.log_weights(u) != batch.log_weights(u) || inc.weights(u) != batch.weights(u)) return false;
  }
  return true;
}

}  // namespace labtom::testkit
