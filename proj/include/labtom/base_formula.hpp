// First-order base formulas over a PDDL-style predicate vocabulary.

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace labtom {

/// A predicate argument: a ground object constant (lowercase) or a variable
/// (uppercase initial).
struct Term {
  enum class Kind : std::uint8_t { kConstant, kVariable };

  Kind kind = Kind::kConstant;
  std::string name;

  static Term constant(std::string name) { return {Kind::kConstant, std::move(name)}; }
  static Term variable(std::string name) { return {Kind::kVariable, std::move(name)}; }
  bool is_variable() const { return kind == Kind::kVariable; }

  friend bool operator==(const Term&, const Term&) = default;
};

/// Quantifier-restricted first-order formula.
///
/// Quantifiers take a restriction and a body. The restriction is either a
/// unary class atom such as `key(K)` or a conjunction whose first conjunct is
/// such an atom, e.g. `and(key(K), iscolor(K, red))`. The class atom's
/// variable is the one bound by the quantifier.
class BaseFormula {
 public:
  enum class Kind : std::uint8_t { kAtom, kAnd, kOr, kNot, kImplies, kExists, kForall };

  BaseFormula() = default;

  static BaseFormula atom(std::string predicate, std::vector<Term> args);
  static BaseFormula conjunction(std::vector<BaseFormula> children);
  static BaseFormula disjunction(std::vector<BaseFormula> children);
  static BaseFormula negation(BaseFormula child);
  static BaseFormula implication(BaseFormula antecedent, BaseFormula consequent);
  /// Throws std::invalid_argument if `restriction` does not lead with a class atom.
  static BaseFormula exists(BaseFormula restriction, BaseFormula body);
  static BaseFormula forall(BaseFormula restriction, BaseFormula body);

  Kind kind() const { return kind_; }
  bool is_atom() const { return kind_ == Kind::kAtom; }
  bool is_quantifier() const { return kind_ == Kind::kExists || kind_ == Kind::kForall; }

  const std::string& predicate() const { return predicate_; }
  const std::vector<Term>& args() const { return args_; }
  const std::vector<BaseFormula>& children() const { return children_; }

  // Quantifier accessors.
  const BaseFormula& restriction() const { return children_.at(0); }
  const BaseFormula& body() const { return children_.at(1); }
  const BaseFormula& class_atom() const;
  const std::string& bound_variable() const { return class_atom().args_.front().name; }
  const std::string& bound_class() const { return class_atom().predicate_; }

  /// Replaces free occurrences of `variable` by the constant `object`.
  BaseFormula substitute(const std::string& variable, const std::string& object) const;
  std::set<std::string> free_variables() const;

  friend bool operator==(const BaseFormula&, const BaseFormula&) = default;

 private:
  static bool leads_with_class_atom(const BaseFormula& restriction);
  void collect_free(std::set<std::string>& bound, std::set<std::string>& out) const;

  Kind kind_ = Kind::kAtom;
  std::string predicate_;
  std::vector<Term> args_;
  std::vector<BaseFormula> children_;
};

/// Canonical concrete syntax, e.g. `exists(key(K), inside(K, box3))`.
std::string to_string(const BaseFormula& formula);
const char* kind_name(BaseFormula::Kind kind);

}  // namespace labtom
