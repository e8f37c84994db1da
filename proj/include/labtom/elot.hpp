// Epistemic language of thought: typed AST, concrete syntax and type checker.
//
// Concrete syntax is Prolog-like: `op(arg, ...)`, lowercase identifiers for
// operators, predicates and objects, uppercase identifiers for variables.
// Operator arguments typed as a base formula (Φ) are wrapped in
// `formula(...)`; arguments of modal verbs/adjectives, comparatives and the
// formula argument of the *_about operators are written bare.
//
//   believes(player, formula(empty(box3)))
//   believes(player, might(exists(key(K), inside(K, box1))))
//   forall(box(B), knows_about(player, color(C),
//          exists(and(key(K), inside(K, B)), iscolor(K, C))))

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "labtom/base_formula.hpp"
#include "labtom/domain.hpp"
#include "labtom/errors.hpp"

namespace labtom::elot {

enum class Op : std::uint8_t {
  // belief
  kBelieves,
  kBelievesModal,
  // knowledge
  kKnowsThat,
  kKnowsIf,
  kKnowsAbout,
  kNotKnowsThat,
  kNotKnowsIf,
  // certainty
  kCertainThat,
  kCertainAbout,
  kUncertainIf,
  kUncertainAbout,
  // modal verbs
  kCould,
  kMight,
  kMay,
  kShould,
  kMust,
  // modal adjectives
  kLikely,
  kUnlikely,
  kDegree,
  // comparatives
  kMore,
  kLess,
  kMostSup,
  kMostStr,
  kLeastSup,
  kLeastStr,
  // connectives and quantifiers over epistemic formulas
  kAnd,
  kOr,
  kNot,
  kImplies,
  kExists,
  kForall,
};

/// 𝓔 (epistemic formula), 𝓔/𝓐 (function from agent to epistemic formula)
/// and Φ_𝓕 (numeric function term).
enum class Type : std::uint8_t { kEpistemic, kModal, kFunction };

/// What an operator expects at one argument position.
enum class Slot : std::uint8_t {
  kAgent,        // 𝓐
  kPredicate,    // 𝓟, e.g. likely
  kObject,       // 𝓞
  kClass,        // class atom binding a variable, e.g. color(C)
  kFormula,      // Φ written as formula(...)
  kBareFormula,  // Φ written bare
  kOpenFormula,  // Φ/𝓞: bare formula over the variable bound by the preceding kClass
  kModal,        // 𝓔/𝓐
  kEpistemic,    // 𝓔
  kRestriction,  // quantifier restriction over epistemic formulas, e.g. box(B)
};

struct OpInfo {
  Op op;
  std::string_view name;  // concrete-syntax functor
  std::vector<Slot> slots;
  bool variadic = false;  // last slot repeats (and/or)
  Type result;
};

const OpInfo& info(Op op);
/// Operators whose functor is `name`; kBelieves and kBelievesModal share one.
std::vector<Op> ops_named(std::string_view name);
std::string_view type_name(Type type);
std::string_view slot_name(Slot slot);

class EpistemicFormula;
using FormulaPtr = std::shared_ptr<const EpistemicFormula>;

/// Agent, predicate symbol or object constant (or a variable standing for an
/// object, bound by an epistemic quantifier).
struct Symbol {
  std::string name;
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

using Argument = std::variant<Symbol, BaseFormula, FormulaPtr>;

/// Immutable ELoT node: an operator applied to positional arguments.
///
/// Nodes may be built ill-typed (for example `might(believes(...))`);
/// typecheck() reports such trees. The parser only produces well-typed nodes.
class EpistemicFormula {
 public:
  EpistemicFormula(Op op, std::vector<Argument> args) : op_(op), args_(std::move(args)) {}

  Op op() const { return op_; }
  const std::vector<Argument>& args() const { return args_; }

  const Symbol& symbol(std::size_t i) const { return std::get<Symbol>(args_.at(i)); }
  const BaseFormula& formula(std::size_t i) const { return std::get<BaseFormula>(args_.at(i)); }
  const EpistemicFormula& child(std::size_t i) const { return *std::get<FormulaPtr>(args_.at(i)); }

  /// Replaces free occurrences of `variable` (in base formulas and symbol
  /// arguments) by `object`.
  EpistemicFormula substitute(const std::string& variable, const std::string& object) const;

  friend bool operator==(const EpistemicFormula& a, const EpistemicFormula& b);

 private:
  Op op_;
  std::vector<Argument> args_;
};

// Builders. Agents default to the single modeled agent.
inline constexpr const char* kPlayer = "player";

FormulaPtr make(Op op, std::vector<Argument> args);
FormulaPtr believes(BaseFormula phi, std::string agent = kPlayer);
FormulaPtr believes_modal(FormulaPtr modal, std::string agent = kPlayer);
FormulaPtr knows_that(BaseFormula phi, std::string agent = kPlayer);
FormulaPtr knows_if(BaseFormula phi, std::string agent = kPlayer);
FormulaPtr not_knows_that(BaseFormula phi, std::string agent = kPlayer);
FormulaPtr certain_that(BaseFormula phi, std::string agent = kPlayer);
FormulaPtr uncertain_if(BaseFormula phi, BaseFormula psi, std::string agent = kPlayer);
/// knows_about / certain_about / uncertain_about.
FormulaPtr about(Op op, BaseFormula class_atom, BaseFormula phi, std::string agent = kPlayer);
/// could, might, may, should, must, likely, unlikely.
FormulaPtr modal(Op op, BaseFormula phi);
FormulaPtr more(BaseFormula phi, BaseFormula psi, std::string predicate = "likely");
FormulaPtr less(BaseFormula phi, BaseFormula psi, std::string predicate = "likely");
FormulaPtr most_sup(std::string object, BaseFormula class_atom, BaseFormula phi,
                    std::string predicate = "likely");
FormulaPtr most_str(BaseFormula phi, std::string predicate = "likely");
FormulaPtr degree(BaseFormula phi, std::string predicate = "likely", std::string agent = kPlayer);
FormulaPtr negation(FormulaPtr f);
FormulaPtr conjunction(std::vector<FormulaPtr> fs);

/// Degree predicates accepted in 𝓟 positions (the threshold names).
bool is_degree_predicate(std::string_view name);

/// Returns the type of a well-typed node; throws TypeError naming the
/// offending operator otherwise and UnknownSymbolError for vocabulary
/// outside `sig`.
Type typecheck(const EpistemicFormula& f, const DomainSignature& sig = default_signature());

/// Parses and type-checks one statement. The top level must be 𝓔 unless
/// `allow_any_type` is set (then modal and degree terms are accepted too).
/// Throws SyntaxError, TypeError or UnknownSymbolError.
FormulaPtr parse(std::string_view text, const DomainSignature& sig = default_signature(),
                 bool allow_any_type = false);

/// Canonical concrete syntax; parse(print(f)) == f for well-typed f.
std::string print(const EpistemicFormula& f);

/// Parses a bare base formula in the same concrete syntax.
BaseFormula parse_base(std::string_view text, const DomainSignature& sig = default_signature());

}  // namespace labtom::elot
