// Rewriting of epistemic formulas into probability comparisons.
//
//   believes(player, formula(empty(box3)))
//     => >=(prob_of(player, empty(box3)), threshold(believes))
//
// Thresholds stay symbolic in the lowered form and are resolved against a
// ThresholdTable only at evaluation time.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "labtom/base_formula.hpp"
#include "labtom/domain.hpp"
#include "labtom/elot.hpp"
#include "labtom/thresholds.hpp"

namespace labtom {

/// prob_of(agent, phi), or a threshold optionally scaled by alpha_most.
struct LoweredTerm {
  enum class Kind : std::uint8_t { kProb, kThreshold };

  Kind kind = Kind::kProb;
  std::string agent;      // kProb
  BaseFormula phi;        // kProb
  std::string threshold;  // kThreshold
  int alpha_power = 0;    // kThreshold: value = clamp(theta * alpha^power, 0, 1)

  static LoweredTerm prob(std::string agent, BaseFormula phi);
  static LoweredTerm theta(std::string name, int alpha_power = 0);
  double threshold_value(const ThresholdTable& th) const;

  friend bool operator==(const LoweredTerm&, const LoweredTerm&) = default;
};

enum class Comparator : std::uint8_t { kGe, kGt, kLe, kLt };

/// Tolerance used for every probability comparison.
inline constexpr double kCompareTolerance = 1e-9;
bool compare(double lhs, Comparator cmp, double rhs);

class LoweredFormula {
 public:
  enum class Kind : std::uint8_t { kCompare, kBase, kAnd, kOr, kNot };

  static LoweredFormula comparison(LoweredTerm lhs, Comparator cmp, LoweredTerm rhs);
  static LoweredFormula base(BaseFormula phi);
  /// Empty conjunction is true, empty disjunction false; singletons collapse.
  static LoweredFormula conjunction(std::vector<LoweredFormula> children);
  static LoweredFormula disjunction(std::vector<LoweredFormula> children);
  static LoweredFormula negation(LoweredFormula child);

  Kind kind() const { return kind_; }
  const LoweredTerm& lhs() const { return lhs_; }
  const LoweredTerm& rhs() const { return rhs_; }
  Comparator comparator() const { return cmp_; }
  const BaseFormula& base_formula() const { return base_; }
  const std::vector<LoweredFormula>& children() const { return children_; }

  friend bool operator==(const LoweredFormula&, const LoweredFormula&) = default;

 private:
  Kind kind_ = Kind::kAnd;
  LoweredTerm lhs_, rhs_;
  Comparator cmp_ = Comparator::kGe;
  BaseFormula base_;
  std::vector<LoweredFormula> children_;
};

/// Expands an epistemic formula (type E) into a LoweredFormula. Quantifiers
/// and the *_about / most_sup operators are expanded over the class's static
/// object list in `sig`; throws LoweringError for classes without one.
LoweredFormula lower(const elot::EpistemicFormula& f, const DomainSignature& sig = default_signature());

/// `>=(prob_of(player, empty(box3)), threshold(believes))` style text.
std::string to_string(const LoweredFormula& f);
std::string to_string(const LoweredTerm& t);

using ProbFn = std::function<double(const std::string& agent, const BaseFormula& phi)>;
using TruthFn = std::function<bool(const BaseFormula& phi)>;

bool evaluate(const LoweredFormula& f, const ThresholdTable& th, const ProbFn& prob, const TruthFn& truth);

/// Every distinct prob_of formula, in first-occurrence order.
std::vector<BaseFormula> prob_formulas(const LoweredFormula& f);

}  // namespace labtom
