#include "labtom/lowering.hpp"

#include <algorithm>
#include <cmath>

namespace labtom {

using elot::EpistemicFormula;
using elot::Op;

LoweredTerm LoweredTerm::prob(std::string agent, BaseFormula phi) {
  LoweredTerm t;
  t.kind = Kind::kProb;
  t.agent = std::move(agent);
  t.phi = std::move(phi);
  return t;
}

LoweredTerm LoweredTerm::theta(std::string name, int alpha_power) {
  LoweredTerm t;
  t.kind = Kind::kThreshold;
  t.threshold = std::move(name);
  t.alpha_power = alpha_power;
  return t;
}

double LoweredTerm::threshold_value(const ThresholdTable& th) const {
  const double v = th.get(threshold) * std::pow(th.alpha_most(), alpha_power);
  return std::clamp(v, 0.0, 1.0);
}

bool compare(double lhs, Comparator cmp, double rhs) {
  switch (cmp) {
    case Comparator::kGe: return lhs >= rhs - kCompareTolerance;
    case Comparator::kGt: return lhs > rhs + kCompareTolerance;
    case Comparator::kLe: return lhs <= rhs + kCompareTolerance;
    case Comparator::kLt: return lhs < rhs - kCompareTolerance;
  }
  return false;
}

LoweredFormula LoweredFormula::comparison(LoweredTerm lhs, Comparator cmp, LoweredTerm rhs) {
  LoweredFormula f;
  f.kind_ = Kind::kCompare;
  f.lhs_ = std::move(lhs);
  f.cmp_ = cmp;
  f.rhs_ = std::move(rhs);
  return f;
}

LoweredFormula LoweredFormula::base(BaseFormula phi) {
  LoweredFormula f;
  f.kind_ = Kind::kBase;
  f.base_ = std::move(phi);
  return f;
}

LoweredFormula LoweredFormula::conjunction(std::vector<LoweredFormula> children) {
  if (children.size() == 1) return std::move(children.front());
  LoweredFormula f;
  f.kind_ = Kind::kAnd;
  f.children_ = std::move(children);
  return f;
}

LoweredFormula LoweredFormula::disjunction(std::vector<LoweredFormula> children) {
  if (children.size() == 1) return std::move(children.front());
  LoweredFormula f;
  f.kind_ = Kind::kOr;
  f.children_ = std::move(children);
  return f;
}

LoweredFormula LoweredFormula::negation(LoweredFormula child) {
  LoweredFormula f;
  f.kind_ = Kind::kNot;
  f.children_.push_back(std::move(child));
  return f;
}

namespace {

using LF = LoweredFormula;

struct ClassBinding {
  std::string variable;
  const std::vector<std::string>* objects;
  std::vector<BaseFormula> extra;  // restriction conjuncts after the class atom
};

ClassBinding bind_class(const BaseFormula& restriction, const DomainSignature& sig, std::string_view op) {
  const bool conj = restriction.kind() == BaseFormula::Kind::kAnd;
  const BaseFormula& head = conj ? restriction.children().front() : restriction;
  ClassBinding b;
  b.variable = head.args().at(0).name;
  b.objects = sig.objects_of(head.predicate());
  if (!b.objects)
    throw LoweringError(std::string(op) + ": class '" + head.predicate() +
                        "' has no finite object list to expand over");
  if (conj) b.extra.assign(restriction.children().begin() + 1, restriction.children().end());
  return b;
}

LF pr_at_least(const std::string& agent, const BaseFormula& phi, const std::string& theta) {
  return LF::comparison(LoweredTerm::prob(agent, phi), Comparator::kGe, LoweredTerm::theta(theta));
}

LF knows_that(const std::string& agent, const BaseFormula& phi) {
  return LF::conjunction({pr_at_least(agent, phi, "believes"), LF::base(phi)});
}

LF knows_if(const std::string& agent, const BaseFormula& phi) {
  return LF::disjunction({knows_that(agent, phi), knows_that(agent, BaseFormula::negation(phi))});
}

LF lower_node(const EpistemicFormula& f, const DomainSignature& sig);

/// Applies a modal term (type E/A) to `agent`.
LF lower_modal(const EpistemicFormula& m, const std::string& agent, const DomainSignature& sig) {
  const std::string name(elot::info(m.op()).name);
  switch (m.op()) {
    case Op::kCould:
    case Op::kMight:
    case Op::kMay:
    case Op::kShould:
    case Op::kMust:
    case Op::kLikely:
      return pr_at_least(agent, m.formula(0), name);
    case Op::kUnlikely:
      return LF::comparison(LoweredTerm::prob(agent, m.formula(0)), Comparator::kLe,
                            LoweredTerm::theta("unlikely"));
    case Op::kMore:
    case Op::kLess:
      return LF::comparison(LoweredTerm::prob(agent, m.formula(1)),
                            m.op() == Op::kMore ? Comparator::kGt : Comparator::kLt,
                            LoweredTerm::prob(agent, m.formula(2)));
    case Op::kMostSup:
    case Op::kLeastSup: {
      const std::string& object = m.symbol(1).name;
      const ClassBinding b = bind_class(m.formula(2), sig, name);
      const BaseFormula chosen = m.formula(3).substitute(b.variable, object);
      std::vector<LF> parts;
      for (const std::string& o : *b.objects) {
        if (o == object) continue;
        LF cmp = LF::comparison(LoweredTerm::prob(agent, chosen),
                                m.op() == Op::kMostSup ? Comparator::kGe : Comparator::kLe,
                                LoweredTerm::prob(agent, m.formula(3).substitute(b.variable, o)));
        if (b.extra.empty()) {
          parts.push_back(std::move(cmp));
        } else {
          std::vector<LF> guard;
          for (const BaseFormula& e : b.extra) guard.push_back(LF::base(e.substitute(b.variable, o)));
          parts.push_back(LF::disjunction({LF::negation(LF::conjunction(std::move(guard))), std::move(cmp)}));
        }
      }
      return LF::conjunction(std::move(parts));
    }
    case Op::kMostStr:
      return LF::comparison(LoweredTerm::prob(agent, m.formula(1)), Comparator::kGe,
                            LoweredTerm::theta(m.symbol(0).name, 1));
    case Op::kLeastStr:
      return LF::comparison(LoweredTerm::prob(agent, m.formula(1)), Comparator::kLe,
                            LoweredTerm::theta(m.symbol(0).name, -1));
    default:
      break;
  }
  (void)sig;
  throw LoweringError("'" + name + "' is not a modal term");
}

LF lower_about(const EpistemicFormula& f, const DomainSignature& sig) {
  const std::string& agent = f.symbol(0).name;
  const std::string name(elot::info(f.op()).name);
  const ClassBinding b = bind_class(f.formula(1), sig, name);
  std::vector<LF> parts;
  for (const std::string& o : *b.objects) {
    const BaseFormula phi = f.formula(2).substitute(b.variable, o);
    switch (f.op()) {
      case Op::kKnowsAbout:
        parts.push_back(knows_that(agent, phi));
        break;
      case Op::kCertainAbout:
        parts.push_back(pr_at_least(agent, phi, "certain"));
        break;
      default:
        parts.push_back(LF::comparison(LoweredTerm::prob(agent, phi), Comparator::kLt,
                                       LoweredTerm::theta("uncertain")));
    }
  }
  return f.op() == Op::kUncertainAbout ? LF::conjunction(std::move(parts))
                                       : LF::disjunction(std::move(parts));
}

LF lower_quantifier(const EpistemicFormula& f, const DomainSignature& sig) {
  const bool exists = f.op() == Op::kExists;
  const ClassBinding b = bind_class(f.formula(0), sig, exists ? "exists" : "forall");
  std::vector<LF> parts;
  for (const std::string& o : *b.objects) {
    LF body = lower_node(f.child(1).substitute(b.variable, o), sig);
    std::vector<LF> guard;
    for (const BaseFormula& e : b.extra) guard.push_back(LF::base(e.substitute(b.variable, o)));
    if (guard.empty()) {
      parts.push_back(std::move(body));
    } else if (exists) {
      guard.push_back(std::move(body));
      parts.push_back(LF::conjunction(std::move(guard)));
    } else {
      parts.push_back(LF::disjunction({LF::negation(LF::conjunction(std::move(guard))), std::move(body)}));
    }
  }
  return exists ? LF::disjunction(std::move(parts)) : LF::conjunction(std::move(parts));
}

LF lower_node(const EpistemicFormula& f, const DomainSignature& sig) {
  switch (f.op()) {
    case Op::kBelieves:
      return pr_at_least(f.symbol(0).name, f.formula(1), "believes");
    case Op::kBelievesModal:
      return lower_modal(f.child(1), f.symbol(0).name, sig);
    case Op::kKnowsThat:
      return knows_that(f.symbol(0).name, f.formula(1));
    case Op::kKnowsIf:
      return knows_if(f.symbol(0).name, f.formula(1));
    case Op::kNotKnowsThat:
      return LF::conjunction(
          {LF::negation(pr_at_least(f.symbol(0).name, f.formula(1), "believes")), LF::base(f.formula(1))});
    case Op::kNotKnowsIf:
      return LF::negation(knows_if(f.symbol(0).name, f.formula(1)));
    case Op::kCertainThat:
      return pr_at_least(f.symbol(0).name, f.formula(1), "certain");
    case Op::kUncertainIf: {
      const std::string& agent = f.symbol(0).name;
      return LF::conjunction(
          {LF::comparison(LoweredTerm::prob(agent, f.formula(1)), Comparator::kLt, LoweredTerm::theta("uncertain")),
           LF::comparison(LoweredTerm::prob(agent, f.formula(2)), Comparator::kLt, LoweredTerm::theta("uncertain"))});
    }
    case Op::kKnowsAbout:
    case Op::kCertainAbout:
    case Op::kUncertainAbout:
      return lower_about(f, sig);
    case Op::kAnd:
    case Op::kOr: {
      std::vector<LF> parts;
      for (std::size_t i = 0; i < f.args().size(); ++i) parts.push_back(lower_node(f.child(i), sig));
      return f.op() == Op::kAnd ? LF::conjunction(std::move(parts)) : LF::disjunction(std::move(parts));
    }
    case Op::kNot:
      return LF::negation(lower_node(f.child(0), sig));
    case Op::kImplies:
      return LF::disjunction({LF::negation(lower_node(f.child(0), sig)), lower_node(f.child(1), sig)});
    case Op::kExists:
    case Op::kForall:
      return lower_quantifier(f, sig);
    default:
      break;
  }
  throw LoweringError("cannot lower '" + std::string(elot::info(f.op()).name) +
                      "' as a statement: expected type E");
}

const char* comparator_name(Comparator c) {
  switch (c) {
    case Comparator::kGe: return ">=";
    case Comparator::kGt: return ">";
    case Comparator::kLe: return "<=";
    case Comparator::kLt: return "<";
  }
  return "?";
}

void collect(const LF& f, std::vector<BaseFormula>& out) {
  auto add = [&](const LoweredTerm& t) {
    if (t.kind == LoweredTerm::Kind::kProb && std::find(out.begin(), out.end(), t.phi) == out.end())
      out.push_back(t.phi);
  };
  if (f.kind() == LF::Kind::kCompare) {
    add(f.lhs());
    add(f.rhs());
  }
  for (const LF& c : f.children()) collect(c, out);
}

}  // namespace

LoweredFormula lower(const EpistemicFormula& f, const DomainSignature& sig) {
  elot::typecheck(f, sig);
  return lower_node(f, sig);
}

std::string to_string(const LoweredTerm& t) {
  if (t.kind == LoweredTerm::Kind::kProb) return "prob_of(" + t.agent + ", " + to_string(t.phi) + ")";
  const std::string theta = "threshold(" + t.threshold + ")";
  if (t.alpha_power > 0) return "min(1, times(multiplier(most), " + theta + "))";
  if (t.alpha_power < 0) return "divide(" + theta + ", multiplier(most))";
  return theta;
}

std::string to_string(const LoweredFormula& f) {
  switch (f.kind()) {
    case LF::Kind::kCompare:
      return std::string(comparator_name(f.comparator())) + "(" + to_string(f.lhs()) + ", " + to_string(f.rhs()) + ")";
    case LF::Kind::kBase:
      return to_string(f.base_formula());
    case LF::Kind::kNot:
      return "not(" + to_string(f.children().front()) + ")";
    case LF::Kind::kAnd:
    case LF::Kind::kOr: {
      if (f.children().empty()) return f.kind() == LF::Kind::kAnd ? "true" : "false";
      std::string out = f.kind() == LF::Kind::kAnd ? "and(" : "or(";
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += ", ";
        out += to_string(f.children()[i]);
      }
      return out + ")";
    }
  }
  return "?";
}

bool evaluate(const LoweredFormula& f, const ThresholdTable& th, const ProbFn& prob, const TruthFn& truth) {
  switch (f.kind()) {
    case LF::Kind::kCompare: {
      auto value = [&](const LoweredTerm& t) {
        return t.kind == LoweredTerm::Kind::kProb ? prob(t.agent, t.phi) : t.threshold_value(th);
      };
      return compare(value(f.lhs()), f.comparator(), value(f.rhs()));
    }
    case LF::Kind::kBase:
      return truth(f.base_formula());
    case LF::Kind::kNot:
      return !evaluate(f.children().front(), th, prob, truth);
    case LF::Kind::kAnd:
      return std::all_of(f.children().begin(), f.children().end(),
                         [&](const LF& c) { return evaluate(c, th, prob, truth); });
    case LF::Kind::kOr:
      return std::any_of(f.children().begin(), f.children().end(),
                         [&](const LF& c) { return evaluate(c, th, prob, truth); });
  }
  return false;
}

std::vector<BaseFormula> prob_formulas(const LoweredFormula& f) {
  std::vector<BaseFormula> out;
  collect(f, out);
  return out;
}

}  // namespace labtom
