#include "labtom/base_formula.hpp"

#include <stdexcept>

namespace labtom {

BaseFormula BaseFormula::atom(std::string predicate, std::vector<Term> args) {
  BaseFormula f;
  f.kind_ = Kind::kAtom;
  f.predicate_ = std::move(predicate);
  f.args_ = std::move(args);
  return f;
}

BaseFormula BaseFormula::conjunction(std::vector<BaseFormula> children) {
  if (children.size() < 2) throw std::invalid_argument("and() needs at least two operands");
  BaseFormula f;
  f.kind_ = Kind::kAnd;
  f.children_ = std::move(children);
  return f;
}

BaseFormula BaseFormula::disjunction(std::vector<BaseFormula> children) {
  if (children.size() < 2) throw std::invalid_argument("or() needs at least two operands");
  BaseFormula f;
  f.kind_ = Kind::kOr;
  f.children_ = std::move(children);
  return f;
}

BaseFormula BaseFormula::negation(BaseFormula child) {
  BaseFormula f;
  f.kind_ = Kind::kNot;
  f.children_.push_back(std::move(child));
  return f;
}

BaseFormula BaseFormula::implication(BaseFormula antecedent, BaseFormula consequent) {
  BaseFormula f;
  f.kind_ = Kind::kImplies;
  f.children_.push_back(std::move(antecedent));
  f.children_.push_back(std::move(consequent));
  return f;
}

bool BaseFormula::leads_with_class_atom(const BaseFormula& restriction) {
  const BaseFormula* head = &restriction;
  if (head->kind_ == Kind::kAnd) head = &head->children_.front();
  return head->kind_ == Kind::kAtom && head->args_.size() == 1 && head->args_[0].is_variable();
}

BaseFormula BaseFormula::exists(BaseFormula restriction, BaseFormula body) {
  if (!leads_with_class_atom(restriction))
    throw std::invalid_argument("quantifier restriction must start with a class atom such as key(K)");
  BaseFormula f;
  f.kind_ = Kind::kExists;
  f.children_.push_back(std::move(restriction));
  f.children_.push_back(std::move(body));
  return f;
}

BaseFormula BaseFormula::forall(BaseFormula restriction, BaseFormula body) {
  BaseFormula f = exists(std::move(restriction), std::move(body));
  f.kind_ = Kind::kForall;
  return f;
}

const BaseFormula& BaseFormula::class_atom() const {
  if (!is_quantifier()) throw std::logic_error("class_atom() on a non-quantifier");
  const BaseFormula& r = children_.front();
  return r.kind_ == Kind::kAnd ? r.children_.front() : r;
}

BaseFormula BaseFormula::substitute(const std::string& variable, const std::string& object) const {
  BaseFormula out = *this;
  if (is_quantifier() && bound_variable() == variable) return out;  // shadowed
  for (Term& t : out.args_)
    if (t.is_variable() && t.name == variable) t = Term::constant(object);
  for (BaseFormula& c : out.children_) c = c.substitute(variable, object);
  return out;
}

void BaseFormula::collect_free(std::set<std::string>& bound, std::set<std::string>& out) const {
  if (kind_ == Kind::kAtom) {
    for (const Term& t : args_)
      if (t.is_variable() && !bound.count(t.name)) out.insert(t.name);
    return;
  }
  if (is_quantifier()) {
    const std::string var = bound_variable();
    const bool fresh = bound.insert(var).second;
    for (const BaseFormula& c : children_) c.collect_free(bound, out);
    if (fresh) bound.erase(var);
    return;
  }
  for (const BaseFormula& c : children_) c.collect_free(bound, out);
}

std::set<std::string> BaseFormula::free_variables() const {
  std::set<std::string> bound, out;
  collect_free(bound, out);
  return out;
}

const char* kind_name(BaseFormula::Kind kind) {
  switch (kind) {
    case BaseFormula::Kind::kAtom: return "atom";
    case BaseFormula::Kind::kAnd: return "and";
    case BaseFormula::Kind::kOr: return "or";
    case BaseFormula::Kind::kNot: return "not";
    case BaseFormula::Kind::kImplies: return "implies";
    case BaseFormula::Kind::kExists: return "exists";
    case BaseFormula::Kind::kForall: return "forall";
  }
  return "?";
}

namespace {

void print(const BaseFormula& f, std::string& out) {
  if (f.is_atom()) {
    out += f.predicate();
    if (f.args().empty()) return;
    out += '(';
    for (size_t i = 0; i < f.args().size(); ++i) {
      if (i) out += ", ";
      out += f.args()[i].name;
    }
    out += ')';
    return;
  }
  out += kind_name(f.kind());
  out += '(';
  for (size_t i = 0; i < f.children().size(); ++i) {
    if (i) out += ", ";
    print(f.children()[i], out);
  }
  out += ')';
}

}  // namespace

std::string to_string(const BaseFormula& formula) {
  std::string out;
  print(formula, out);
  return out;
}

}  // namespace labtom
