#include "labtom/elot.hpp"

#include <algorithm>
#include <array>

namespace labtom::elot {
namespace {

using S = Slot;

const std::vector<OpInfo>& table() {
  static const std::vector<OpInfo> ops = {
      {Op::kBelieves, "believes", {S::kAgent, S::kFormula}, false, Type::kEpistemic},
      {Op::kBelievesModal, "believes", {S::kAgent, S::kModal}, false, Type::kEpistemic},
      {Op::kKnowsThat, "knows_that", {S::kAgent, S::kFormula}, false, Type::kEpistemic},
      {Op::kKnowsIf, "knows_if", {S::kAgent, S::kFormula}, false, Type::kEpistemic},
      {Op::kKnowsAbout, "knows_about", {S::kAgent, S::kClass, S::kOpenFormula}, false, Type::kEpistemic},
      {Op::kNotKnowsThat, "not_knows_that", {S::kAgent, S::kFormula}, false, Type::kEpistemic},
      {Op::kNotKnowsIf, "not_knows_if", {S::kAgent, S::kFormula}, false, Type::kEpistemic},
      {Op::kCertainThat, "certain_that", {S::kAgent, S::kFormula}, false, Type::kEpistemic},
      {Op::kCertainAbout, "certain_about", {S::kAgent, S::kClass, S::kOpenFormula}, false, Type::kEpistemic},
      {Op::kUncertainIf, "uncertain_if", {S::kAgent, S::kFormula, S::kFormula}, false, Type::kEpistemic},
      {Op::kUncertainAbout, "uncertain_about", {S::kAgent, S::kClass, S::kOpenFormula}, false, Type::kEpistemic},
      {Op::kCould, "could", {S::kBareFormula}, false, Type::kModal},
      {Op::kMight, "might", {S::kBareFormula}, false, Type::kModal},
      {Op::kMay, "may", {S::kBareFormula}, false, Type::kModal},
      {Op::kShould, "should", {S::kBareFormula}, false, Type::kModal},
      {Op::kMust, "must", {S::kBareFormula}, false, Type::kModal},
      {Op::kLikely, "likely", {S::kBareFormula}, false, Type::kModal},
      {Op::kUnlikely, "unlikely", {S::kBareFormula}, false, Type::kModal},
      {Op::kDegree, "degree", {S::kPredicate, S::kAgent, S::kFormula}, false, Type::kFunction},
      {Op::kMore, "more", {S::kPredicate, S::kBareFormula, S::kBareFormula}, false, Type::kModal},
      {Op::kLess, "less", {S::kPredicate, S::kBareFormula, S::kBareFormula}, false, Type::kModal},
      {Op::kMostSup, "most_sup", {S::kPredicate, S::kObject, S::kClass, S::kOpenFormula}, false, Type::kModal},
      {Op::kMostStr, "most_str", {S::kPredicate, S::kBareFormula}, false, Type::kModal},
      {Op::kLeastSup, "least_sup", {S::kPredicate, S::kObject, S::kClass, S::kOpenFormula}, false, Type::kModal},
      {Op::kLeastStr, "least_str", {S::kPredicate, S::kBareFormula}, false, Type::kModal},
      {Op::kAnd, "and", {S::kEpistemic, S::kEpistemic}, true, Type::kEpistemic},
      {Op::kOr, "or", {S::kEpistemic, S::kEpistemic}, true, Type::kEpistemic},
      {Op::kNot, "not", {S::kEpistemic}, false, Type::kEpistemic},
      {Op::kImplies, "implies", {S::kEpistemic, S::kEpistemic}, false, Type::kEpistemic},
      {Op::kExists, "exists", {S::kRestriction, S::kEpistemic}, false, Type::kEpistemic},
      {Op::kForall, "forall", {S::kRestriction, S::kEpistemic}, false, Type::kEpistemic},
  };
  return ops;
}

std::string describe(const Argument& arg, const DomainSignature& sig) {
  if (auto* s = std::get_if<Symbol>(&arg)) return "symbol '" + s->name + "'";
  if (std::holds_alternative<BaseFormula>(arg)) return "Phi";
  const FormulaPtr& f = std::get<FormulaPtr>(arg);
  if (!f) return "null";
  return std::string(type_name(typecheck(*f, sig)));
}

bool is_variable_name(const std::string& name) {
  return !name.empty() && name[0] >= 'A' && name[0] <= 'Z';
}

const BaseFormula& leading_atom(const BaseFormula& restriction) {
  return restriction.kind() == BaseFormula::Kind::kAnd ? restriction.children().front() : restriction;
}

Type check_node(const EpistemicFormula& f, const DomainSignature& sig,
                const std::set<std::string>& scope) {
  const OpInfo& oi = info(f.op());
  const std::string op(oi.name);
  const std::size_t n = f.args().size();
  const bool arity_ok = oi.variadic ? n >= oi.slots.size() : n == oi.slots.size();
  if (!arity_ok)
    throw TypeError(op, std::to_string(oi.slots.size()) + (oi.variadic ? "+" : "") + " arguments",
                    std::to_string(n) + " arguments");

  std::set<std::string> local = scope;
  for (std::size_t i = 0; i < n; ++i) {
    const Slot slot = oi.slots[std::min(i, oi.slots.size() - 1)];
    const Argument& arg = f.args()[i];
    const std::string want(slot_name(slot));
    switch (slot) {
      case S::kAgent:
      case S::kPredicate:
      case S::kObject: {
        const Symbol* s = std::get_if<Symbol>(&arg);
        if (!s) throw TypeError(op, want, describe(arg, sig));
        const bool ok = slot == S::kAgent       ? sig.is_agent(s->name)
                        : slot == S::kPredicate ? is_degree_predicate(s->name)
                                                : sig.is_object(s->name) ||
                                                      (is_variable_name(s->name) && local.count(s->name));
        if (!ok) {
          if (slot == S::kObject && !is_variable_name(s->name))
            throw UnknownSymbolError("unknown object '" + s->name + "'");
          throw TypeError(op, want, describe(arg, sig));
        }
        break;
      }
      case S::kClass: {
        const BaseFormula* b = std::get_if<BaseFormula>(&arg);
        if (!b || !b->is_atom() || b->args().size() != 1 || !b->args()[0].is_variable())
          throw TypeError(op, want, describe(arg, sig));
        if (!sig.is_class(b->predicate()))
          throw UnknownSymbolError("'" + b->predicate() + "' is not an object class");
        local.insert(b->args()[0].name);
        break;
      }
      case S::kRestriction: {
        const BaseFormula* b = std::get_if<BaseFormula>(&arg);
        if (!b) throw TypeError(op, want, describe(arg, sig));
        const BaseFormula& head = leading_atom(*b);
        if (!head.is_atom() || head.args().size() != 1 || !head.args()[0].is_variable())
          throw TypeError(op, want, "Phi");
        if (!sig.is_class(head.predicate()))
          throw UnknownSymbolError("'" + head.predicate() + "' is not an object class");
        local.insert(head.args()[0].name);
        sig.check(*b, local);
        break;
      }
      case S::kFormula:
      case S::kBareFormula:
      case S::kOpenFormula: {
        const BaseFormula* b = std::get_if<BaseFormula>(&arg);
        if (!b) throw TypeError(op, want, describe(arg, sig));
        sig.check(*b, local);
        break;
      }
      case S::kModal:
      case S::kEpistemic: {
        const FormulaPtr* c = std::get_if<FormulaPtr>(&arg);
        if (!c || !*c) throw TypeError(op, want, describe(arg, sig));
        const Type t = check_node(**c, sig, local);
        const Type expected = slot == S::kModal ? Type::kModal : Type::kEpistemic;
        if (t != expected) throw TypeError(op, want, std::string(type_name(t)));
        break;
      }
    }
  }
  return oi.result;
}

void print_node(const EpistemicFormula& f, std::string& out) {
  const OpInfo& oi = info(f.op());
  out += oi.name;
  out += '(';
  for (std::size_t i = 0; i < f.args().size(); ++i) {
    if (i) out += ", ";
    const Slot slot = oi.slots[std::min(i, oi.slots.size() - 1)];
    const Argument& arg = f.args()[i];
    if (auto* s = std::get_if<Symbol>(&arg)) {
      out += s->name;
    } else if (auto* b = std::get_if<BaseFormula>(&arg)) {
      if (slot == S::kFormula) {
        out += "formula(";
        out += to_string(*b);
        out += ')';
      } else {
        out += to_string(*b);
      }
    } else {
      print_node(*std::get<FormulaPtr>(arg), out);
    }
  }
  out += ')';
}

}  // namespace

const OpInfo& info(Op op) { return table().at(static_cast<std::size_t>(op)); }

std::vector<Op> ops_named(std::string_view name) {
  std::vector<Op> out;
  for (const OpInfo& oi : table())
    if (oi.name == name) out.push_back(oi.op);
  return out;
}

std::string_view type_name(Type type) {
  switch (type) {
    case Type::kEpistemic: return "E";
    case Type::kModal: return "E/A";
    case Type::kFunction: return "Phi_F";
  }
  return "?";
}

std::string_view slot_name(Slot slot) {
  switch (slot) {
    case S::kAgent: return "A";
    case S::kPredicate: return "P";
    case S::kObject: return "O";
    case S::kClass: return "class atom such as color(C)";
    case S::kFormula: return "Phi wrapped in formula(...)";
    case S::kBareFormula: return "Phi";
    case S::kOpenFormula: return "Phi/O";
    case S::kModal: return "E/A";
    case S::kEpistemic: return "E";
    case S::kRestriction: return "quantifier restriction such as box(B)";
  }
  return "?";
}

bool is_degree_predicate(std::string_view name) {
  static constexpr std::array<std::string_view, 10> kNames = {
      "believes", "certain", "uncertain", "likely", "unlikely",
      "could",    "might",   "may",       "should", "must"};
  return std::find(kNames.begin(), kNames.end(), name) != kNames.end();
}

bool operator==(const EpistemicFormula& a, const EpistemicFormula& b) {
  if (a.op_ != b.op_ || a.args_.size() != b.args_.size()) return false;
  for (std::size_t i = 0; i < a.args_.size(); ++i) {
    const Argument& x = a.args_[i];
    const Argument& y = b.args_[i];
    if (x.index() != y.index()) return false;
    if (auto* fx = std::get_if<FormulaPtr>(&x)) {
      const FormulaPtr& fy = std::get<FormulaPtr>(y);
      if (!*fx || !fy) {
        if (*fx != fy) return false;
      } else if (!(**fx == *fy)) {
        return false;
      }
    } else if (!(x == y)) {
      return false;
    }
  }
  return true;
}

EpistemicFormula EpistemicFormula::substitute(const std::string& variable,
                                              const std::string& object) const {
  // A class or restriction argument that rebinds `variable` shadows it for
  // itself and every later argument.
  const OpInfo& oi = info(op_);
  std::size_t binder = args_.size();
  for (std::size_t i = 0; i < args_.size() && binder == args_.size(); ++i) {
    const Slot slot = oi.slots[std::min(i, oi.slots.size() - 1)];
    if (slot != S::kClass && slot != S::kRestriction) continue;
    if (const auto* b = std::get_if<BaseFormula>(&args_[i])) {
      const BaseFormula& head = leading_atom(*b);
      if (head.is_atom() && head.args().size() == 1 && head.args()[0].name == variable) binder = i;
    }
  }

  std::vector<Argument> args;
  args.reserve(args_.size());
  for (std::size_t i = 0; i < args_.size(); ++i) {
    const Argument& arg = args_[i];
    if (i >= binder) {
      args.push_back(arg);
    } else if (const auto* s = std::get_if<Symbol>(&arg)) {
      args.push_back(s->name == variable ? Symbol{object} : *s);
    } else if (const auto* b = std::get_if<BaseFormula>(&arg)) {
      args.push_back(b->substitute(variable, object));
    } else {
      const FormulaPtr& c = std::get<FormulaPtr>(arg);
      args.push_back(c ? std::make_shared<const EpistemicFormula>(c->substitute(variable, object)) : c);
    }
  }
  return EpistemicFormula(op_, std::move(args));
}

FormulaPtr make(Op op, std::vector<Argument> args) {
  return std::make_shared<const EpistemicFormula>(op, std::move(args));
}

FormulaPtr believes(BaseFormula phi, std::string agent) {
  return make(Op::kBelieves, {Symbol{std::move(agent)}, std::move(phi)});
}
FormulaPtr believes_modal(FormulaPtr m, std::string agent) {
  return make(Op::kBelievesModal, {Symbol{std::move(agent)}, std::move(m)});
}
FormulaPtr knows_that(BaseFormula phi, std::string agent) {
  return make(Op::kKnowsThat, {Symbol{std::move(agent)}, std::move(phi)});
}
FormulaPtr knows_if(BaseFormula phi, std::string agent) {
  return make(Op::kKnowsIf, {Symbol{std::move(agent)}, std::move(phi)});
}
FormulaPtr not_knows_that(BaseFormula phi, std::string agent) {
  return make(Op::kNotKnowsThat, {Symbol{std::move(agent)}, std::move(phi)});
}
FormulaPtr certain_that(BaseFormula phi, std::string agent) {
  return make(Op::kCertainThat, {Symbol{std::move(agent)}, std::move(phi)});
}
FormulaPtr uncertain_if(BaseFormula phi, BaseFormula psi, std::string agent) {
  return make(Op::kUncertainIf, {Symbol{std::move(agent)}, std::move(phi), std::move(psi)});
}
FormulaPtr about(Op op, BaseFormula class_atom, BaseFormula phi, std::string agent) {
  return make(op, {Symbol{std::move(agent)}, std::move(class_atom), std::move(phi)});
}
FormulaPtr modal(Op op, BaseFormula phi) { return make(op, {std::move(phi)}); }
FormulaPtr more(BaseFormula phi, BaseFormula psi, std::string predicate) {
  return make(Op::kMore, {Symbol{std::move(predicate)}, std::move(phi), std::move(psi)});
}
FormulaPtr less(BaseFormula phi, BaseFormula psi, std::string predicate) {
  return make(Op::kLess, {Symbol{std::move(predicate)}, std::move(phi), std::move(psi)});
}
FormulaPtr most_sup(std::string object, BaseFormula class_atom, BaseFormula phi, std::string predicate) {
  return make(Op::kMostSup,
              {Symbol{std::move(predicate)}, Symbol{std::move(object)}, std::move(class_atom), std::move(phi)});
}
FormulaPtr most_str(BaseFormula phi, std::string predicate) {
  return make(Op::kMostStr, {Symbol{std::move(predicate)}, std::move(phi)});
}
FormulaPtr degree(BaseFormula phi, std::string predicate, std::string agent) {
  return make(Op::kDegree, {Symbol{std::move(predicate)}, Symbol{std::move(agent)}, std::move(phi)});
}
FormulaPtr negation(FormulaPtr f) { return make(Op::kNot, {std::move(f)}); }
FormulaPtr conjunction(std::vector<FormulaPtr> fs) {
  std::vector<Argument> args(fs.begin(), fs.end());
  return make(Op::kAnd, std::move(args));
}

Type typecheck(const EpistemicFormula& f, const DomainSignature& sig) { return check_node(f, sig, {}); }

std::string print(const EpistemicFormula& f) {
  std::string out;
  print_node(f, out);
  return out;
}

}  // namespace labtom::elot
