// Two passes: a tokenizer-driven reader that builds an untyped term tree
// (syntax errors carry a byte offset and the expected tokens), then an
// elaborator that resolves each term against the slot it appears in.

#include <cctype>
#include <set>
#include <sstream>

#include "labtom/elot.hpp"

namespace labtom {

SyntaxError::SyntaxError(std::size_t position, std::vector<std::string> expected,
                         const std::string& found)
    : ElotError([&] {
        std::ostringstream msg;
        msg << "syntax error at offset " << position << ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) msg << (i ? " or " : "") << expected[i];
        msg << ", found " << found;
        return msg.str();
      }()),
      position_(position),
      expected_(std::move(expected)) {}

TypeError::TypeError(std::string op, std::string expected, std::string actual)
    : ElotError("type error in " + op + ": expected " + expected + ", got " + actual),
      op_(std::move(op)),
      expected_(std::move(expected)),
      actual_(std::move(actual)) {}

namespace elot {
namespace {

struct RawTerm {
  std::string functor;
  bool variable = false;
  bool applied = false;  // written with parentheses
  std::vector<RawTerm> args;
  std::size_t position = 0;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  RawTerm read_all() {
    RawTerm t = read_term();
    skip_space();
    if (pos_ < text_.size()) fail({"end of input"});
    return t;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const std::string found =
        pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : std::string("end of input");
    throw SyntaxError(pos_, std::move(expected), found);
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  RawTerm read_term() {
    skip_space();
    if (pos_ >= text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_])))
      fail({"identifier", "variable"});
    RawTerm t;
    t.position = pos_;
    t.variable = std::isupper(static_cast<unsigned char>(text_[pos_]));
    const std::size_t begin = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    t.functor = std::string(text_.substr(begin, pos_ - begin));
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      if (t.variable) fail({"',' or ')'"});
      ++pos_;
      t.applied = true;
      t.args.push_back(read_term());
      for (;;) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          t.args.push_back(read_term());
        } else if (pos_ < text_.size() && text_[pos_] == ')') {
          ++pos_;
          break;
        } else {
          fail({"','", "')'"});
        }
      }
    }
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string show(const RawTerm& t) {
  std::string out = t.functor;
  if (t.applied) {
    out += '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ", ";
      out += show(t.args[i]);
    }
    out += ')';
  }
  return out;
}

bool is_connective(const std::string& f) {
  return f == "and" || f == "or" || f == "not" || f == "implies" || f == "exists" || f == "forall";
}

class Elaborator {
 public:
  explicit Elaborator(const DomainSignature& sig) : sig_(sig) {}

  BaseFormula base(const RawTerm& t, const std::string& context) const {
    if (t.variable) throw TypeError(context, "Phi", "variable " + t.functor);
    const std::string& f = t.functor;
    if (f == "formula") throw TypeError(context, "bare Phi", "formula(...) wrapper");
    if (!ops_named(f).empty() && !is_connective(f))
      throw TypeError(context, "Phi", "epistemic operator " + f);
    if (f == "and" || f == "or") {
      if (t.args.size() < 2) throw TypeError(f, "at least 2 arguments", std::to_string(t.args.size()));
      std::vector<BaseFormula> cs;
      for (const RawTerm& a : t.args) cs.push_back(base(a, f));
      return f == "and" ? BaseFormula::conjunction(std::move(cs)) : BaseFormula::disjunction(std::move(cs));
    }
    if (f == "not") {
      expect_arity(t, 1);
      return BaseFormula::negation(base(t.args[0], f));
    }
    if (f == "implies") {
      expect_arity(t, 2);
      return BaseFormula::implication(base(t.args[0], f), base(t.args[1], f));
    }
    if (f == "exists" || f == "forall") {
      expect_arity(t, 2);
      BaseFormula restriction = base(t.args[0], f);
      if (!leads_with_class_atom(restriction))
        throw TypeError(f, "restriction such as key(K)", show(t.args[0]));
      BaseFormula body = base(t.args[1], f);
      return f == "exists" ? BaseFormula::exists(std::move(restriction), std::move(body))
                           : BaseFormula::forall(std::move(restriction), std::move(body));
    }
    std::vector<Term> args;
    for (const RawTerm& a : t.args) {
      if (a.applied) throw TypeError(f, "object or variable", "compound term " + show(a));
      args.push_back(a.variable ? Term::variable(a.functor) : Term::constant(a.functor));
    }
    return BaseFormula::atom(f, std::move(args));
  }

  /// Elaborates `t` at a position of type `want` (nullopt: any).
  FormulaPtr epistemic(const RawTerm& t, std::optional<Type> want, const std::string& context) const {
    const std::string expected = want ? std::string(type_name(*want)) : "E, E/A or Phi_F";
    if (t.variable) throw TypeError(context, expected, "variable " + t.functor);
    std::vector<Op> ops = ops_named(t.functor);
    if (ops.empty()) {
      if (t.functor == "formula") throw TypeError(context, expected, "Phi (formula(...))");
      if (sig_.arity(t.functor)) throw TypeError(context, expected, "bare predicate " + show(t));
      throw UnknownSymbolError("unknown operator '" + t.functor + "'");
    }
    Op op = ops.front();
    if (t.functor == "believes") {
      expect_arity(t, 2);
      op = t.args[1].functor == "formula" ? Op::kBelieves : Op::kBelievesModal;
    }
    const OpInfo& oi = info(op);
    if (want && oi.result != *want) throw TypeError(context, expected, std::string(type_name(oi.result)));

    if (oi.variadic) {
      if (t.args.size() < oi.slots.size())
        throw TypeError(t.functor, "at least " + std::to_string(oi.slots.size()) + " arguments",
                        std::to_string(t.args.size()));
    } else {
      expect_arity(t, oi.slots.size());
    }

    std::vector<Argument> args;
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      const Slot slot = oi.slots[std::min(i, oi.slots.size() - 1)];
      args.push_back(argument(t.args[i], slot, oi));
    }
    FormulaPtr node = make(op, std::move(args));
    return node;
  }

 private:
  static bool leads_with_class_atom(const BaseFormula& r) {
    const BaseFormula& head = r.kind() == BaseFormula::Kind::kAnd ? r.children().front() : r;
    return head.is_atom() && head.args().size() == 1 && head.args()[0].is_variable();
  }

  static void expect_arity(const RawTerm& t, std::size_t n) {
    if (t.args.size() != n)
      throw TypeError(t.functor, std::to_string(n) + " arguments", std::to_string(t.args.size()));
  }

  Argument argument(const RawTerm& a, Slot slot, const OpInfo& oi) const {
    const std::string op(oi.name);
    const std::string want(slot_name(slot));
    switch (slot) {
      case Slot::kAgent:
      case Slot::kPredicate:
      case Slot::kObject:
        if (a.applied) throw TypeError(op, want, show(a));
        return Symbol{a.functor};
      case Slot::kClass:
      case Slot::kRestriction:
        return base(a, op);
      case Slot::kFormula:
        if (a.functor != "formula" || a.variable) {
          const std::string got = ops_named(a.functor).empty() || is_connective(a.functor)
                                      ? "bare formula " + show(a) + " outside formula(...)"
                                      : std::string(type_name(info(ops_named(a.functor).front()).result));
          throw TypeError(op, want, got);
        }
        expect_arity(a, 1);
        return base(a.args[0], op);
      case Slot::kBareFormula:
      case Slot::kOpenFormula:
        return base(a, op);
      case Slot::kModal:
        return epistemic(a, Type::kModal, op);
      case Slot::kEpistemic:
        return epistemic(a, Type::kEpistemic, op);
    }
    throw std::logic_error("unhandled slot");
  }

  const DomainSignature& sig_;
};

}  // namespace

FormulaPtr parse(std::string_view text, const DomainSignature& sig, bool allow_any_type) {
  const RawTerm raw = Reader(text).read_all();
  Elaborator el(sig);
  FormulaPtr f = el.epistemic(raw, allow_any_type ? std::nullopt : std::optional(Type::kEpistemic),
                              "statement");
  typecheck(*f, sig);  // vocabulary and scoping
  return f;
}

BaseFormula parse_base(std::string_view text, const DomainSignature& sig) {
  const RawTerm raw = Reader(text).read_all();
  BaseFormula f = Elaborator(sig).base(raw, "formula");
  sig.check(f);
  return f;
}

}  // namespace elot
}  // namespace labtom
