#include "labtom/domain.hpp"

#include "labtom/errors.hpp"

namespace labtom {

void DomainSignature::add_predicate(const std::string& name, int arity) { arity_[name] = arity; }

void DomainSignature::add_class(const std::string& name,
                                std::optional<std::vector<std::string>> objects) {
  arity_[name] = 1;
  if (objects)
    for (const std::string& o : *objects) objects_.insert(o);
  classes_[name] = std::move(objects);
}

void DomainSignature::add_agent(const std::string& name) {
  agents_.insert(name);
  objects_.insert(name);
}

std::optional<int> DomainSignature::arity(const std::string& predicate) const {
  auto it = arity_.find(predicate);
  if (it == arity_.end()) return std::nullopt;
  return it->second;
}

bool DomainSignature::is_class(const std::string& predicate) const {
  return classes_.count(predicate) > 0;
}

const std::vector<std::string>* DomainSignature::objects_of(const std::string& class_name) const {
  auto it = classes_.find(class_name);
  if (it == classes_.end() || !it->second) return nullptr;
  return &*it->second;
}

bool DomainSignature::is_object(const std::string& name) const { return objects_.count(name) > 0; }

bool DomainSignature::is_agent(const std::string& name) const { return agents_.count(name) > 0; }

void DomainSignature::check(const BaseFormula& f, const std::set<std::string>& scope) const {
  using Kind = BaseFormula::Kind;
  switch (f.kind()) {
    case Kind::kAtom: {
      auto a = arity(f.predicate());
      if (!a) throw UnknownSymbolError("unknown predicate '" + f.predicate() + "'");
      if (*a != static_cast<int>(f.args().size()))
        throw UnknownSymbolError("predicate '" + f.predicate() + "' takes " + std::to_string(*a) +
                                 " argument(s), got " + std::to_string(f.args().size()));
      for (const Term& t : f.args()) {
        if (t.is_variable()) {
          if (!scope.count(t.name))
            throw UnknownSymbolError("variable " + t.name + " is not bound by a quantifier");
        } else if (!is_object(t.name)) {
          throw UnknownSymbolError("unknown object '" + t.name + "'");
        }
      }
      return;
    }
    case Kind::kExists:
    case Kind::kForall: {
      const BaseFormula& head = f.class_atom();
      if (!is_class(head.predicate()))
        throw UnknownSymbolError("'" + head.predicate() + "' is not an object class");
      std::set<std::string> inner = scope;
      inner.insert(f.bound_variable());
      check(f.restriction(), inner);
      check(f.body(), inner);
      return;
    }
    default:
      for (const BaseFormula& c : f.children()) check(c, scope);
  }
}

DomainSignature DomainSignature::doors_keys_gems(int n_boxes, const std::vector<std::string>& colors,
                                                 int n_doors, int n_gems) {
  auto numbered = [](const std::string& stem, int n) {
    std::vector<std::string> out;
    for (int i = 1; i <= n; ++i) out.push_back(stem + std::to_string(i));
    return out;
  };
  DomainSignature sig;
  sig.add_agent("player");
  sig.add_class("agent", std::vector<std::string>{"player"});
  sig.add_class("box", numbered("box", n_boxes));
  sig.add_class("color", colors);
  sig.add_class("door", numbered("door", n_doors));
  sig.add_class("gem", numbered("gem", n_gems));
  sig.add_class("key", std::nullopt);
  sig.add_predicate("inside", 2);   // inside(Key, Box)
  sig.add_predicate("iscolor", 2);  // iscolor(KeyOrDoor, Color)
  sig.add_predicate("empty", 1);    // empty(Box)
  sig.add_predicate("has", 2);      // has(Agent, Key)
  sig.add_predicate("locked", 1);   // locked(Door)
  sig.add_predicate("opened", 1);   // opened(Box)
  sig.add_predicate("collected", 1);  // collected(Gem)
  return sig;
}

const DomainSignature& default_signature() {
  static const DomainSignature sig =
      DomainSignature::doors_keys_gems(4, {"red", "blue", "yellow", "green"}, 4, 4);
  return sig;
}

}  // namespace labtom
