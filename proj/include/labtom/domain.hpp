// Predicate and object vocabulary that ELoT formulas are checked against.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "labtom/base_formula.hpp"

namespace labtom {

/// Registered predicates (name, arity), object classes, and the finite object
/// sets of the classes that can be enumerated ahead of time.
///
/// A class is a unary predicate such as `box` or `color`. Classes whose
/// members depend on the state (keys move between boxes, the map and the
/// agent's inventory) are registered without an object list and can only be
/// quantified inside base formulas.
class DomainSignature {
 public:
  void add_predicate(const std::string& name, int arity);
  void add_class(const std::string& name, std::optional<std::vector<std::string>> objects);
  void add_agent(const std::string& name);

  std::optional<int> arity(const std::string& predicate) const;
  bool is_class(const std::string& predicate) const;
  /// Objects of a statically enumerable class, or nullptr for state-dependent
  /// or unknown classes.
  const std::vector<std::string>* objects_of(const std::string& class_name) const;
  bool is_object(const std::string& name) const;
  bool is_agent(const std::string& name) const;
  const std::set<std::string>& agents() const { return agents_; }

  /// Throws UnknownSymbolError on the first unknown predicate, wrong arity,
  /// unknown constant or unbound variable.
  /// `scope` lists variables bound by enclosing epistemic quantifiers.
  void check(const BaseFormula& formula, const std::set<std::string>& scope = {}) const;

  /// Doors, Keys & Gems vocabulary for a map with the given objects.
  static DomainSignature doors_keys_gems(int n_boxes, const std::vector<std::string>& colors,
                                         int n_doors, int n_gems);

 private:
  std::map<std::string, int> arity_;
  std::map<std::string, std::optional<std::vector<std::string>>> classes_;
  std::set<std::string> objects_;
  std::set<std::string> agents_;
};

/// Signature used for free-standing ELoT text: four boxes, doors and gems and
/// the colors red, blue, yellow and green.
const DomainSignature& default_signature();

}  // namespace labtom
