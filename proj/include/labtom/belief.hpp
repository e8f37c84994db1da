// Particle beliefs over world states.

#pragma once

#include <optional>
#include <vector>

#include "labtom/gridworld.hpp"

namespace labtom {

/// k particles spread over candidate states that share one observable layer.
/// Particles are kept as integer counts, so a filtered belief is exactly
/// counts / remaining particles and equal beliefs compare equal bit for bit.
class Belief {
 public:
  Belief() = default;
  /// Zero-count entries are dropped. Throws std::invalid_argument if every
  /// count is zero or sizes differ.
  Belief(std::vector<EnvState> states, std::vector<int> counts);
  static Belief certain(const EnvState& s) { return Belief({s}, {1}); }

  std::size_t size() const { return states_.size(); }
  const std::vector<EnvState>& states() const { return states_; }
  const std::vector<int>& counts() const { return counts_; }
  int total() const { return total_; }
  double weight(std::size_t i) const { return static_cast<double>(counts_[i]) / total_; }
  std::vector<double> weights() const;

  friend bool operator==(const Belief&, const Belief&) = default;

 private:
  std::vector<EnvState> states_;
  std::vector<int> counts_;
  int total_ = 0;
};

std::size_t hash_value(const Belief& b);

struct BeliefHash {
  std::size_t operator()(const Belief& b) const { return hash_value(b); }
};

/// Every multiset of k particles over `states`, as counts, in lexicographic
/// order with the first state's count descending. Size C(n + k - 1, k).
std::vector<Belief> enumerate_beliefs(const std::vector<EnvState>& states, int k);

/// Advances each particle by `action` and drops those whose percept differs
/// from observe(`s_new`) (or for which the action is impossible). nullopt
/// when no particle survives.
std::optional<Belief> belief_update(const GridMap& m, const Belief& b, const EnvState& s_new, const Action& action);

}  // namespace labtom
