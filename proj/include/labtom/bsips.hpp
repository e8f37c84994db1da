// Exact belief-space sequential inverse plan search.
//
// Every hypothesis (goal, initial state, initial belief) is stepped through
// the observed actions: score the action under the previous belief, advance
// the hypothesized state, filter the belief on the new percept, and drop the
// hypothesis if its state does not reproduce the observation.
//
// When a percept contradicts every particle of a belief the agent re-forms
// its belief: the hypothesis splits into one child per k-particle belief over
// the states it can still be in, sharing the parent's prior mass equally.

#pragma once

#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

#include "labtom/belief.hpp"
#include "labtom/gridworld.hpp"
#include "labtom/planner.hpp"

namespace labtom {

struct Hypothesis {
  int goal = 0;    // gem index
  int state0 = 0;  // index into the initial states
  int belief0 = 0; // index into the initial beliefs (= state0 under true_belief)
};

/// What happens when a percept contradicts every particle of a belief.
///   kRevise  branch over every k-particle belief on the initial states that,
///            replayed to now, agree with the percept
///   kReject  rule the hypothesis out
enum class DeadBelief : std::uint8_t { kRevise, kReject };

struct BsipsConfig {
  std::vector<int> goals;               // gem indices; empty = every gem
  std::vector<EnvState> initial_states;
  std::vector<Belief> initial_beliefs;  // ignored under true_belief
  PolicyParams params;
  DeadBelief dead_belief = DeadBelief::kRevise;
  int particles = 3;                    // k for re-formed beliefs
};

/// Per-step hypothesis weights with interned state and belief tables.
/// Hypotheses at step t are indexed 0..size(t)-1; branching only appends, and
/// each hypothesis records its parent at the previous step.
class Posterior {
 public:
  int horizon() const { return static_cast<int>(log_weights_.size()) - 1; }
  /// The step-0 hypotheses.
  const std::vector<Hypothesis>& hypotheses() const { return hypotheses_; }
  std::size_t size(int t) const { return log_weights_.at(static_cast<std::size_t>(t)).size(); }
  std::size_t size() const { return size(horizon()); }
  const GridMap& map() const { return *map_; }
  Variant variant() const { return variant_; }

  /// Step-0 ancestor of hypothesis h at step t.
  std::size_t root(int t, std::size_t h) const { return roots_.at(static_cast<std::size_t>(t))[h]; }
  const Hypothesis& hypothesis(int t, std::size_t h) const { return hypotheses_[root(t, h)]; }
  /// For each hypothesis at step `from`, the index of its ancestor at step t <= from.
  std::vector<std::size_t> lineage(int from, int t) const;

  /// Normalized weights given data up to step t.
  std::vector<double> weights(int t) const;
  /// Unnormalized log weights (log prior included); -inf for ruled-out hypotheses.
  const std::vector<double>& log_weights(int t) const { return log_weights_.at(static_cast<std::size_t>(t)); }
  /// Prior mass of each hypothesis at step t before any evidence (sums to 1).
  std::vector<double> prior_weights(int t) const;

  /// Hypothesized world state and agent belief of hypothesis h at step t.
  /// Hypotheses ruled out earlier keep their last live state and belief.
  const EnvState& state(int t, std::size_t h) const { return states_[state_id(t, h)]; }
  const Belief& belief(int t, std::size_t h) const { return beliefs_[belief_id(t, h)]; }
  int state_id(int t, std::size_t h) const { return state_ids_.at(static_cast<std::size_t>(t))[h]; }
  int belief_id(int t, std::size_t h) const { return belief_ids_.at(static_cast<std::size_t>(t))[h]; }
  const std::vector<EnvState>& state_table() const { return states_; }
  const std::vector<Belief>& belief_table() const { return beliefs_; }

  /// Copy holding only steps 0..t.
  Posterior truncated(int t) const;

  /// Horizon-0 posterior over explicit (state, belief) pairs with the given
  /// nonnegative weights (normalized here) and a uniform prior.
  static Posterior from_support(std::shared_ptr<const GridMap> map, const std::vector<EnvState>& states,
                                const std::vector<Belief>& beliefs, const std::vector<double>& weights);

 private:
  friend class Bsips;

  std::shared_ptr<const GridMap> map_;
  Variant variant_ = Variant::kFull;
  std::vector<Hypothesis> hypotheses_;
  std::vector<std::vector<double>> log_weights_, log_priors_;
  std::vector<std::vector<std::size_t>> parents_, roots_;  // parents_[0] is empty
  std::vector<std::vector<int>> state_ids_, belief_ids_;
  std::vector<EnvState> states_;
  std::vector<Belief> beliefs_;
};

/// Incremental engine: construct with o_0, then step(a_t, o_t) for t = 1..T.
class Bsips {
 public:
  /// Throws DegeneratePosteriorError if no hypothesis is consistent with o0.
  Bsips(std::shared_ptr<const GridMap> map, BsipsConfig config, const Observation& o0);

  /// Throws DegeneratePosteriorError (naming the step) if the action or
  /// percept rules out every hypothesis; the posterior is then unchanged.
  void step(const Action& a, const Observation& o);

  const Posterior& posterior() const { return post_; }
  const QCache& cache() const { return cache_; }

 private:
  int intern(const EnvState& s);
  int intern(const Belief& b);
  const ActionDistribution& policy(int belief_id, int goal);

  std::shared_ptr<const GridMap> map_;
  BsipsConfig config_;
  QCache cache_;
  Posterior post_;
  std::unordered_map<EnvState, int, EnvStateHash> state_index_;
  std::unordered_map<Belief, int, BeliefHash> belief_index_;
  std::map<std::pair<int, int>, ActionDistribution> policies_;
  std::vector<int> worlds_;  // each initial state replayed to now; -1 once an action was invalid
};

/// Runs o_0 and every (a_t, o_t).
Posterior bsips(std::shared_ptr<const GridMap> map, BsipsConfig config, const std::vector<Action>& actions,
                const std::vector<Observation>& observations);

/// P(g | a_1:t, o_0:t), indexed like BsipsConfig::goals (or all gems).
std::map<int, double> goal_posterior(const Posterior& p, int t);

struct StateBeliefMass {
  int state_id;
  int belief_id;
  double probability;
};

/// P(s_t, b_t | a_1:T, o_0:T) with T the posterior's horizon, over distinct
/// (state, belief) pairs in first-occurrence order.
std::vector<StateBeliefMass> joint_state_belief_posterior(const Posterior& p, int t);

}  // namespace labtom
