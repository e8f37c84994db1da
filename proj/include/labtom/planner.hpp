// Cost-to-go estimates and Boltzmann action likelihoods for the modeled agent.

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "labtom/belief.hpp"
#include "labtom/gridworld.hpp"

namespace labtom {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
/// 2^(3/2).
inline const double kDefaultBeta = std::pow(2.0, 1.5);

enum class Variant : std::uint8_t { kFull, kTrueBelief, kNonPlanning };
std::string to_string(Variant v);
/// "full", "true_belief" or "non_planning"; throws InputError.
Variant parse_variant(const std::string& text);

struct PolicyParams {
  double beta = kDefaultBeta;
  Variant variant = Variant::kFull;
  /// Cost substituted for an unreachable goal inside q_mdp. nullopt selects
  /// default_unreachable_cost(map); infinity keeps infinite costs.
  std::optional<double> unreachable_cost;
};

/// 10 * width * height: longer than any simple plan on the map.
double default_unreachable_cost(const GridMap& m);

/// Memoized shortest-plan lengths keyed by (canonical state, goal). Not
/// thread safe; use one cache per worker.
class QCache {
 public:
  explicit QCache(const GridMap& m) : map_(&m) {}

  /// Plan length to collect gem `goal` from `s`; nullopt if unreachable.
  std::optional<int> distance(const EnvState& s, int goal);

  const GridMap& map() const { return *map_; }
  std::size_t size() const { return table_.size(); }
  std::size_t searches() const { return searches_; }

 private:
  struct Key {
    EnvState state;
    std::uint16_t goal;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return hash_value(k.state) * 31 + k.goal; }
  };

  const GridMap* map_;
  std::unordered_map<Key, int, KeyHash> table_;  // -1 = unreachable
  std::size_t searches_ = 0;
};

/// 1 + distance(transition(s, a), goal); infinity if unreachable or if `a`
/// is not valid in `s`.
double q_star(const EnvState& s, const Action& a, int goal, QCache& cache);

/// Belief-weighted average of q_star. Infinite particle costs are replaced
/// by `unreachable_cost` (pass kInfinity to keep them).
double q_mdp(const Belief& b, const Action& a, int goal, QCache& cache, double unreachable_cost);

/// 1 + Manhattan distance from the post-action position to the gem cell,
/// or 1 if the action collects the gem. Ignores walls, doors and keys.
double manhattan_q(const GridMap& m, const EnvState& s, const Action& a, int goal);

/// softmax(-beta * q) computed in log space. Infinite q gets probability 0;
/// if every q is infinite the result is uniform.
std::vector<double> boltzmann(const std::vector<double>& q, double beta);

/// The agent's cost-to-go estimate for each action under `params.variant`.
std::vector<double> q_hat(const Belief& b, const std::vector<Action>& actions, int goal, const PolicyParams& params,
                          QCache& cache);

/// Boltzmann policy over the actions valid in the belief's observable layer.
struct ActionDistribution {
  std::vector<Action> actions;
  std::vector<double> probs;
  double probability(const Action& a) const;
};

ActionDistribution action_distribution(const Belief& b, int goal, const PolicyParams& params, QCache& cache);

double action_likelihood(const Belief& b, int goal, const Action& a, const PolicyParams& params, QCache& cache);

}  // namespace labtom
