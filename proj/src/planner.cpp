#include "labtom/planner.hpp"

#include <algorithm>

#include "labtom/errors.hpp"

namespace labtom {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::kFull: return "full";
    case Variant::kTrueBelief: return "true_belief";
    case Variant::kNonPlanning: return "non_planning";
  }
  return "?";
}

Variant parse_variant(const std::string& text) {
  if (text == "full") return Variant::kFull;
  if (text == "true_belief") return Variant::kTrueBelief;
  if (text == "non_planning") return Variant::kNonPlanning;
  throw InputError("unknown variant '" + text + "' (expected full, true_belief or non_planning)");
}

double default_unreachable_cost(const GridMap& m) { return 10.0 * m.width() * m.height(); }

std::optional<int> QCache::distance(const EnvState& s, int goal) {
  const Key key{canonical(s), static_cast<std::uint16_t>(goal)};
  if (auto it = table_.find(key); it != table_.end()) {
    if (it->second < 0) return std::nullopt;
    return it->second;
  }
  ++searches_;
  std::vector<EnvState> path;
  const std::optional<int> d = goal_distance(*map_, key.state, goal, &path);
  if (!d) {
    table_.emplace(key, -1);
    return std::nullopt;
  }
  // every state on a shortest plan is itself at a known distance
  for (std::size_t i = 0; i < path.size(); ++i)
    table_.emplace(Key{path[i], key.goal}, *d - static_cast<int>(i));
  return d;
}

double q_star(const EnvState& s, const Action& a, int goal, QCache& cache) {
  if (!is_valid(cache.map(), s, a)) return kInfinity;
  const std::optional<int> d = cache.distance(transition(cache.map(), s, a), goal);
  return d ? 1.0 + *d : kInfinity;
}

double q_mdp(const Belief& b, const Action& a, int goal, QCache& cache, double unreachable_cost) {
  double total = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    double q = q_star(b.states()[i], a, goal, cache);
    if (std::isinf(q)) q = unreachable_cost;
    total += b.weight(i) * q;
  }
  return total;
}

double manhattan_q(const GridMap& m, const EnvState& s, const Action& a, int goal) {
  const Cell gem = m.gems().at(static_cast<std::size_t>(goal));
  if (a.kind == Action::Kind::kCollectGem && a.target == gem) return 1.0;
  if (s.is_collected(goal)) return 1.0;
  const EnvState next = is_valid(m, s, a) ? transition(m, s, a) : s;
  return 1.0 + manhattan(next.agent(), gem);
}

std::vector<double> boltzmann(const std::vector<double>& q, double beta) {
  std::vector<double> p(q.size(), 0.0);
  if (q.empty()) return p;
  double best = kInfinity;
  for (double v : q) best = std::min(best, v);
  if (std::isinf(best)) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(q.size()));
    return p;
  }
  // log-sum-exp around the smallest cost
  double z = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (std::isinf(q[i])) continue;
    p[i] = std::exp(-beta * (q[i] - best));
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

std::vector<double> q_hat(const Belief& b, const std::vector<Action>& actions, int goal, const PolicyParams& params,
                          QCache& cache) {
  std::vector<double> q;
  q.reserve(actions.size());
  if (params.variant == Variant::kNonPlanning) {
    // position is shared by every particle, so any one of them will do
    for (const Action& a : actions) q.push_back(manhattan_q(cache.map(), b.states().front(), a, goal));
    return q;
  }
  const double penalty = params.unreachable_cost.value_or(default_unreachable_cost(cache.map()));
  for (const Action& a : actions) q.push_back(q_mdp(b, a, goal, cache, penalty));
  return q;
}

double ActionDistribution::probability(const Action& a) const {
  for (std::size_t i = 0; i < actions.size(); ++i)
    if (actions[i] == a) return probs[i];
  return 0.0;
}

ActionDistribution action_distribution(const Belief& b, int goal, const PolicyParams& params, QCache& cache) {
  ActionDistribution d;
  d.actions = valid_actions(cache.map(), b.states().front());
  d.probs = boltzmann(q_hat(b, d.actions, goal, params, cache), params.beta);
  return d;
}

double action_likelihood(const Belief& b, int goal, const Action& a, const PolicyParams& params, QCache& cache) {
  return action_distribution(b, goal, params, cache).probability(a);
}

}  // namespace labtom
