#include "labtom/bsips.hpp"

#include <algorithm>
#include <cmath>

#include "labtom/errors.hpp"

namespace labtom {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool all_dead(const std::vector<double>& lw) {
  return std::all_of(lw.begin(), lw.end(), [](double v) { return v == kNegInf; });
}

}  // namespace

std::vector<std::size_t> Posterior::lineage(int from, int t) const {
  if (t < 0 || t > from || from > horizon()) throw std::out_of_range("posterior step out of range");
  std::vector<std::size_t> idx(size(from));
  for (std::size_t h = 0; h < idx.size(); ++h) idx[h] = h;
  for (int u = from; u > t; --u)
    for (std::size_t& i : idx) i = parents_[static_cast<std::size_t>(u)][i];
  return idx;
}

std::vector<double> Posterior::weights(int t) const {
  const std::vector<double>& lw = log_weights(t);
  const double top = *std::max_element(lw.begin(), lw.end());
  std::vector<double> w(lw.size(), 0.0);
  if (top == kNegInf) return w;
  double z = 0.0;
  for (std::size_t h = 0; h < lw.size(); ++h) {
    w[h] = lw[h] == kNegInf ? 0.0 : std::exp(lw[h] - top);
    z += w[h];
  }
  for (double& v : w) v /= z;
  return w;
}

std::vector<double> Posterior::prior_weights(int t) const {
  const std::vector<double>& lp = log_priors_.at(static_cast<std::size_t>(t));
  std::vector<double> w(lp.size());
  for (std::size_t h = 0; h < lp.size(); ++h) w[h] = std::exp(lp[h]);
  return w;
}

Posterior Posterior::truncated(int t) const {
  if (t < 0 || t > horizon()) throw std::out_of_range("posterior step out of range");
  Posterior p = *this;
  const auto n = static_cast<std::size_t>(t) + 1;
  p.log_weights_.resize(n);
  p.log_priors_.resize(n);
  p.parents_.resize(n);
  p.roots_.resize(n);
  p.state_ids_.resize(n);
  p.belief_ids_.resize(n);
  return p;
}

Posterior Posterior::from_support(std::shared_ptr<const GridMap> map, const std::vector<EnvState>& states,
                                  const std::vector<Belief>& beliefs, const std::vector<double>& weights) {
  const std::size_t n = states.size();
  if (n == 0 || beliefs.size() != n || weights.size() != n)
    throw std::invalid_argument("from_support: need one belief and weight per state");
  Posterior p;
  p.map_ = std::move(map);
  std::vector<double> lw, lp(n, -std::log(static_cast<double>(n)));
  std::vector<std::size_t> roots;
  std::vector<int> sid, bid;
  for (std::size_t h = 0; h < n; ++h) {
    if (!(weights[h] >= 0.0)) throw std::invalid_argument("from_support: negative weight");
    p.hypotheses_.push_back({0, static_cast<int>(h), static_cast<int>(h)});
    lw.push_back(weights[h] > 0.0 ? std::log(weights[h]) : kNegInf);
    roots.push_back(h);
    auto s = std::find(p.states_.begin(), p.states_.end(), states[h]);
    sid.push_back(static_cast<int>(s - p.states_.begin()));
    if (s == p.states_.end()) p.states_.push_back(states[h]);
    auto b = std::find(p.beliefs_.begin(), p.beliefs_.end(), beliefs[h]);
    bid.push_back(static_cast<int>(b - p.beliefs_.begin()));
    if (b == p.beliefs_.end()) p.beliefs_.push_back(beliefs[h]);
  }
  if (all_dead(lw)) throw std::invalid_argument("from_support: all weights are zero");
  p.log_weights_.push_back(std::move(lw));
  p.log_priors_.push_back(std::move(lp));
  p.parents_.emplace_back();
  p.roots_.push_back(std::move(roots));
  p.state_ids_.push_back(std::move(sid));
  p.belief_ids_.push_back(std::move(bid));
  return p;
}

Bsips::Bsips(std::shared_ptr<const GridMap> map, BsipsConfig config, const Observation& o0)
    : map_(std::move(map)), config_(std::move(config)), cache_(*map_) {
  if (config_.goals.empty())
    for (std::size_t g = 0; g < map_->gems().size(); ++g) config_.goals.push_back(static_cast<int>(g));
  if (config_.initial_states.empty()) throw std::invalid_argument("bsips: no initial states");
  const bool true_belief = config_.params.variant == Variant::kTrueBelief;
  if (!true_belief && config_.initial_beliefs.empty()) throw std::invalid_argument("bsips: no initial beliefs");
  if (config_.particles < 1) throw std::invalid_argument("bsips: particles must be positive");

  post_.map_ = map_;
  post_.variant_ = config_.params.variant;
  std::vector<int> sid, bid;
  for (int g : config_.goals) {
    for (std::size_t s = 0; s < config_.initial_states.size(); ++s) {
      const int n_b = true_belief ? 1 : static_cast<int>(config_.initial_beliefs.size());
      for (int b = 0; b < n_b; ++b) {
        post_.hypotheses_.push_back({g, static_cast<int>(s), true_belief ? static_cast<int>(s) : b});
        sid.push_back(intern(config_.initial_states[s]));
        bid.push_back(intern(true_belief ? Belief::certain(config_.initial_states[s])
                                         : config_.initial_beliefs[static_cast<std::size_t>(b)]));
      }
    }
  }
  const std::size_t n = post_.hypotheses_.size();
  const double log_prior = -std::log(static_cast<double>(n));
  std::vector<double> lw;
  for (std::size_t h = 0; h < n; ++h)
    lw.push_back(consistent(post_.states_[static_cast<std::size_t>(sid[h])], o0) ? log_prior : kNegInf);
  if (all_dead(lw)) throw DegeneratePosteriorError("no hypothesis is consistent with the initial observation");
  std::vector<std::size_t> roots(n);
  for (std::size_t h = 0; h < n; ++h) roots[h] = h;
  post_.log_weights_.push_back(std::move(lw));
  post_.log_priors_.emplace_back(n, log_prior);
  post_.parents_.emplace_back();
  post_.roots_.push_back(std::move(roots));
  post_.state_ids_.push_back(std::move(sid));
  post_.belief_ids_.push_back(std::move(bid));
  for (const EnvState& s : config_.initial_states) worlds_.push_back(intern(s));
}

int Bsips::intern(const EnvState& s) {
  auto [it, fresh] = state_index_.emplace(s, static_cast<int>(post_.states_.size()));
  if (fresh) post_.states_.push_back(s);
  return it->second;
}

int Bsips::intern(const Belief& b) {
  auto [it, fresh] = belief_index_.emplace(b, static_cast<int>(post_.beliefs_.size()));
  if (fresh) post_.beliefs_.push_back(b);
  return it->second;
}

const ActionDistribution& Bsips::policy(int belief_id, int goal) {
  auto it = policies_.find({belief_id, goal});
  if (it == policies_.end())
    it = policies_
             .emplace(std::pair{belief_id, goal},
                      action_distribution(post_.beliefs_[static_cast<std::size_t>(belief_id)], goal, config_.params,
                                          cache_))
             .first;
  return it->second;
}

void Bsips::step(const Action& a, const Observation& o) {
  const int t = post_.horizon() + 1;
  const std::vector<double>& prev_lw = post_.log_weights_.back();
  const std::vector<double>& prev_lp = post_.log_priors_.back();
  const std::vector<std::size_t>& prev_root = post_.roots_.back();
  const std::vector<int>& prev_s = post_.state_ids_.back();
  const std::vector<int>& prev_b = post_.belief_ids_.back();
  const std::size_t n = prev_lw.size();

  std::vector<double> lw, lp;
  std::vector<std::size_t> parent, root;
  std::vector<int> sid, bid;
  lw.reserve(n), lp.reserve(n), parent.reserve(n), root.reserve(n), sid.reserve(n), bid.reserve(n);
  auto emit = [&](std::size_t h, int s, int b, double w, double prior) {
    lw.push_back(w);
    lp.push_back(prior);
    parent.push_back(h);
    root.push_back(prev_root[h]);
    sid.push_back(s);
    bid.push_back(b);
  };

  std::unordered_map<int, int> state_step;  // state -> next state, -1 if a is invalid there
  std::map<std::pair<int, int>, int> belief_step;  // (belief, next state) -> next belief, -1 if dead
  std::unordered_map<int, std::vector<int>> revisions;  // next state -> re-formed beliefs
  policies_.clear();  // beliefs rarely recur across steps

  std::vector<int> worlds(worlds_.size(), -1);
  for (std::size_t j = 0; j < worlds_.size(); ++j) {
    if (worlds_[j] < 0) continue;
    const EnvState& s = post_.states_[static_cast<std::size_t>(worlds_[j])];
    if (is_valid(*map_, s, a)) worlds[j] = intern(transition(*map_, s, a));
  }
  auto revise = [&](int next_s) -> const std::vector<int>& {
    auto [it, fresh] = revisions.try_emplace(next_s);
    if (fresh) {
      const Observation seen = observe(post_.states_[static_cast<std::size_t>(next_s)]);
      std::vector<EnvState> states;
      for (int w : worlds) {
        if (w < 0) continue;
        const EnvState& cand = post_.states_[static_cast<std::size_t>(w)];
        if (consistent(cand, seen) && std::find(states.begin(), states.end(), cand) == states.end())
          states.push_back(cand);
      }
      for (const Belief& b : enumerate_beliefs(states, config_.particles)) it->second.push_back(intern(b));
    }
    return it->second;
  };

  for (std::size_t h = 0; h < n; ++h) {
    auto [sit, s_fresh] = state_step.try_emplace(prev_s[h], -1);
    if (s_fresh) {
      const EnvState& s = post_.states_[static_cast<std::size_t>(prev_s[h])];
      if (is_valid(*map_, s, a)) sit->second = intern(transition(*map_, s, a));
    }
    const int next_s = sit->second;
    if (next_s < 0) {  // trajectory undefined: freeze
      emit(h, prev_s[h], prev_b[h], kNegInf, prev_lp[h]);
      continue;
    }

    auto [bit, b_fresh] = belief_step.try_emplace(std::pair{prev_b[h], next_s}, -1);
    if (b_fresh) {
      const std::optional<Belief> nb = belief_update(
          *map_, post_.beliefs_[static_cast<std::size_t>(prev_b[h])], post_.states_[static_cast<std::size_t>(next_s)], a);
      if (nb) bit->second = intern(*nb);
    }
    const int next_b = bit->second;

    double w = prev_lw[h];
    if (w != kNegInf) {
      if (!consistent(post_.states_[static_cast<std::size_t>(next_s)], o)) {
        w = kNegInf;
      } else {
        const double lik = policy(prev_b[h], post_.hypothesis(t - 1, h).goal).probability(a);
        w = lik > 0.0 ? w + std::log(lik) : kNegInf;
      }
    }

    if (next_b >= 0) {
      emit(h, next_s, next_b, w, prev_lp[h]);
    } else if (config_.dead_belief == DeadBelief::kReject) {
      emit(h, next_s, prev_b[h], kNegInf, prev_lp[h]);
    } else {
      // branching does not depend on the evidence, so the prior stays well defined
      const std::vector<int>& children = revise(next_s);
      const double split = std::log(static_cast<double>(children.size()));
      for (int c : children) emit(h, next_s, c, w == kNegInf ? kNegInf : w - split, prev_lp[h] - split);
    }
  }
  if (all_dead(lw))
    throw DegeneratePosteriorError("no hypothesis explains step " + std::to_string(t) + " (" + to_string(a) + ")");
  post_.log_weights_.push_back(std::move(lw));
  post_.log_priors_.push_back(std::move(lp));
  post_.parents_.push_back(std::move(parent));
  post_.roots_.push_back(std::move(root));
  post_.state_ids_.push_back(std::move(sid));
  post_.belief_ids_.push_back(std::move(bid));
  worlds_ = std::move(worlds);
}

Posterior bsips(std::shared_ptr<const GridMap> map, BsipsConfig config, const std::vector<Action>& actions,
                const std::vector<Observation>& observations) {
  if (observations.size() != actions.size() + 1)
    throw std::invalid_argument("bsips: need one more observation than actions");
  Bsips engine(std::move(map), std::move(config), observations.front());
  for (std::size_t t = 0; t < actions.size(); ++t) engine.step(actions[t], observations[t + 1]);
  return engine.posterior();
}

std::map<int, double> goal_posterior(const Posterior& p, int t) {
  const std::vector<double> w = p.weights(t);
  std::map<int, double> out;
  for (std::size_t h = 0; h < w.size(); ++h) out[p.hypothesis(t, h).goal] += w[h];
  return out;
}

std::vector<StateBeliefMass> joint_state_belief_posterior(const Posterior& p, int t) {
  const std::vector<double> w = p.weights(p.horizon());
  const std::vector<std::size_t> at_t = p.lineage(p.horizon(), t);
  std::vector<StateBeliefMass> out;
  std::map<std::pair<int, int>, std::size_t> slot;
  for (std::size_t h = 0; h < w.size(); ++h) {
    if (w[h] == 0.0) continue;
    const std::pair key{p.state_id(t, at_t[h]), p.belief_id(t, at_t[h])};
    auto [it, fresh] = slot.emplace(key, out.size());
    if (fresh) out.push_back({key.first, key.second, 0.0});
    out[it->second].probability += w[h];
  }
  return out;
}

}  // namespace labtom
