#include "labtom/belief.hpp"

#include <stdexcept>

namespace labtom {

Belief::Belief(std::vector<EnvState> states, std::vector<int> counts) {
  if (states.size() != counts.size()) throw std::invalid_argument("belief: states and counts differ in length");
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (counts[i] < 0) throw std::invalid_argument("belief: negative particle count");
    if (counts[i] == 0) continue;
    states_.push_back(states[i]);
    counts_.push_back(counts[i]);
    total_ += counts[i];
  }
  if (total_ == 0) throw std::invalid_argument("belief: no particles");
}

std::vector<double> Belief::weights() const {
  std::vector<double> w;
  w.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) w.push_back(weight(i));
  return w;
}

std::size_t hash_value(const Belief& b) {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < b.size(); ++i) {
    h ^= hash_value(b.states()[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::size_t>(b.counts()[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::vector<Belief> enumerate_beliefs(const std::vector<EnvState>& states, int k) {
  if (k < 1) throw std::invalid_argument("enumerate_beliefs: k must be at least 1");
  if (states.empty()) throw std::invalid_argument("enumerate_beliefs: no states");
  std::vector<Belief> out;
  std::vector<int> counts(states.size(), 0);
  // distribute `left` particles over states[i..]
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == states.size()) {
      counts[i] = left;
      out.emplace_back(states, counts);
      return;
    }
    for (int c = left; c >= 0; --c) {
      counts[i] = c;
      self(self, i + 1, left - c);
    }
    counts[i] = 0;
  };
  rec(rec, 0, k);
  return out;
}

std::optional<Belief> belief_update(const GridMap& m, const Belief& b, const EnvState& s_new, const Action& action) {
  const Observation percept = observe(s_new);
  std::vector<EnvState> states;
  std::vector<int> counts;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const EnvState& p = b.states()[i];
    if (!is_valid(m, p, action)) continue;
    const EnvState next = transition(m, p, action);
    if (!(observe(next) == percept)) continue;
    bool merged = false;
    for (std::size_t j = 0; j < states.size(); ++j)
      if (states[j] == next) {
        counts[j] += b.counts()[i];
        merged = true;
      }
    if (!merged) {
      states.push_back(next);
      counts.push_back(b.counts()[i]);
    }
  }
  if (states.empty()) return std::nullopt;
  return Belief(std::move(states), std::move(counts));
}

}  // namespace labtom
