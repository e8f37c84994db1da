#include "labtom/evaluator.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "labtom/errors.hpp"

namespace labtom {

double prob_of(const GridMap& m, const Belief& b, const BaseFormula& phi) {
  double p = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (state_satisfies(m, b.states()[i], phi)) p += b.weight(i);
  return p;
}

bool eval_lowered(const GridMap& m, const LoweredFormula& f, const EnvState& s, const Belief& b,
                  const ThresholdTable& th) {
  return evaluate(
      f, th, [&](const std::string&, const BaseFormula& phi) { return prob_of(m, b, phi); },
      [&](const BaseFormula& phi) { return state_satisfies(m, s, phi); });
}

bool eval_epistemic(const GridMap& m, const elot::EpistemicFormula& f, const EnvState& s, const Belief& b,
                    const ThresholdTable& th, const DomainSignature& sig) {
  return eval_lowered(m, lower(f, sig), s, b, th);
}

std::string to_string(PriorMode mode) {
  return mode == PriorMode::kUniformStatement ? "statement" : "worlds";
}

PriorMode parse_prior_mode(const std::string& text) {
  if (text == "statement" || text == "uniform_statement") return PriorMode::kUniformStatement;
  if (text == "worlds" || text == "uniform_worlds") return PriorMode::kUniformWorlds;
  throw InputError("unknown prior mode '" + text + "' (expected statement or worlds)");
}

double normalized_likelihood(double q, double pi) {
  constexpr double kEdge = 1e-12;
  if (pi <= kEdge || pi >= 1.0 - kEdge) return q;
  const double a = q / pi;
  const double b = (1.0 - q) / (1.0 - pi);
  return a / (a + b);
}

double StatementScorer::prob(int belief_id, const BaseFormula& phi) {
  auto& per_belief = prob_cache_[to_string(phi)];
  auto it = per_belief.find(belief_id);
  if (it != per_belief.end()) return it->second;
  const Belief& b = post_->belief_table()[static_cast<std::size_t>(belief_id)];
  double p = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (truth(b.states()[i], phi)) p += b.weight(i);
  per_belief.emplace(belief_id, p);
  return p;
}

bool StatementScorer::truth(const EnvState& s, const BaseFormula& phi) {
  auto& per_state = truth_cache_[to_string(phi)];
  auto it = per_state.find(s);
  if (it != per_state.end()) return it->second;
  const bool v = state_satisfies(post_->map(), s, phi);
  per_state.emplace(s, v);
  return v;
}

bool StatementScorer::holds(const LoweredFormula& f, int state_id, int belief_id, const ThresholdTable& th) {
  const EnvState& s = post_->state_table()[static_cast<std::size_t>(state_id)];
  return evaluate(
      f, th, [&](const std::string&, const BaseFormula& phi) { return prob(belief_id, phi); },
      [&](const BaseFormula& phi) { return truth(s, phi); });
}

double StatementScorer::mass(const LoweredFormula& f, int t, const ThresholdTable& th, const std::vector<double>& w) {
  std::unordered_map<std::uint64_t, bool> pair_truth;
  const std::vector<std::size_t> at_t = post_->lineage(post_->horizon(), t);
  double total = 0.0;
  for (std::size_t h = 0; h < w.size(); ++h) {
    if (w[h] == 0.0) continue;
    const int s = post_->state_id(t, at_t[h]);
    const int b = post_->belief_id(t, at_t[h]);
    const std::uint64_t key = (static_cast<std::uint64_t>(s) << 32) | static_cast<std::uint32_t>(b);
    auto it = pair_truth.find(key);
    if (it == pair_truth.end()) it = pair_truth.emplace(key, holds(f, s, b, th)).first;
    if (it->second) total += w[h];
  }
  return std::clamp(total, 0.0, 1.0);
}

double StatementScorer::posterior(const LoweredFormula& f, int t, const ThresholdTable& th) {
  return mass(f, t, th, post_->weights(post_->horizon()));
}

double StatementScorer::prior(const LoweredFormula& f, int t, const ThresholdTable& th) {
  return mass(f, t, th, post_->prior_weights(post_->horizon()));
}

StatementScore StatementScorer::score(const std::string& id, const LoweredFormula& f, int t, const ThresholdTable& th,
                                      PriorMode mode) {
  StatementScore s;
  s.statement = id;
  s.t = t;
  s.posterior = posterior(f, t, th);
  s.prior = prior(f, t, th);
  s.normalized_likelihood =
      mode == PriorMode::kUniformStatement ? normalized_likelihood(s.posterior, s.prior) : s.posterior;
  return s;
}

double statement_posterior(const elot::EpistemicFormula& f, const Posterior& p, int t, const ThresholdTable& th,
                           const DomainSignature& sig) {
  StatementScorer scorer(p);
  return scorer.posterior(lower(f, sig), t, th);
}

double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("pearson_r: need two equal-length nonempty lists");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw std::domain_error("pearson_r: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

RatingsDataset parse_ratings(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  RatingsDataset out;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, '\t');) cols.push_back(c);
    if (!header) {
      if (cols != std::vector<std::string>{"scenario", "statement", "judgment_point", "mean_rating"})
        throw InputError("ratings line " + std::to_string(line_no) +
                         ": expected header scenario<TAB>statement<TAB>judgment_point<TAB>mean_rating");
      header = true;
      continue;
    }
    if (cols.size() != 4) throw InputError("ratings line " + std::to_string(line_no) + ": expected 4 columns");
    Rating r{cols[0], cols[1], cols[2], 0.0};
    try {
      std::size_t used = 0;
      r.mean_rating = std::stod(cols[3], &used);
      if (used != cols[3].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InputError("ratings line " + std::to_string(line_no) + ": bad rating '" + cols[3] + "'");
    }
    if (!(r.mean_rating >= 0.0 && r.mean_rating <= 1.0))
      throw InputError("ratings line " + std::to_string(line_no) + ": rating outside [0, 1]");
    out.push_back(std::move(r));
  }
  if (!header) throw InputError("ratings file is empty");
  return out;
}

RatingsDataset load_ratings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open ratings file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ratings(ss.str());
}

ThresholdTable fit_thresholds(const ThresholdTable& start,
                              const std::function<double(const ThresholdTable&)>& objective) {
  constexpr double kStep = 0.05;
  constexpr int kRadius = 4;  // 4 steps = 0.2
  ThresholdTable best = start;
  double best_score = objective(best);
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t i = 0; i < ThresholdTable::kCount; ++i) {
      for (int j = -kRadius; j <= kRadius; ++j) {
        const double v = std::round((start.at(i) + j * kStep) * 1e6) / 1e6;
        if (v < 0.0 || v > 1.0 || v == best.at(i)) continue;
        ThresholdTable cand = best;
        cand.set_at(i, v);
        const double score = objective(cand);
        if (score > best_score) {
          best = cand;
          best_score = score;
          moved = true;
        }
      }
    }
  }
  return best;
}

std::vector<double> default_beta_grid() {
  std::vector<double> grid;
  for (int j = 0; j <= 6; ++j) grid.push_back(0.5 * std::pow(2.0, j / 2.0));
  return grid;
}

double fit_beta(const std::vector<double>& candidates, const std::function<double(double)>& objective) {
  if (candidates.empty()) throw std::invalid_argument("fit_beta: no candidates");
  double best = candidates.front();
  double best_score = objective(best);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double score = objective(candidates[i]);
    if (score > best_score) {
      best = candidates[i];
      best_score = score;
    }
  }
  return best;
}

}  // namespace labtom
