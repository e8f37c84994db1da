// Scoring epistemic statements against inferred (state, belief) posteriors.

#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "labtom/belief.hpp"
#include "labtom/bsips.hpp"
#include "labtom/lowering.hpp"
#include "labtom/thresholds.hpp"

namespace labtom {

/// Expected truth of `phi` under `b`: sum_i w_i [phi]_{s_i}.
double prob_of(const GridMap& m, const Belief& b, const BaseFormula& phi);

/// Truth of an epistemic formula for world state `s` and agent belief `b`.
bool eval_epistemic(const GridMap& m, const elot::EpistemicFormula& f, const EnvState& s, const Belief& b,
                    const ThresholdTable& th, const DomainSignature& sig);
bool eval_lowered(const GridMap& m, const LoweredFormula& f, const EnvState& s, const Belief& b,
                  const ThresholdTable& th);

enum class PriorMode : std::uint8_t { kUniformStatement, kUniformWorlds };
std::string to_string(PriorMode mode);
/// "statement" or "worlds"; throws InputError.
PriorMode parse_prior_mode(const std::string& text);

/// (q / pi) / (q / pi + (1 - q) / (1 - pi)); q itself when pi is 0 or 1.
double normalized_likelihood(double q, double pi);

struct StatementScore {
  std::string statement;
  int t = 0;
  double posterior = 0.0;              // q
  double prior = 0.0;                  // pi
  double normalized_likelihood = 0.0;  // under the chosen prior mode
};

/// Evaluates lowered statements on one posterior. Probabilities of base
/// formulas are cached per belief and truths per state, so rescoring under
/// new thresholds only redoes the comparisons.
class StatementScorer {
 public:
  explicit StatementScorer(const Posterior& p) : post_(&p) {}

  /// Posterior mass of (s_t, b_t) pairs satisfying f, with weights given all data.
  double posterior(const LoweredFormula& f, int t, const ThresholdTable& th);
  /// Same mass under the hypothesis prior (no evidence).
  double prior(const LoweredFormula& f, int t, const ThresholdTable& th);
  StatementScore score(const std::string& id, const LoweredFormula& f, int t, const ThresholdTable& th,
                       PriorMode mode = PriorMode::kUniformStatement);

  bool holds(const LoweredFormula& f, int state_id, int belief_id, const ThresholdTable& th);

 private:
  double mass(const LoweredFormula& f, int t, const ThresholdTable& th, const std::vector<double>& w);
  double prob(int belief_id, const BaseFormula& phi);
  bool truth(const EnvState& s, const BaseFormula& phi);

  const Posterior* post_;
  std::unordered_map<std::string, std::unordered_map<int, double>> prob_cache_;
  std::unordered_map<std::string, std::unordered_map<EnvState, bool, EnvStateHash>> truth_cache_;
};

double statement_posterior(const elot::EpistemicFormula& f, const Posterior& p, int t, const ThresholdTable& th,
                           const DomainSignature& sig);

/// Pearson correlation; throws std::invalid_argument for mismatched or
/// empty input and std::domain_error for zero variance.
double pearson_r(const std::vector<double>& x, const std::vector<double>& y);

struct Rating {
  std::string scenario;
  std::string statement;
  std::string judgment_point;
  double mean_rating = 0.0;
};
using RatingsDataset = std::vector<Rating>;

/// Tab-separated with header `scenario statement judgment_point mean_rating`;
/// ratings must lie in [0, 1]. Throws InputError.
RatingsDataset load_ratings(const std::string& path);
RatingsDataset parse_ratings(const std::string& text);

/// Coordinate ascent on the ten thresholds (declaration order), step 0.05,
/// within +-0.2 of `start` and inside [0, 1]. A coordinate moves only on a
/// strict improvement of `objective`; stops after a pass with no move.
ThresholdTable fit_thresholds(const ThresholdTable& start,
                              const std::function<double(const ThresholdTable&)>& objective);

/// 0.5 * sqrt(2)^j for j = 0..6.
std::vector<double> default_beta_grid();
/// Argmax of `objective` over `candidates` (first one wins ties).
double fit_beta(const std::vector<double>& candidates, const std::function<double(double)>& objective);

}  // namespace labtom
