// End-to-end runs: scenario + statements -> score rows.

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "labtom/bsips.hpp"
#include "labtom/evaluator.hpp"
#include "labtom/scenario.hpp"
#include "labtom/thresholds.hpp"
#include "labtom/translator.hpp"

namespace labtom {

struct RunConfig {
  PolicyParams params;
  int particles = 3;  // k
  ThresholdTable thresholds = ThresholdTable::defaults();
  PriorMode prior = PriorMode::kUniformStatement;
  std::vector<std::string> judgment_points;  // names to keep; empty = all
  bool mixture = false;                      // weight-average all translations instead of the top one
  DeadBelief dead_belief = DeadBelief::kRevise;
  int n_candidates = 4;
};

struct ScoreRow {
  std::string scenario;
  std::string statement;
  std::string judgment_point;
  int t = 0;
  double posterior = 0.0;
  double normalized_likelihood = 0.0;
  std::string variant;
};
using ScoreTable = std::vector<ScoreRow>;

/// A statement ready for scoring: one or more lowered readings with weights.
struct ResolvedStatement {
  std::string id;
  Tense tense = Tense::kCurrent;
  std::vector<std::pair<LoweredFormula, double>> readings;
};

/// Lowers ELoT rows and translates natural-language rows (top candidate, or
/// all of them when `mixture`). Errors become InputError naming the row;
/// natural-language rows without a backend are an InputError too.
std::vector<ResolvedStatement> resolve_statements(const std::vector<Statement>& statements,
                                                  const DomainSignature& sig, TranslatorBackend* backend,
                                                  bool mixture = false, int n_candidates = 4);

/// Initial states and particle beliefs implied by the scenario rules.
BsipsConfig make_bsips_config(const Scenario& scn, const RunConfig& cfg);

/// One inference pass over a scenario, kept for repeated scoring.
class ScenarioRun {
 public:
  /// Throws DegeneratePosteriorError.
  ScenarioRun(const Scenario& scn, const RunConfig& cfg);

  const Scenario& scenario() const { return scn_; }
  const Posterior& posterior() const { return post_; }
  const std::vector<JudgmentPoint>& judgment_points() const { return points_; }

  /// Per judgment point: goal rows `goal(gemN)` first, then statements.
  ScoreTable score(const std::vector<ResolvedStatement>& statements, const ThresholdTable& th, PriorMode prior);
  /// Score of one statement at one judgment point (index into judgment_points()).
  StatementScore score_one(const ResolvedStatement& st, std::size_t point, const ThresholdTable& th, PriorMode prior);

 private:
  Scenario scn_;
  Variant variant_;
  Posterior post_;
  std::vector<JudgmentPoint> points_;
  std::vector<std::unique_ptr<Posterior>> truncated_;
  std::vector<std::unique_ptr<StatementScorer>> scorers_;
};

ScoreTable run_scenario(const Scenario& scn, const std::vector<Statement>& statements, const RunConfig& cfg,
                        TranslatorBackend* backend = nullptr);

struct ContextCase {
  std::vector<Statement> statements;
  Scenario home;
  std::vector<Scenario> others;
};

struct ContextRow {
  std::string scenario;  // home
  std::string statement;
  double in_context = 0.0;      // L̄ at the home scenario's last judgment point
  double out_of_context = 0.0;  // mean of the same over the other scenarios
  double difference = 0.0;
  bool accurate = false;        // in_context > out_of_context
};

struct ContextSummary {
  std::vector<ContextRow> rows;
  double accuracy = 0.0;  // fraction of accurate rows
};

ContextSummary run_context_comparison(const std::vector<ContextCase>& cases, const RunConfig& cfg,
                                      TranslatorBackend* backend = nullptr);

/// Ties ratings to model scores for parameter fitting. Each rating names a
/// scenario, a statement id and a judgment point.
class FitHarness {
 public:
  FitHarness(std::vector<Scenario> scenarios, std::vector<Statement> statements, RunConfig cfg,
             RatingsDataset ratings, TranslatorBackend* backend = nullptr);

  /// Pearson r between model L̄ and ratings under `th` with the current runs.
  double objective(const ThresholdTable& th);
  /// Re-runs inference at `beta`, then scores with the configured thresholds.
  double objective_beta(double beta);
  /// Model L̄ per rating, in rating order.
  std::vector<double> predictions(const ThresholdTable& th);

  const RunConfig& config() const { return cfg_; }
  void set_config(const RunConfig& cfg);

 private:
  void rebuild();

  struct Target {
    std::size_t run, statement, point;
  };

  std::vector<Scenario> scenarios_;
  std::vector<Statement> statements_;
  RunConfig cfg_;
  RatingsDataset ratings_;
  TranslatorBackend* backend_;
  std::vector<std::unique_ptr<ScenarioRun>> runs_;
  std::vector<std::vector<ResolvedStatement>> resolved_;
  std::vector<Target> targets_;
  std::vector<double> human_;
};

}  // namespace labtom
