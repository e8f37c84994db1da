#include "labtom/pipeline.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "labtom/errors.hpp"

namespace labtom {

std::vector<ResolvedStatement> resolve_statements(const std::vector<Statement>& statements,
                                                  const DomainSignature& sig, TranslatorBackend* backend,
                                                  bool mixture, int n_candidates) {
  std::vector<ResolvedStatement> out;
  for (const Statement& st : statements) {
    ResolvedStatement r{st.id, st.tense, {}};
    try {
      if (!st.natural_language) {
        r.readings.emplace_back(lower(*elot::parse(st.text, sig), sig), 1.0);
      } else {
        if (backend == nullptr) throw InputError("natural-language statement needs a translator backend");
        std::vector<TranslationCandidate> cands = translate(st.text, *backend, sig, n_candidates);
        if (!mixture) {
          cands.resize(1);
          cands.front().weight = 1.0;
        }
        for (const TranslationCandidate& c : cands) r.readings.emplace_back(lower(*c.formula, sig), c.weight);
      }
    } catch (const ElotError& e) {
      throw InputError("statement '" + st.id + "': " + e.what());
    } catch (const TranslationError& e) {
      throw InputError("statement '" + st.id + "': " + e.what());
    } catch (const InputError& e) {
      throw InputError("statement '" + st.id + "': " + e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

BsipsConfig make_bsips_config(const Scenario& scn, const RunConfig& cfg) {
  if (cfg.particles < 1) throw InputError("particle count must be at least 1");
  BsipsConfig c;
  c.goals = scn.goals;
  c.initial_states = enumerate_initial_states(*scn.map, observe(scn.initial()), scn.rules);
  if (cfg.params.variant != Variant::kTrueBelief) c.initial_beliefs = enumerate_beliefs(c.initial_states, cfg.particles);
  c.params = cfg.params;
  c.dead_belief = cfg.dead_belief;
  c.particles = cfg.particles;
  return c;
}

namespace {

Posterior infer(const Scenario& scn, const RunConfig& cfg) {
  return bsips(scn.map, make_bsips_config(scn, cfg), scn.actions, scn.observations());
}

std::vector<JudgmentPoint> select_points(const Scenario& scn, const std::vector<std::string>& names) {
  std::vector<JudgmentPoint> all = scn.effective_judgment_points();
  if (names.empty()) return all;
  std::vector<JudgmentPoint> out;
  for (const std::string& n : names) {
    auto it = std::find_if(all.begin(), all.end(), [&](const JudgmentPoint& p) { return p.name == n; });
    if (it == all.end()) throw InputError("scenario " + scn.name + " has no judgment point '" + n + "'");
    out.push_back(*it);
  }
  return out;
}

}  // namespace

ScenarioRun::ScenarioRun(const Scenario& scn, const RunConfig& cfg)
    : scn_(scn), variant_(cfg.params.variant), post_(infer(scn, cfg)), points_(select_points(scn, cfg.judgment_points)) {
  for (const JudgmentPoint& p : points_) {
    truncated_.push_back(std::make_unique<Posterior>(post_.truncated(p.t)));
    scorers_.push_back(std::make_unique<StatementScorer>(*truncated_.back()));
  }
}

StatementScore ScenarioRun::score_one(const ResolvedStatement& st, std::size_t point, const ThresholdTable& th,
                                      PriorMode prior) {
  const int t = st.tense == Tense::kInitial ? 0 : points_.at(point).t;
  StatementScore total;
  total.statement = st.id;
  total.t = points_[point].t;
  for (const auto& [f, w] : st.readings) {
    const StatementScore s = scorers_[point]->score(st.id, f, t, th, prior);
    total.posterior += w * s.posterior;
    total.prior += w * s.prior;
    total.normalized_likelihood += w * s.normalized_likelihood;
  }
  return total;
}

ScoreTable ScenarioRun::score(const std::vector<ResolvedStatement>& statements, const ThresholdTable& th,
                              PriorMode prior) {
  ScoreTable out;
  const std::string variant = to_string(variant_);
  std::vector<int> goals = scn_.goals;
  if (goals.empty())
    for (std::size_t g = 0; g < scn_.map->gems().size(); ++g) goals.push_back(static_cast<int>(g));
  const double goal_prior = 1.0 / static_cast<double>(goals.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const JudgmentPoint& jp = points_[i];
    const std::map<int, double> gp = goal_posterior(post_, jp.t);
    for (int g : goals) {
      const auto it = gp.find(g);
      const double q = it == gp.end() ? 0.0 : it->second;
      const double lbar = prior == PriorMode::kUniformStatement ? normalized_likelihood(q, goal_prior) : q;
      out.push_back({scn_.name, "goal(gem" + std::to_string(g + 1) + ")", jp.name, jp.t, q, lbar, variant});
    }
    for (const ResolvedStatement& st : statements) {
      const StatementScore s = score_one(st, i, th, prior);
      out.push_back({scn_.name, st.id, jp.name, jp.t, s.posterior, s.normalized_likelihood, variant});
    }
  }
  return out;
}

ScoreTable run_scenario(const Scenario& scn, const std::vector<Statement>& statements, const RunConfig& cfg,
                        TranslatorBackend* backend) {
  const std::vector<ResolvedStatement> resolved =
      resolve_statements(statements, scn.map->signature(), backend, cfg.mixture, cfg.n_candidates);
  ScenarioRun run(scn, cfg);
  return run.score(resolved, cfg.thresholds, cfg.prior);
}

ContextSummary run_context_comparison(const std::vector<ContextCase>& cases, const RunConfig& cfg,
                                      TranslatorBackend* backend) {
  ContextSummary summary;
  // L̄ of every statement at the last judgment point of `scn`
  auto final_scores = [&](const Scenario& scn, const std::vector<Statement>& statements) {
    const std::vector<ResolvedStatement> resolved =
        resolve_statements(statements, scn.map->signature(), backend, cfg.mixture, cfg.n_candidates);
    RunConfig c = cfg;
    c.judgment_points.clear();
    ScenarioRun run(scn, c);
    std::vector<double> out;
    for (const ResolvedStatement& st : resolved)
      out.push_back(
          run.score_one(st, run.judgment_points().size() - 1, cfg.thresholds, cfg.prior).normalized_likelihood);
    return out;
  };
  for (const ContextCase& c : cases) {
    if (c.others.empty()) throw InputError("context case for " + c.home.name + " has no other scenarios");
    const std::vector<double> in = final_scores(c.home, c.statements);
    std::vector<double> out(in.size(), 0.0);
    for (const Scenario& other : c.others) {
      const std::vector<double> o = final_scores(other, c.statements);
      for (std::size_t i = 0; i < o.size(); ++i) out[i] += o[i] / static_cast<double>(c.others.size());
    }
    for (std::size_t i = 0; i < in.size(); ++i)
      summary.rows.push_back({c.home.name, c.statements[i].id, in[i], out[i], in[i] - out[i], in[i] > out[i]});
  }
  if (!summary.rows.empty()) {
    const auto hits = std::count_if(summary.rows.begin(), summary.rows.end(), [](const ContextRow& r) { return r.accurate; });
    summary.accuracy = static_cast<double>(hits) / static_cast<double>(summary.rows.size());
  }
  return summary;
}

FitHarness::FitHarness(std::vector<Scenario> scenarios, std::vector<Statement> statements, RunConfig cfg,
                       RatingsDataset ratings, TranslatorBackend* backend)
    : scenarios_(std::move(scenarios)),
      statements_(std::move(statements)),
      cfg_(std::move(cfg)),
      ratings_(std::move(ratings)),
      backend_(backend) {
  if (ratings_.empty()) throw InputError("ratings dataset is empty");
  cfg_.judgment_points.clear();
  for (const Scenario& s : scenarios_)
    resolved_.push_back(resolve_statements(statements_, s.map->signature(), backend_, cfg_.mixture, cfg_.n_candidates));
  rebuild();
  for (const Rating& r : ratings_) {
    Target tg{};
    const auto sit = std::find_if(runs_.begin(), runs_.end(),
                                  [&](const auto& run) { return run->scenario().name == r.scenario; });
    if (sit == runs_.end()) throw InputError("rating names unknown scenario '" + r.scenario + "'");
    tg.run = static_cast<std::size_t>(sit - runs_.begin());
    const auto& stmts = resolved_[tg.run];
    const auto st = std::find_if(stmts.begin(), stmts.end(), [&](const auto& s) { return s.id == r.statement; });
    if (st == stmts.end()) throw InputError("rating names unknown statement '" + r.statement + "'");
    tg.statement = static_cast<std::size_t>(st - stmts.begin());
    const auto& pts = (*sit)->judgment_points();
    const auto pt = std::find_if(pts.begin(), pts.end(), [&](const auto& p) { return p.name == r.judgment_point; });
    if (pt == pts.end()) throw InputError("rating names unknown judgment point '" + r.judgment_point + "'");
    tg.point = static_cast<std::size_t>(pt - pts.begin());
    targets_.push_back(tg);
    human_.push_back(r.mean_rating);
  }
}

void FitHarness::rebuild() {
  runs_.clear();
  for (const Scenario& s : scenarios_) runs_.push_back(std::make_unique<ScenarioRun>(s, cfg_));
}

void FitHarness::set_config(const RunConfig& cfg) {
  const bool rerun = cfg.params.beta != cfg_.params.beta || cfg.params.variant != cfg_.params.variant ||
                     cfg.params.unreachable_cost != cfg_.params.unreachable_cost || cfg.particles != cfg_.particles ||
                     cfg.dead_belief != cfg_.dead_belief;
  cfg_ = cfg;
  cfg_.judgment_points.clear();
  if (rerun) rebuild();
}

std::vector<double> FitHarness::predictions(const ThresholdTable& th) {
  std::vector<double> out;
  for (const Target& tg : targets_)
    out.push_back(runs_[tg.run]
                      ->score_one(resolved_[tg.run][tg.statement], tg.point, th, cfg_.prior)
                      .normalized_likelihood);
  return out;
}

double FitHarness::objective(const ThresholdTable& th) {
  const std::vector<double> model = predictions(th);
  try {
    return pearson_r(model, human_);
  } catch (const std::domain_error&) {
    return -1.0;  // constant predictions carry no signal
  }
}

double FitHarness::objective_beta(double beta) {
  RunConfig c = cfg_;
  c.params.beta = beta;
  set_config(c);
  return objective(cfg_.thresholds);
}

}  // namespace labtom
