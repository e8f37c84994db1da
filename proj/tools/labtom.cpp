// labtom: score epistemic statements against inverse-planning inferences.
//
//   labtom run       --scenario F --statements S
//   labtom context   --statements S --home A --others B C
//   labtom parse     'believes(player, formula(empty(box3)))'
//   labtom translate 'The player believes that box 3 is empty.'
//   labtom fit       --scenario A --scenario B --statements S --ratings R
//
// Exit codes: 0 success, 2 input error, 3 degenerate posterior.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "labtom/errors.hpp"
#include "labtom/lowering.hpp"
#include "labtom/pipeline.hpp"
#include "labtom/report.hpp"

namespace {

struct Common {
  double beta = labtom::kDefaultBeta;
  int particles = 3;
  std::string variant = "full";
  std::string prior = "statement";
  std::string thresholds;
  std::vector<std::string> judgment_points;
  std::string backend = "fixture";
  std::string format = "csv";
  std::string out;
  bool mixture = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--beta", c.beta, "Boltzmann inverse temperature")->check(CLI::PositiveNumber);
  cmd->add_option("--particles,-k", c.particles, "Particles per belief")->check(CLI::Range(1, 64));
  cmd->add_option("--variant", c.variant, "full | true_belief | non_planning");
  cmd->add_option("--prior", c.prior, "statement | worlds");
  cmd->add_option("--thresholds", c.thresholds, "JSON file of threshold overrides");
  cmd->add_option("--judgment-points", c.judgment_points, "Judgment point names to report")->delimiter(',');
  cmd->add_option("--backend", c.backend, "fixture | external:CMD");
  cmd->add_option("--format", c.format, "csv | jsonl");
  cmd->add_option("--out,-o", c.out, "Output file (default stdout)");
  cmd->add_flag("--mixture", c.mixture, "Average over all translations instead of the top one");
}

labtom::RunConfig make_config(const Common& c) {
  labtom::RunConfig cfg;
  cfg.params.beta = c.beta;
  cfg.params.variant = labtom::parse_variant(c.variant);
  cfg.particles = c.particles;
  cfg.prior = labtom::parse_prior_mode(c.prior);
  if (!c.thresholds.empty()) cfg.thresholds = labtom::ThresholdTable::load(c.thresholds);
  cfg.judgment_points = c.judgment_points;
  cfg.mixture = c.mixture;
  return cfg;
}

template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw labtom::InputError("cannot write " + path);
  fn(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Epistemic statement evaluation over inverse planning"};
  app.require_subcommand(1);
  Common common;

  auto* run = app.add_subcommand("run", "Score statements at the judgment points of one scenario");
  std::string scenario_path, statements_path;
  run->add_option("--scenario", scenario_path)->required()->check(CLI::ExistingFile);
  run->add_option("--statements", statements_path)->check(CLI::ExistingFile);
  add_common(run, common);

  auto* context = app.add_subcommand("context", "Compare statement scores in and out of their home scenario");
  std::string home_path;
  std::vector<std::string> other_paths;
  context->add_option("--statements", statements_path)->required()->check(CLI::ExistingFile);
  context->add_option("--home", home_path)->required()->check(CLI::ExistingFile);
  context->add_option("--others", other_paths)->required()->check(CLI::ExistingFile);
  add_common(context, common);

  auto* parse = app.add_subcommand("parse", "Parse, type-check and lower an ELoT formula");
  std::string formula_text;
  parse->add_option("formula", formula_text)->required();
  parse->add_option("--scenario", scenario_path, "Take the vocabulary from this scenario")->check(CLI::ExistingFile);

  auto* translate = app.add_subcommand("translate", "Translate a sentence to ELoT");
  std::string sentence;
  int n_candidates = 4;
  translate->add_option("sentence", sentence)->required();
  translate->add_option("-n", n_candidates, "Candidates to request")->check(CLI::Range(1, 64));
  translate->add_option("--backend", common.backend, "fixture | external:CMD");
  translate->add_option("--scenario", scenario_path, "Take the vocabulary from this scenario")->check(CLI::ExistingFile);

  auto* fit = app.add_subcommand("fit", "Fit beta and/or thresholds to ratings");
  std::vector<std::string> fit_scenarios;
  std::string ratings_path, what = "both";
  fit->add_option("--scenario", fit_scenarios)->required()->check(CLI::ExistingFile);
  fit->add_option("--statements", statements_path)->required()->check(CLI::ExistingFile);
  fit->add_option("--ratings", ratings_path)->required()->check(CLI::ExistingFile);
  fit->add_option("--what", what, "beta | thresholds | both")->check(CLI::IsMember({"beta", "thresholds", "both"}));
  add_common(fit, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      const labtom::RunConfig cfg = make_config(common);
      const labtom::Scenario scn = labtom::load_scenario(scenario_path);
      std::vector<labtom::Statement> statements;
      if (!statements_path.empty()) statements = labtom::load_statements(statements_path, scn.map->signature());
      const auto backend = labtom::make_backend(common.backend);
      const labtom::ScoreTable table = labtom::run_scenario(scn, statements, cfg, backend.get());
      with_output(common.out, [&](std::ostream& os) {
        labtom::emit(os, table, labtom::parse_format(common.format), labtom::config_json(cfg));
      });
    } else if (*context) {
      const labtom::RunConfig cfg = make_config(common);
      labtom::ContextCase c;
      c.home = labtom::load_scenario(home_path);
      c.statements = labtom::load_statements(statements_path, c.home.map->signature());
      for (const std::string& p : other_paths) c.others.push_back(labtom::load_scenario(p));
      const auto backend = labtom::make_backend(common.backend);
      const labtom::ContextSummary summary = labtom::run_context_comparison({c}, cfg, backend.get());
      with_output(common.out, [&](std::ostream& os) {
        labtom::emit(os, summary, labtom::parse_format(common.format), labtom::config_json(cfg));
      });
    } else if (*parse) {
      const labtom::DomainSignature sig =
          scenario_path.empty() ? labtom::default_signature() : labtom::load_scenario(scenario_path).map->signature();
      const labtom::elot::FormulaPtr f = labtom::elot::parse(formula_text, sig);
      std::cout << labtom::elot::print(*f) << "\n" << labtom::to_string(labtom::lower(*f, sig)) << "\n";
    } else if (*translate) {
      const labtom::DomainSignature sig =
          scenario_path.empty() ? labtom::default_signature() : labtom::load_scenario(scenario_path).map->signature();
      const auto backend = labtom::make_backend(common.backend);
      for (const auto& c : labtom::translate(sentence, *backend, sig, n_candidates))
        std::cout << labtom::format_number(c.weight) << "\t" << labtom::elot::print(*c.formula) << "\n";
    } else if (*fit) {
      labtom::RunConfig cfg = make_config(common);
      std::vector<labtom::Scenario> scenarios;
      for (const std::string& p : fit_scenarios) scenarios.push_back(labtom::load_scenario(p));
      const std::vector<labtom::Statement> statements =
          labtom::load_statements(statements_path, scenarios.front().map->signature());
      const auto backend = labtom::make_backend(common.backend);
      labtom::FitHarness harness(scenarios, statements, cfg, labtom::load_ratings(ratings_path), backend.get());
      if (what != "thresholds") {
        cfg.params.beta = labtom::fit_beta(labtom::default_beta_grid(),
                                           [&](double b) { return harness.objective_beta(b); });
        harness.set_config(cfg);
      }
      if (what != "beta") {
        cfg.thresholds = labtom::fit_thresholds(common.thresholds.empty() ? labtom::ThresholdTable::initial() : cfg.thresholds,
                                                [&](const labtom::ThresholdTable& th) { return harness.objective(th); });
        harness.set_config(cfg);
      }
      const double r = harness.objective(cfg.thresholds);
      with_output(common.out, [&](std::ostream& os) {
        os << "{\"beta\":" << labtom::format_number(cfg.params.beta)
           << ",\"thresholds\":" << cfg.thresholds.to_json() << ",\"pearson_r\":" << labtom::format_number(r)
           << "}\n";
      });
    }
  } catch (const labtom::DegeneratePosteriorError& e) {
    std::cerr << "labtom: degenerate posterior: " << e.what() << "\n";
    return 3;
  } catch (const labtom::InputError& e) {
    std::cerr << "labtom: " << e.what() << "\n";
    return 2;
  } catch (const labtom::ElotError& e) {
    std::cerr << "labtom: " << e.what() << "\n";
    return 2;
  } catch (const labtom::TranslationError& e) {
    std::cerr << "labtom: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
