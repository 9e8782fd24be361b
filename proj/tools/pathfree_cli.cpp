// Command-line front end: simulate, estimate, true-effects.
//
// Exit codes: 0 success, 1 usage error, 2 data or numeric error.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pathfree/pathfree.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

int report_failure(pf_status status) {
  std::cerr << "error: " << pf_last_error() << "\n";
  return status == PF_ERR_INVALID_ARGUMENT ? kExitUsage : kExitData;
}

pf_format format_from(const std::string& name) { return name == "text" ? PF_FORMAT_TEXT : PF_FORMAT_JSON; }

// Writes to `out` when given, else stdout. Takes ownership of `text`.
int emit(char* text, const std::string& out) {
  int code = kExitOk;
  if (out.empty()) {
    std::fputs(text, stdout);
  } else if (const pf_status s = pf_write_file(out.c_str(), text); s != PF_OK) {
    code = report_failure(s);
  }
  pf_string_free(text);
  return code;
}

struct SimulateArgs {
  int design = 1;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::string estimators = "c";
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  unsigned threads = 1;
  std::uint64_t true_draws = 10'000'000;
  bool drop_collinear = false;
};

struct EstimateArgs {
  std::string data;
  std::string y, d, m, x;
  std::string estimator = "c";
  std::string basis;
  bool drop_collinear = false;
  std::string out;
  std::string format = "json";
};

struct TrueEffectsArgs {
  int design = 1;
  std::string method = "mc";
  std::uint64_t draws = 10'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
  std::string format = "json";
};

int run_simulate(const SimulateArgs& a) {
  pf_study_config cfg;
  pf_study_config_init(&cfg);
  cfg.design = a.design;
  cfg.n = a.n;
  cfg.reps = a.reps;
  cfg.estimators = a.estimators.c_str();
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  cfg.true_draws = a.true_draws;
  cfg.drop_collinear = a.drop_collinear ? 1 : 0;

  pf_report* report = nullptr;
  if (const pf_status s = pf_simulate(&cfg, &report); s != PF_OK) return report_failure(s);
  char* text = nullptr;
  const pf_status s = pf_report_render(report, format_from(a.format), &text);
  pf_report_free(report);
  if (s != PF_OK) return report_failure(s);
  return emit(text, a.out);
}

int run_estimate(const EstimateArgs& a) {
  if (!a.basis.empty() && a.estimator != "v") {
    std::cerr << "error: --basis requires --estimator v\n";
    return kExitUsage;
  }
  pf_dataset* ds = nullptr;
  std::size_t dropped = 0;
  if (const pf_status s =
          pf_dataset_load_csv(a.data.c_str(), a.y.c_str(), a.d.c_str(), a.m.c_str(), a.x.c_str(), &ds, &dropped);
      s != PF_OK) {
    return report_failure(s);
  }
  if (dropped > 0) std::cerr << "note: dropped " << dropped << " rows with missing values\n";

  pf_estimates* est = nullptr;
  pf_status s;
  if (a.estimator == "v")
    s = pf_estimate_varying(ds, a.basis.empty() ? nullptr : a.basis.c_str(), a.drop_collinear, &est);
  else
    s = pf_estimate_label(ds, a.estimator.c_str(), a.drop_collinear, &est);
  pf_dataset_free(ds);
  if (s != PF_OK) return report_failure(s);

  char* text = nullptr;
  s = pf_estimates_render(est, format_from(a.format), &text);
  pf_estimates_free(est);
  if (s != PF_OK) return report_failure(s);
  return emit(text, a.out);
}

int run_true_effects(const TrueEffectsArgs& a) {
  const pf_true_method method = a.method == "analytic" ? PF_TRUE_ANALYTIC : PF_TRUE_MONTECARLO;
  pf_true_effects* te = nullptr;
  if (const pf_status s = pf_true_effects_compute(a.design, method, a.draws, a.seed, a.threads, &te); s != PF_OK)
    return report_failure(s);
  char* text = nullptr;
  const pf_status s = pf_true_effects_render(te, format_from(a.format), &text);
  pf_true_effects_free(te);
  if (s != PF_OK) return report_failure(s);
  return emit(text, a.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-effect (direct, indirect, interaction) decomposition of a treatment effect"};
  app.set_version_flag("--version", pf_version());
  app.require_subcommand(1);

  const auto formats = CLI::IsMember({"json", "text"});

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run a simulation study on one of the four designs");
  simulate->add_option("--design", sim.design, "Design id")->required()->check(CLI::Range(1, 4));
  simulate->add_option("--n", sim.n, "Sample size per repetition")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--reps", sim.reps, "Number of repetitions")->required()->check(CLI::Range(2, 100'000'000));
  simulate->add_option("--estimators", sim.estimators, "Comma-separated roster: c, v1, v2, v3, v:<basis-file>")
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Base seed")->capture_default_str();
  simulate->add_option("--out", sim.out, "Output file (default: stdout)");
  simulate->add_option("--format", sim.format, "Output format")->check(formats)->capture_default_str();
  simulate->add_option("--threads", sim.threads, "Maximum parallel repetitions")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  simulate->add_option("--true-draws", sim.true_draws, "Monte-Carlo draws for designs without a closed form")
      ->check(CLI::Range(std::uint64_t{10'000}, std::uint64_t{1'000'000'000}))
      ->capture_default_str();
  simulate->add_flag("--drop-collinear", sim.drop_collinear, "Drop linearly dependent basis columns");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate the four effects from a CSV file");
  estimate->add_option("--data", est.data, "CSV file with a header row")->required();
  estimate->add_option("--y", est.y, "Outcome column: name or ln(name)")->required();
  estimate->add_option("--d", est.d, "Treatment column (0/1)")->required();
  estimate->add_option("--m", est.m, "Mediator column (0/1) or threshold(name, c)")->required();
  estimate->add_option("--x", est.x, "Comma-separated covariate columns");
  estimate->add_option("--estimator", est.estimator, "c, v, v1, v2, v3 or v:<basis-file>")->capture_default_str();
  estimate->add_option("--basis", est.basis, "Basis spec for --estimator v, e.g. \"1,age,age^2\"");
  estimate->add_flag("--drop-collinear", est.drop_collinear, "Drop linearly dependent columns");
  estimate->add_option("--out", est.out, "Output file (default: stdout)");
  estimate->add_option("--format", est.format, "Output format")->check(formats)->capture_default_str();

  TrueEffectsArgs te;
  auto* true_effects = app.add_subcommand("true-effects", "Population effects of a simulation design");
  true_effects->add_option("--design", te.design, "Design id")->required()->check(CLI::Range(1, 4));
  true_effects->add_option("--method", te.method, "analytic (designs 1, 3) or mc")
      ->check(CLI::IsMember({"analytic", "mc"}))
      ->capture_default_str();
  true_effects->add_option("--draws", te.draws, "Monte-Carlo draws")
      ->check(CLI::Range(std::uint64_t{10'000}, std::uint64_t{10'000'000'000}))
      ->capture_default_str();
  true_effects->add_option("--seed", te.seed, "Monte-Carlo seed")->capture_default_str();
  true_effects->add_option("--threads", te.threads, "Worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
  true_effects->add_option("--out", te.out, "Output file (default: stdout)");
  true_effects->add_option("--format", te.format, "Output format")->check(formats)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (simulate->parsed()) return run_simulate(sim);
  if (estimate->parsed()) return run_estimate(est);
  return run_true_effects(te);
}
