#include "pathfree/simulation.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "parallel.hpp"
#include "pathfree/constant_effect.hpp"
#include "pathfree/oracle.hpp"
#include "pathfree/rng.hpp"
#include "pathfree/varying_effect.hpp"

namespace pathfree {

EstimatorSpec make_estimator(const std::string& label, const std::vector<std::string>& covariates) {
  EstimatorSpec spec;
  spec.label = label;
  if (label == "c") return spec;
  spec.kind = EstimatorSpec::Kind::Varying;
  if (label == "v1" || label == "v") {
    spec.basis = BasisSpec::linear(covariates);
  } else if (label == "v2") {
    spec.basis = BasisSpec::quadratic(covariates);
  } else if (label == "v3") {
    spec.basis = BasisSpec::quadratic_phi(covariates);
  } else if (label.rfind("v:", 0) == 0) {
    const std::string path = label.substr(2);
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read basis file '" + path + "'", {path});
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    spec.basis = BasisSpec::parse(text);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown estimator label '" + label + "'", {label});
  }
  return spec;
}

std::vector<EstimatorSpec> parse_roster(const std::string& comma_list,
                                        const std::vector<std::string>& covariates) {
  std::vector<EstimatorSpec> out;
  std::stringstream ss(comma_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    item = item.substr(first, item.find_last_not_of(" \t") - first + 1);
    out.push_back(make_estimator(item, covariates));
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "estimator roster is empty");
  return out;
}

EffectEstimates run_estimator(const EstimatorSpec& spec, const Dataset& data, RankPolicy policy) {
  if (spec.kind == EstimatorSpec::Kind::Constant) return estimate_constant(data);
  return estimate_varying(data, spec.basis, {policy});
}

const EstimatorSummary& SimulationReport::estimator(const std::string& label) const {
  for (const auto& e : estimators)
    if (e.label == label) return e;
  throw Error(ErrorCode::InvalidArgument, "report has no estimator '" + label + "'");
}

namespace {

struct RepOutcome {
  bool ok = false;
  std::array<double, 4> point{};
  std::array<double, 4> se{};
  std::string error;
  std::string estimator_id;
};

EffectMetrics summarize(const std::vector<double>& points, const std::vector<double>& ses, double truth) {
  const auto r = static_cast<Eigen::Index>(points.size());
  const Vector p = Eigen::Map<const Vector>(points.data(), r);
  const Vector s = Eigen::Map<const Vector>(ses.data(), r);
  const double mean = compensated_mean(p);

  EffectMetrics m;
  m.bias = mean - truth;
  m.sd = std::sqrt(compensated_mean((p.array() - mean).square().matrix()));
  m.rmse = std::sqrt(compensated_mean((p.array() - truth).square().matrix()));
  m.mean_asy_sd = compensated_mean(s);
  if (std::abs(truth) < kNormalizationFloor) {
    m.normalized = false;
    m.scale = 1.0;
  } else {
    m.scale = std::abs(truth);
  }
  return m;
}

}  // namespace

SimulationReport run_study(const StudyConfig& config) {
  if (config.reps < 2) throw Error(ErrorCode::InvalidArgument, "at least two repetitions are required");
  if (config.n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be positive");
  if (config.roster.empty()) throw Error(ErrorCode::InvalidArgument, "estimator roster is empty");

  SimulationReport report;
  report.design_id = config.design.id;
  report.n = config.n;
  report.reps = config.reps;
  report.seed = config.seed;
  try {
    report.true_effects = true_effects_analytic(config.design);
    report.true_method = "analytic";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InvalidArgument) throw;
    const auto mc = true_effects_montecarlo(config.design, config.true_draws,
                                            mix_seed(config.seed, kTrueEffectStream), config.threads);
    report.true_effects = mc.effects;
    report.true_mc_se = mc.mc_se;
    report.true_draws = mc.draws;
    report.true_method = "mc";
  }

  const std::size_t k = config.roster.size();
  std::vector<RepOutcome> outcomes(config.reps * k);
  detail::parallel_for(config.reps, config.threads, [&](std::size_t r) {
    const auto sample = generate_dataset(config.design, config.n, mix_seed(config.seed, r));
    for (std::size_t e = 0; e < k; ++e) {
      RepOutcome& out = outcomes[r * k + e];
      try {
        const auto est = run_estimator(config.roster[e], sample.data, config.rank_policy);
        for (Effect eff : kAllEffects) {
          out.point[static_cast<std::size_t>(eff)] = est[eff].point;
          out.se[static_cast<std::size_t>(eff)] = est[eff].se;
        }
        out.estimator_id = est.estimator_id;
        out.ok = true;
      } catch (const Error& err) {
        out.error = std::string(to_string(err.code())) + ": " + err.what();
      }
    }
  });

  for (std::size_t e = 0; e < k; ++e) {
    EstimatorSummary summary;
    summary.label = config.roster[e].label;
    std::array<std::vector<double>, 4> points, ses;
    for (std::size_t r = 0; r < config.reps; ++r) {
      const RepOutcome& o = outcomes[r * k + e];
      if (!o.ok) {
        if (summary.failed_reps++ == 0) summary.first_failure = o.error;
        continue;
      }
      if (summary.estimator_id.empty()) summary.estimator_id = o.estimator_id;
      ++summary.successful_reps;
      for (std::size_t j = 0; j < 4; ++j) {
        points[j].push_back(o.point[j]);
        ses[j].push_back(o.se[j]);
      }
    }
    if (summary.successful_reps == 0) {
      throw Error(ErrorCode::AllRepsFailed,
                  "estimator '" + summary.label + "' failed in every repetition (" + summary.first_failure + ")",
                  {summary.label});
    }
    for (Effect eff : kAllEffects) {
      const auto j = static_cast<std::size_t>(eff);
      summary.metrics[j] = summarize(points[j], ses[j], report.true_effects[eff]);
    }
    report.estimators.push_back(std::move(summary));
  }
  return report;
}

}  // namespace pathfree
