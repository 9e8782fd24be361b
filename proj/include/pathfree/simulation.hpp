#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pathfree/basis.hpp"
#include "pathfree/design.hpp"
#include "pathfree/ols.hpp"
#include "pathfree/types.hpp"

namespace pathfree {

/// One roster entry: the constant-effect estimator, or the varying-effect
/// estimator with a basis.
struct EstimatorSpec {
  enum class Kind { Constant, Varying };
  std::string label;
  Kind kind = Kind::Constant;
  BasisSpec basis;
};

/// Roster labels: c, v1 (linear), v2 (v1 + squares), v3 (v2 + phi) and
/// v:<path> for a basis read from a text file. Covariate names are needed to
/// build the preset bases.
EstimatorSpec make_estimator(const std::string& label, const std::vector<std::string>& covariates);
std::vector<EstimatorSpec> parse_roster(const std::string& comma_list,
                                        const std::vector<std::string>& covariates);

/// Runs one roster entry on a dataset.
EffectEstimates run_estimator(const EstimatorSpec& spec, const Dataset& data,
                              RankPolicy policy = RankPolicy::Reject);

/// Unnormalized summary of one estimator/effect pair across repetitions.
/// Sd uses the 1/R divisor so that rmse^2 = bias^2 + sd^2.
struct EffectMetrics {
  double bias = 0.0;
  double sd = 0.0;
  double rmse = 0.0;
  double mean_asy_sd = 0.0;
  double scale = 1.0;       // |true effect|, or 1 when not normalized
  bool normalized = true;   // false when |true effect| < kNormalizationFloor

  double abs_bias_n() const noexcept { return std::abs(bias) / scale; }
  double sd_n() const noexcept { return sd / scale; }
  double rmse_n() const noexcept { return rmse / scale; }
  double asy_sd_n() const noexcept { return mean_asy_sd / scale; }
};

inline constexpr double kNormalizationFloor = 1e-6;

struct EstimatorSummary {
  std::string label;
  std::string estimator_id;
  std::size_t successful_reps = 0;
  std::size_t failed_reps = 0;
  std::string first_failure;
  std::array<EffectMetrics, 4> metrics;  // indexed by Effect

  const EffectMetrics& operator[](Effect e) const noexcept { return metrics[static_cast<std::size_t>(e)]; }
};

struct SimulationReport {
  int design_id = 0;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  EffectVector true_effects;
  std::string true_method;           // "analytic" or "mc"
  std::optional<EffectVector> true_mc_se;
  std::uint64_t true_draws = 0;
  std::vector<EstimatorSummary> estimators;

  const EstimatorSummary& estimator(const std::string& label) const;
};

struct StudyConfig {
  SimulationDesign design = SimulationDesign::standard(1);
  std::size_t n = 1000;
  std::size_t reps = 1000;
  std::vector<EstimatorSpec> roster;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::uint64_t true_draws = 10'000'000;  // Monte-Carlo oracle size when needed
  RankPolicy rank_policy = RankPolicy::Reject;
};

/// Stream index reserved for the Monte-Carlo true-effect oracle.
inline constexpr std::uint64_t kTrueEffectStream = std::uint64_t{1} << 63;

/// Repetition r draws from mix_seed(seed, r). Repetitions where an estimator
/// throws are excluded for that estimator and counted. Throws AllRepsFailed
/// when some roster entry never succeeds.
SimulationReport run_study(const StudyConfig& config);

}  // namespace pathfree
