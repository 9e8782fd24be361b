#pragma once

#include <cstddef>
#include <cstdint>

#include "pathfree/design.hpp"
#include "pathfree/types.hpp"

namespace pathfree {

/// Expected natural direct (delta) and indirect (mu) effects by treatment arm.
struct NaturalEffects {
  double delta0 = 0.0;
  double delta1 = 0.0;
  double mu0 = 0.0;
  double mu1 = 0.0;
};

/// direct = beta_d, indirect = (beta_m + beta_dm) alpha_d,
/// interaction = beta_dm (alpha1 + E(X)'alpha_x).
EffectVector true_effects_linear(const LinearParams& p);

/// E delta(d) = beta_d + beta_dm (alpha1 + alpha_d d + E(X)'alpha_x)
/// E mu(d)    = (beta_m + beta_dm d) alpha_d
NaturalEffects natural_effects_linear(const LinearParams& p);

/// Closed-form true effects where they exist: design 1 (linear mediator
/// probability) and design 3 (normal mixture, continuous outcome).
/// Throws InvalidArgument for the probit-outcome designs.
EffectVector true_effects_analytic(const SimulationDesign& design);

enum class StratumPolicy { Reject, DropIncomplete };

/// Plug-in identification from cell means within each distinct covariate
/// row, averaged over the empirical covariate distribution. Every stratum
/// needs all four (D, M) cells; incomplete strata throw EmptyStratumCell or
/// are dropped under StratumPolicy::DropIncomplete.
EffectVector effects_from_cells(const Dataset& data, StratumPolicy policy = StratumPolicy::Reject);

/// Sample averages of the unit-level controlled effects. Cross-checks the
/// summed total against mean(Y_1 - Y_0).
EffectVector population_effects_from_potentials(const PotentialTable& pt);

struct MonteCarloEffects {
  EffectVector effects;
  EffectVector mc_se;  // sample Sd / sqrt(draws) of each unit-level term
  std::uint64_t draws = 0;
};

/// Chunk length of the Monte-Carlo oracle; chunk c draws from mix_seed(seed, c).
inline constexpr std::size_t kMonteCarloChunk = std::size_t{1} << 16;
inline constexpr std::uint64_t kMinMonteCarloDraws = 10'000;

/// Chunks are independent, so `threads` changes only the wall time; the
/// reduction always runs in chunk order.
MonteCarloEffects true_effects_montecarlo(const SimulationDesign& design, std::uint64_t draws,
                                          std::uint64_t seed, unsigned threads = 1);

}  // namespace pathfree
