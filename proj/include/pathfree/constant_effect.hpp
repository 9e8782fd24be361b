#pragma once

#include "pathfree/ols.hpp"
#include "pathfree/types.hpp"

namespace pathfree {

inline constexpr const char* kConstantEstimatorId = "ols_c";

/// Constant-effect fit: M on W = (1, D, X')' and Y on Z = (1, D, M, DM, X')'.
///
/// Coefficient layout is fixed:
///   alpha = (alpha_1, alpha_d, alpha_x...)
///   beta  = (beta_1, beta_d, beta_m, beta_dm, beta_x...)
struct ConstantFit {
  Vector alpha;
  Vector beta;
  LsFit m_fit;
  LsFit y_fit;
  Vector xbar;
  Matrix x;  // covariates, needed for the centered-X interaction score

  std::size_t num_covariates() const noexcept { return static_cast<std::size_t>(xbar.size()); }
};

/// Throws EmptyCell when any (D, M) cell is unpopulated, or RankDeficient
/// (with column names) when a design is singular.
ConstantFit fit_constant(const Dataset& data);

/// eta_1, eta_2, eta_3 per observation. eta_3 includes the centered
/// covariate term beta_dm alpha_x'(X_i - Xbar).
EffectScores scores_constant(const ConstantFit& fit);

EffectEstimates effects_constant(const ConstantFit& fit);

inline EffectEstimates estimate_constant(const Dataset& data) {
  return effects_constant(fit_constant(data));
}

}  // namespace pathfree
