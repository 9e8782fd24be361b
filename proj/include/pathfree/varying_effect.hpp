#pragma once

#include <array>
#include <string>

#include "pathfree/basis.hpp"
#include "pathfree/ols.hpp"
#include "pathfree/types.hpp"

namespace pathfree {

/// Varying-effect fit built from three regressions:
///
///   Y  on Q0 = (X0, X1 D, X4 M, X3 DM)    -> beta0 = (b00, b1x, b4x, b3x)
///   DY on D Q2, Q2 = (X2, X2 M)           -> beta2 = (b20, b2x)
///   M  on Qm = (Xm, Xm D)                 -> alpham = (am0, amx)
///
/// The DY regression runs over the full sample so its Gram matrix is
/// N^-1 sum_i D_i Q2_i Q2_i'.
struct VaryingFit {
  BasisSpec spec;
  std::array<std::size_t, kNumBasisBlocks> dims{};

  Vector beta0;
  Vector beta2;
  Vector alpham;
  LsFit y_fit;
  LsFit dy_fit;
  LsFit m_fit;

  Vector x1_mean;      // sample average of X1
  Vector xm_mean;      // sample average of Xm
  Matrix x2xm_mean;    // sample average of X2 Xm'
  Matrix x3xm_mean;    // sample average of X3 Xm'

  std::size_t dim(BasisBlock b) const noexcept { return dims[static_cast<std::size_t>(b)]; }

  // Coefficient views, in block order.
  Vector beta_1x() const;
  Vector beta_3x() const;
  Vector beta_4x() const;
  Vector beta_2x() const;
  Vector alpha_m0() const;
  Vector alpha_mx() const;
};

struct VaryingOptions {
  RankPolicy rank_policy = RankPolicy::Reject;
};

/// Throws TreatedCellMissing unless both (D=1, M=0) and (D=1, M=1) are
/// populated; RankDeficient names the offending regression and columns.
VaryingFit fit_varying(const Dataset& data, const BasisSpec& spec, VaryingOptions options = {});

/// lambda_1, lambda_2, lambda_3 per observation, conditional on the sample
/// covariate averages (no centered-covariate terms).
EffectScores scores_varying(const VaryingFit& fit);

EffectEstimates effects_varying(const VaryingFit& fit);

inline EffectEstimates estimate_varying(const Dataset& data, const BasisSpec& spec,
                                        VaryingOptions options = {}) {
  return effects_varying(fit_varying(data, spec, options));
}

std::string varying_estimator_id(const BasisSpec& spec);

}  // namespace pathfree
