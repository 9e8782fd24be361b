#include "pathfree/constant_effect.hpp"

#include <array>
#include <string>
#include <vector>

namespace pathfree {

namespace {

constexpr Eigen::Index kAlphaConst = 0, kAlphaD = 1, kAlphaX = 2;
constexpr Eigen::Index kBetaD = 1, kBetaM = 2, kBetaDM = 3, kBetaX = 4;

void require_all_cells(const Dataset& data) {
  const auto empty = data.empty_cells();
  if (empty.empty()) return;
  const Cell c = empty.front();
  const std::string label = std::to_string(c.d) + std::to_string(c.m);
  throw Error(ErrorCode::EmptyCell,
              "no observations with D=" + std::to_string(c.d) + ", M=" + std::to_string(c.m),
              {label});
}

}  // namespace

ConstantFit fit_constant(const Dataset& data) {
  require_all_cells(data);

  const auto n = static_cast<Eigen::Index>(data.size());
  const auto kx = static_cast<Eigen::Index>(data.num_covariates());
  const auto& names = data.column_names();

  Matrix w(n, 2 + kx);
  w.col(0).setOnes();
  w.col(1) = data.d();
  w.rightCols(kx) = data.x();
  std::vector<std::string> w_names{"1", "D"};
  w_names.insert(w_names.end(), names.begin(), names.end());

  Matrix z(n, 4 + kx);
  z.col(0).setOnes();
  z.col(1) = data.d();
  z.col(2) = data.m();
  z.col(3) = data.d().cwiseProduct(data.m());
  z.rightCols(kx) = data.x();
  std::vector<std::string> z_names{"1", "D", "M", "DM"};
  z_names.insert(z_names.end(), names.begin(), names.end());

  ConstantFit fit;
  fit.m_fit = least_squares(w, data.m(), RankPolicy::Reject, w_names);
  fit.y_fit = least_squares(z, data.y(), RankPolicy::Reject, z_names);
  fit.alpha = fit.m_fit.coefficients;
  fit.beta = fit.y_fit.coefficients;
  fit.x = data.x();
  fit.xbar.resize(kx);
  for (Eigen::Index j = 0; j < kx; ++j) fit.xbar[j] = compensated_mean(data.x().col(j));
  return fit;
}

EffectScores scores_constant(const ConstantFit& fit) {
  const Eigen::Index kx = fit.xbar.size();
  const Vector alpha_x = fit.alpha.tail(kx);
  const double alpha_d = fit.alpha[kAlphaD];
  const double beta_m_plus_dm = fit.beta[kBetaM] + fit.beta[kBetaDM];
  const double beta_dm = fit.beta[kBetaDM];
  const double p_m0 = fit.alpha[kAlphaConst] + fit.xbar.dot(alpha_x);

  EffectScores out;

  // eta_1: direct effect.
  Vector c11 = Vector::Zero(4 + kx);
  c11[kBetaD] = 1.0;
  out.direct = influence_scores(c11, fit.y_fit);

  // eta_2: indirect effect, one term from each regression.
  Vector c21 = Vector::Zero(4 + kx);
  c21[kBetaM] = alpha_d;
  c21[kBetaDM] = alpha_d;
  Vector c22 = Vector::Zero(2 + kx);
  c22[kAlphaD] = beta_m_plus_dm;
  out.indirect = influence_scores(c21, fit.y_fit);
  out.indirect.scores += influence_scores(c22, fit.m_fit).scores;

  // eta_3: interaction effect, plus the sampling error of X-bar.
  Vector c31 = Vector::Zero(4 + kx);
  c31[kBetaDM] = p_m0;
  Vector c32 = Vector::Zero(2 + kx);
  c32[kAlphaConst] = beta_dm;
  c32.segment(kAlphaX, kx) = beta_dm * fit.xbar;
  out.interaction = influence_scores(c31, fit.y_fit);
  out.interaction.scores += influence_scores(c32, fit.m_fit).scores;
  if (kx > 0) {
    const Matrix centered = fit.x.rowwise() - fit.xbar.transpose();
    out.interaction.scores += beta_dm * (centered * alpha_x);
  }
  return out;
}

EffectEstimates effects_constant(const ConstantFit& fit) {
  const Eigen::Index kx = fit.xbar.size();
  const double alpha_d = fit.alpha[kAlphaD];
  const double direct = fit.beta[kBetaD];
  const double indirect = (fit.beta[kBetaM] + fit.beta[kBetaDM]) * alpha_d;
  const double interaction = fit.beta[kBetaDM] * (fit.alpha[kAlphaConst] + fit.xbar.dot(fit.alpha.tail(kx)));

  const EffectScores eta = scores_constant(fit);
  const std::array<ScoreSet, 1> s1{eta.direct};
  const std::array<ScoreSet, 1> s2{eta.indirect};
  const std::array<ScoreSet, 1> s3{eta.interaction};
  const std::array<ScoreSet, 3> all{eta.direct, eta.indirect, eta.interaction};

  EffectEstimates out;
  out.estimator_id = kConstantEstimatorId;
  out.n = static_cast<std::size_t>(fit.x.rows());
  out.direct = make_estimate(direct, variance_of_sum(s1).se);
  out.indirect = make_estimate(indirect, variance_of_sum(s2).se);
  out.interaction = make_estimate(interaction, variance_of_sum(s3).se);
  out.total = make_estimate(direct + indirect + interaction, variance_of_sum(all).se);
  out.complier_share = alpha_d;
  return out;
}

}  // namespace pathfree
