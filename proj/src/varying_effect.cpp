#include "pathfree/varying_effect.hpp"

#include <string>
#include <vector>

namespace pathfree {

namespace {

using Names = std::vector<std::string>;

Matrix scale_rows(const Matrix& block, const Vector& w) { return w.asDiagonal() * block; }

void append_names(Names& out, const Names& src, const std::string& prefix, const std::string& suffix) {
  for (const auto& s : src) out.push_back(prefix + s + suffix);
}

LsFit fit_block(const char* label, const Matrix& design, const Vector& response,
                const Names& names, RankPolicy policy) {
  try {
    return least_squares(design, response, policy, names);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RankDeficient) throw;
    throw Error(ErrorCode::RankDeficient, std::string(label) + " regression: " + e.what(), e.details());
  }
}

Matrix cross_mean(const Matrix& a, const Matrix& b) {
  return (a.transpose() * b) / static_cast<double>(a.rows());
}

Vector column_means(const Matrix& a) {
  Vector out(a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) out[j] = compensated_mean(a.col(j));
  return out;
}

}  // namespace

Vector VaryingFit::beta_1x() const { return beta0.segment(dim(BasisBlock::X0), dim(BasisBlock::X1)); }
Vector VaryingFit::beta_4x() const {
  return beta0.segment(dim(BasisBlock::X0) + dim(BasisBlock::X1), dim(BasisBlock::X4));
}
Vector VaryingFit::beta_3x() const { return beta0.tail(dim(BasisBlock::X3)); }
Vector VaryingFit::beta_2x() const { return beta2.tail(dim(BasisBlock::X2)); }
Vector VaryingFit::alpha_m0() const { return alpham.head(dim(BasisBlock::Xm)); }
Vector VaryingFit::alpha_mx() const { return alpham.tail(dim(BasisBlock::Xm)); }

std::string varying_estimator_id(const BasisSpec& spec) { return "ols_v:" + spec.hash(); }

VaryingFit fit_varying(const Dataset& data, const BasisSpec& spec, VaryingOptions options) {
  if (data.cell_count({1, 0}) == 0 || data.cell_count({1, 1}) == 0) {
    throw Error(ErrorCode::TreatedCellMissing,
                "the treated subsample must contain both mediator values");
  }
  const ExpandedBasis basis = expand_basis(data, spec);
  const Matrix& x0 = basis.block(BasisBlock::X0);
  const Matrix& x1 = basis.block(BasisBlock::X1);
  const Matrix& x2 = basis.block(BasisBlock::X2);
  const Matrix& x3 = basis.block(BasisBlock::X3);
  const Matrix& x4 = basis.block(BasisBlock::X4);
  const Matrix& xm = basis.block(BasisBlock::Xm);
  const Vector& d = data.d();
  const Vector& m = data.m();
  const Vector dm = d.cwiseProduct(m);
  const auto n = static_cast<Eigen::Index>(data.size());

  VaryingFit fit;
  fit.spec = spec;
  for (std::size_t b = 0; b < kNumBasisBlocks; ++b)
    fit.dims[b] = static_cast<std::size_t>(basis.blocks[b].cols());

  Matrix q0(n, x0.cols() + x1.cols() + x4.cols() + x3.cols());
  q0 << x0, scale_rows(x1, d), scale_rows(x4, m), scale_rows(x3, dm);
  Names q0_names;
  append_names(q0_names, basis.block_names(BasisBlock::X0), "x0:", "");
  append_names(q0_names, basis.block_names(BasisBlock::X1), "x1:", "*D");
  append_names(q0_names, basis.block_names(BasisBlock::X4), "x4:", "*M");
  append_names(q0_names, basis.block_names(BasisBlock::X3), "x3:", "*DM");

  Matrix dq2(n, 2 * x2.cols());
  dq2 << scale_rows(x2, d), scale_rows(x2, dm);
  Names q2_names;
  append_names(q2_names, basis.block_names(BasisBlock::X2), "x2:", "*D");
  append_names(q2_names, basis.block_names(BasisBlock::X2), "x2:", "*DM");

  Matrix qm(n, 2 * xm.cols());
  qm << xm, scale_rows(xm, d);
  Names qm_names;
  append_names(qm_names, basis.block_names(BasisBlock::Xm), "xm:", "");
  append_names(qm_names, basis.block_names(BasisBlock::Xm), "xm:", "*D");

  fit.y_fit = fit_block("Y", q0, data.y(), q0_names, options.rank_policy);
  fit.dy_fit = fit_block("DY", dq2, d.cwiseProduct(data.y()), q2_names, options.rank_policy);
  fit.m_fit = fit_block("M", qm, m, qm_names, options.rank_policy);
  fit.beta0 = fit.y_fit.coefficients;
  fit.beta2 = fit.dy_fit.coefficients;
  fit.alpham = fit.m_fit.coefficients;

  fit.x1_mean = column_means(x1);
  fit.xm_mean = column_means(xm);
  fit.x2xm_mean = cross_mean(x2, xm);
  fit.x3xm_mean = cross_mean(x3, xm);
  return fit;
}

EffectScores scores_varying(const VaryingFit& fit) {
  const auto k0 = static_cast<Eigen::Index>(fit.dim(BasisBlock::X0));
  const auto k1 = static_cast<Eigen::Index>(fit.dim(BasisBlock::X1));
  const auto k2 = static_cast<Eigen::Index>(fit.dim(BasisBlock::X2));
  const auto k3 = static_cast<Eigen::Index>(fit.dim(BasisBlock::X3));
  const auto k4 = static_cast<Eigen::Index>(fit.dim(BasisBlock::X4));
  const auto km = static_cast<Eigen::Index>(fit.dim(BasisBlock::Xm));
  const Eigen::Index p0 = k0 + k1 + k4 + k3;

  const Vector s2m_amx = fit.x2xm_mean * fit.alpha_mx();
  const Vector s2m_b2x = fit.x2xm_mean.transpose() * fit.beta_2x();
  const Vector s3m_am0 = fit.x3xm_mean * fit.alpha_m0();
  const Vector s3m_b3x = fit.x3xm_mean.transpose() * fit.beta_3x();

  // Inference conditions on the covariate averages, so every score below is
  // built from regression residuals only.
  EffectScores out;
  Vector g1 = Vector::Zero(p0);
  g1.segment(k0, k1) = fit.x1_mean;
  out.direct = influence_scores(g1, fit.y_fit);

  Vector g21 = Vector::Zero(2 * k2);
  g21.tail(k2) = s2m_amx;
  Vector g22 = Vector::Zero(2 * km);
  g22.tail(km) = s2m_b2x;
  out.indirect = influence_scores(g21, fit.dy_fit);
  out.indirect.scores += influence_scores(g22, fit.m_fit).scores;

  Vector g31 = Vector::Zero(p0);
  g31.tail(k3) = s3m_am0;
  Vector g32 = Vector::Zero(2 * km);
  g32.head(km) = s3m_b3x;
  out.interaction = influence_scores(g31, fit.y_fit);
  out.interaction.scores += influence_scores(g32, fit.m_fit).scores;
  return out;
}

EffectEstimates effects_varying(const VaryingFit& fit) {
  const double direct = fit.x1_mean.dot(fit.beta_1x());
  const double indirect = fit.beta_2x().dot(fit.x2xm_mean * fit.alpha_mx());
  const double interaction = fit.beta_3x().dot(fit.x3xm_mean * fit.alpha_m0());

  const EffectScores lambda = scores_varying(fit);
  const std::array<ScoreSet, 1> s1{lambda.direct};
  const std::array<ScoreSet, 1> s2{lambda.indirect};
  const std::array<ScoreSet, 1> s3{lambda.interaction};
  const std::array<ScoreSet, 3> all{lambda.direct, lambda.indirect, lambda.interaction};

  EffectEstimates out;
  out.estimator_id = varying_estimator_id(fit.spec);
  out.n = fit.y_fit.num_observations();
  out.direct = make_estimate(direct, variance_of_sum(s1).se);
  out.indirect = make_estimate(indirect, variance_of_sum(s2).se);
  out.interaction = make_estimate(interaction, variance_of_sum(s3).se);
  out.total = make_estimate(direct + indirect + interaction, variance_of_sum(all).se);
  out.complier_share = fit.xm_mean.dot(fit.alpha_mx());
  return out;
}

}  // namespace pathfree
