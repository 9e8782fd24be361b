#include "pathfree/ols.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pathfree {

double compensated_sum(const Vector& v) noexcept {
  double sum = 0.0;
  double carry = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double x = v[i];
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  return sum + carry;
}

namespace {

std::string column_label(std::span<const std::string> names, Eigen::Index j) {
  if (static_cast<std::size_t>(j) < names.size()) return names[static_cast<std::size_t>(j)];
  return "column " + std::to_string(j);
}

using Qr = Eigen::ColPivHouseholderQR<Matrix>;

Qr decompose(const Matrix& design) {
  Qr qr(design.rows(), design.cols());
  qr.setThreshold(kRankTolerance);
  qr.compute(design);
  return qr;
}

// (Z'Z / N)^-1 = N * P R^-1 R^-T P' for Z P = Q R.
Matrix gram_inverse_from(const Qr& qr, Eigen::Index n) {
  const Eigen::Index p = qr.cols();
  const Matrix r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Matrix r_inv = r.triangularView<Eigen::Upper>().solve(Matrix::Identity(p, p));
  const Matrix inner = r_inv * r_inv.transpose();
  const auto& perm = qr.colsPermutation();
  Matrix out = perm * inner * perm.transpose();
  out *= static_cast<double>(n);
  return out;
}

}  // namespace

LsFit least_squares(const Matrix& design, const Vector& response, RankPolicy policy,
                    std::span<const std::string> column_names) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  if (response.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "response length does not match design rows");
  }
  if (p == 0) throw Error(ErrorCode::DimensionMismatch, "design has no columns");

  Qr qr = decompose(design);
  const Eigen::Index rank = qr.rank();

  std::vector<std::size_t> dropped;
  if (rank < p) {
    std::vector<std::string> labels;
    for (Eigen::Index k = rank; k < p; ++k) {
      const Eigen::Index j = qr.colsPermutation().indices()[k];
      dropped.push_back(static_cast<std::size_t>(j));
      labels.push_back(column_label(column_names, j));
    }
    std::sort(dropped.begin(), dropped.end());
    if (policy == RankPolicy::Reject || rank == 0) {
      std::string msg = "design matrix is rank deficient; dependent columns:";
      for (const auto& l : labels) msg += " " + l;
      throw Error(ErrorCode::RankDeficient, msg, labels);
    }
  }

  LsFit fit;
  fit.regressors = design;
  fit.dropped = dropped;
  fit.rank_ok = dropped.empty();

  if (dropped.empty()) {
    fit.coefficients = qr.solve(response);
    fit.gram_inverse = gram_inverse_from(qr, n);
  } else {
    std::vector<Eigen::Index> kept;
    for (Eigen::Index j = 0, k = 0; j < p; ++j) {
      if (k < static_cast<Eigen::Index>(dropped.size()) &&
          static_cast<Eigen::Index>(dropped[static_cast<std::size_t>(k)]) == j) {
        ++k;
        continue;
      }
      kept.push_back(j);
    }
    const auto pk = static_cast<Eigen::Index>(kept.size());
    Matrix reduced(n, pk);
    for (Eigen::Index c = 0; c < pk; ++c) reduced.col(c) = design.col(kept[static_cast<std::size_t>(c)]);
    Qr qr_reduced = decompose(reduced);
    if (qr_reduced.rank() < pk) {
      throw Error(ErrorCode::RankDeficient, "design remains rank deficient after dropping columns");
    }
    const Vector beta = qr_reduced.solve(response);
    const Matrix ginv = gram_inverse_from(qr_reduced, n);
    fit.coefficients = Vector::Zero(p);
    fit.gram_inverse = Matrix::Zero(p, p);
    for (Eigen::Index a = 0; a < pk; ++a) {
      fit.coefficients[kept[static_cast<std::size_t>(a)]] = beta[a];
      for (Eigen::Index b = 0; b < pk; ++b)
        fit.gram_inverse(kept[static_cast<std::size_t>(a)], kept[static_cast<std::size_t>(b)]) = ginv(a, b);
    }
  }
  fit.residuals = response - design * fit.coefficients;
  return fit;
}

ScoreSet influence_scores(const Vector& contrast, const LsFit& fit) {
  if (static_cast<std::size_t>(contrast.size()) != fit.num_regressors()) {
    throw Error(ErrorCode::DimensionMismatch, "contrast length " + std::to_string(contrast.size()) +
                                                  " does not match fit dimension " +
                                                  std::to_string(fit.num_regressors()));
  }
  const Vector weights = fit.gram_inverse * contrast;
  ScoreSet out;
  out.scores = (fit.regressors * weights).cwiseProduct(fit.residuals);
  return out;
}

VarianceEstimate variance_of_sum(std::span<const ScoreSet> score_sets) {
  if (score_sets.empty()) throw Error(ErrorCode::InvalidArgument, "no score sets supplied");
  const Eigen::Index n = score_sets.front().scores.size();
  for (const auto& s : score_sets) {
    if (s.scores.size() != n) throw Error(ErrorCode::LengthMismatch, "score sets differ in length");
  }
  if (n == 0) return {};

  Vector combined = Vector::Zero(n);
  for (const auto& s : score_sets) combined += s.scores;
  const double omega = compensated_mean(combined.array().square().matrix());
  return {omega, std::sqrt(omega / static_cast<double>(n))};
}

}  // namespace pathfree
