#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pathfree/types.hpp"

namespace pathfree {

/// Pivot threshold, relative to the largest pivot, below which a column of
/// the design is treated as linearly dependent.
inline constexpr double kRankTolerance = 1e-10;

enum class RankPolicy {
  Reject,         // throw RankDeficient naming the dependent columns
  DropDependent,  // refit without them; their coefficients are pinned to 0
};

/// Result of an ordinary least squares fit.
///
/// `gram_inverse` is the inverse of N^-1 * sum_i z_i z_i'. When columns were
/// dropped under RankPolicy::DropDependent, their rows and columns in
/// `gram_inverse` and their entries in `coefficients` are zero, so contrasts
/// over the full design width keep working.
struct LsFit {
  Vector coefficients;
  Vector residuals;
  Matrix gram_inverse;
  Matrix regressors;
  std::vector<std::size_t> dropped;
  bool rank_ok = true;

  std::size_t num_observations() const noexcept { return static_cast<std::size_t>(regressors.rows()); }
  std::size_t num_regressors() const noexcept { return static_cast<std::size_t>(regressors.cols()); }
};

/// Per-observation influence scores of one scalar functional.
struct ScoreSet {
  Vector scores;
};

/// Influence scores of the three component effects; their sum drives the
/// total-effect variance.
struct EffectScores {
  ScoreSet direct;
  ScoreSet indirect;
  ScoreSet interaction;
};

struct VarianceEstimate {
  double omega = 0.0;  // N^-1 * sum_i (sum_j s_ji)^2
  double se = 0.0;     // sqrt(omega / N)
};

/// Column-pivoted Householder QR solve. `column_names`, when given, label the
/// columns in RankDeficient diagnostics.
LsFit least_squares(const Matrix& design, const Vector& response,
                    RankPolicy policy = RankPolicy::Reject,
                    std::span<const std::string> column_names = {});

/// score_i = contrast' * gram_inverse * z_i * residual_i
ScoreSet influence_scores(const Vector& contrast, const LsFit& fit);

VarianceEstimate variance_of_sum(std::span<const ScoreSet> score_sets);

/// Neumaier-compensated sum in index order.
double compensated_sum(const Vector& v) noexcept;

inline double compensated_mean(const Vector& v) noexcept {
  return v.size() == 0 ? 0.0 : compensated_sum(v) / static_cast<double>(v.size());
}

}  // namespace pathfree
