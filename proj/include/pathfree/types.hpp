#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "pathfree/error.hpp"

namespace pathfree {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Location of one of the four treatment/mediator cells.
struct Cell {
  int d = 0;
  int m = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Column-oriented input prior to validation.
struct RawColumns {
  std::vector<double> y;
  std::vector<double> d;
  std::vector<double> m;
  std::vector<std::vector<double>> x;  // one entry per covariate column
  std::vector<std::string> column_names;
};

/// Observed sample (Y, D, M, X). Only constructible through
/// validate_dataset, so every instance satisfies: N >= 1, all entries
/// finite, D and M in {0, 1}. X carries no intercept column.
class Dataset {
 public:
  std::size_t size() const noexcept { return static_cast<std::size_t>(y_.size()); }
  std::size_t num_covariates() const noexcept { return static_cast<std::size_t>(x_.cols()); }

  const Vector& y() const noexcept { return y_; }
  const Vector& d() const noexcept { return d_; }
  const Vector& m() const noexcept { return m_; }
  const Matrix& x() const noexcept { return x_; }
  const std::vector<std::string>& column_names() const noexcept { return names_; }

  /// Observation counts indexed by 2*d + m.
  const std::array<std::size_t, 4>& cell_counts() const noexcept { return cell_counts_; }
  std::size_t cell_count(Cell c) const noexcept { return cell_counts_[2 * c.d + c.m]; }
  std::vector<Cell> empty_cells() const;

  /// Index of a covariate by name, or -1.
  int column_index(const std::string& name) const noexcept;

 private:
  friend Dataset validate_dataset(const RawColumns&);
  Dataset() = default;

  Vector y_, d_, m_;
  Matrix x_;
  std::vector<std::string> names_;
  std::array<std::size_t, 4> cell_counts_{};
};

/// Enforces the Dataset invariants. Empty (D,M) cells are not an error here;
/// query them via Dataset::empty_cells().
Dataset validate_dataset(const RawColumns& raw);

/// Potential mediators (M^0, M^1) and potential outcomes Y^{dm} per unit.
struct PotentialTable {
  Vector m0, m1;
  Vector y00, y01, y10, y11;

  std::size_t size() const noexcept { return static_cast<std::size_t>(m0.size()); }
};

struct EffectEstimate {
  double point = 0.0;
  double se = 0.0;
  double t = 0.0;
};

enum class Effect { Total = 0, Direct = 1, Indirect = 2, Interaction = 3 };

inline constexpr std::array<Effect, 4> kAllEffects = {Effect::Total, Effect::Direct,
                                                      Effect::Indirect, Effect::Interaction};

const char* to_string(Effect e) noexcept;

struct EffectEstimates {
  EffectEstimate total, direct, indirect, interaction;
  std::size_t n = 0;
  std::string estimator_id;
  double complier_share = 0.0;

  const EffectEstimate& operator[](Effect e) const noexcept;
  EffectEstimate& operator[](Effect e) noexcept;
};

/// Builds an estimate with t = point/se when se > 0 and t = 0 otherwise.
EffectEstimate make_estimate(double point, double se) noexcept;

/// Point values only; total is always computed as the sum of the three parts.
struct EffectVector {
  double total = 0.0;
  double direct = 0.0;
  double indirect = 0.0;
  double interaction = 0.0;

  static EffectVector from_parts(double direct, double indirect, double interaction) noexcept {
    return {direct + indirect + interaction, direct, indirect, interaction};
  }
  double operator[](Effect e) const noexcept;
};

}  // namespace pathfree
