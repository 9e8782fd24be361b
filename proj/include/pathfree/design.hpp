#pragma once

#include <cstddef>
#include <cstdint>

#include "pathfree/types.hpp"

namespace pathfree {

/// Parameters of the linear structural model
///   M^d  = 1[threshold < alpha1 + alpha_d d + X'alpha_x + e]
///   Y^dm = beta1 + beta_d d + beta_m m + beta_dm dm + X'beta_x + U
struct LinearParams {
  double alpha1 = 0.0;
  double alpha_d = 0.5;
  Vector alpha_x = Vector::Constant(1, 0.5);
  double beta1 = 0.0;
  double beta_d = 0.5;
  double beta_m = 0.5;
  double beta_dm = 0.5;
  Vector beta_x = Vector::Constant(1, -1.0);
  Vector x_mean = Vector::Constant(1, 0.5);  // E(X)
};

enum class CovariateLaw { Uniform01, Normal };
enum class MediatorError { Uniform01, StandardNormal };
enum class OutcomeKind { Continuous, Probit };

/// One of the four simulation designs. The id fixes the covariate law, the
/// mediator error and the outcome type together:
///   1: X ~ Uni[0,1],   e ~ Uni[0,1] with threshold 1, continuous Y
///   2: X ~ Uni[0,1],   e ~ Uni[0,1] with threshold 1, probit Y
///   3: X ~ N(0, 4),    e ~ N(0,1) with threshold 0,   continuous Y
///   4: X ~ N(0, 4),    e ~ N(0,1) with threshold 0,   probit Y
struct SimulationDesign {
  int id = 1;
  LinearParams params;
  CovariateLaw x_law = CovariateLaw::Uniform01;
  double x_sd = 1.0;  // only used by CovariateLaw::Normal
  MediatorError m_error = MediatorError::Uniform01;
  double m_threshold = 1.0;
  OutcomeKind y_kind = OutcomeKind::Continuous;
  double p_treat = 0.5;

  /// Throws InvalidArgument for ids outside 1..4.
  static SimulationDesign standard(int id);
};

/// Name of the single covariate in generated datasets.
inline constexpr const char* kSimulatedCovariate = "x";

struct GeneratedSample {
  Dataset data;
  PotentialTable potentials;
};

/// Draws n i.i.d. units. Per unit the draw order is X, e, U, D. The same
/// (design, n, seed) always yields bit-identical output.
GeneratedSample generate_dataset(const SimulationDesign& design, std::size_t n, std::uint64_t seed);

/// Potential table only, drawing from the same unit stream as generate_dataset.
PotentialTable generate_potentials(const SimulationDesign& design, std::size_t n, std::uint64_t seed);

}  // namespace pathfree
