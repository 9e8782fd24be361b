#include <doctest.h>

#include <random>

#include "pathfree/constant_effect.hpp"
#include "pathfree/design.hpp"
#include "test_support.hpp"

using namespace pathfree;
using testing::error_code_of;
using testing::four_point;
using testing::make_data;

namespace {

double mean_where(const Dataset& ds, double dval) {
  double s = 0;
  int c = 0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (ds.d()[i] == dval) {
      s += ds.y()[i];
      ++c;
    }
  return s / c;
}

void check_additive(const EffectEstimates& e) {
  const double parts = e.direct.point + e.indirect.point + e.interaction.point;
  CHECK(std::abs(e.total.point - parts) <= 1e-12 * std::max(1.0, std::abs(parts)));
}

}  // namespace

TEST_CASE("four-point dataset coefficients") {
  const ConstantFit fit = fit_constant(four_point());
  CHECK(fit.beta[1] == doctest::Approx(2.0));
  CHECK(fit.beta[2] == doctest::Approx(1.0));
  CHECK(fit.beta[3] == doctest::Approx(2.0));
  CHECK(fit.alpha[0] == doctest::Approx(0.5));
  CHECK(std::abs(fit.alpha[1]) < 1e-14);
}

TEST_CASE("four-point dataset effects") {
  const Dataset ds = four_point();
  const EffectEstimates e = estimate_constant(ds);
  CHECK(e.direct.point == doctest::Approx(2.0));
  CHECK(std::abs(e.indirect.point) < 1e-14);
  CHECK(e.interaction.point == doctest::Approx(1.0));
  CHECK(e.total.point == doctest::Approx(3.0));
  CHECK(e.total.point == doctest::Approx(mean_where(ds, 1) - mean_where(ds, 0)).epsilon(1e-12));
  CHECK(e.estimator_id == "ols_c");
  CHECK(e.n == 4);
}

TEST_CASE("Y equal to D") {
  const Dataset ds = make_data({0, 0, 1, 1, 0, 1}, {0, 0, 1, 1, 0, 1}, {0, 1, 0, 1, 1, 1});
  const ConstantFit fit = fit_constant(ds);
  CHECK(fit.beta[1] == doctest::Approx(1.0));
  CHECK(std::abs(fit.beta[2]) < 1e-14);
  CHECK(std::abs(fit.beta[3]) < 1e-14);
}

TEST_CASE("missing treated-mediated cell") {
  const Dataset ds = make_data({0, 1, 2, 3}, {0, 0, 1, 1}, {0, 1, 0, 0});
  try {
    fit_constant(ds);
    FAIL("expected EmptyCell");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyCell);
    REQUIRE(e.details().size() == 1);
    CHECK(e.details()[0] == "11");
  }
}

TEST_CASE("rank deficient covariates are named") {
  const Dataset ds = make_data({0, 1, 2, 5, 1}, {0, 0, 1, 1, 1}, {0, 1, 0, 1, 1}, {{1, 1, 1, 1, 1}}, {"const"});
  try {
    fit_constant(ds);
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficient);
    REQUIRE(!e.details().empty());
  }
}

TEST_CASE("no-covariate exactness and additivity on fuzzed data") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Dataset ds = testing::random_dataset(seed, 10 + seed * 13, 0);
    const EffectEstimates e = estimate_constant(ds);
    const double diff = mean_where(ds, 1) - mean_where(ds, 0);
    CHECK(std::abs(e.total.point - diff) <= 1e-12 * std::max(1.0, std::abs(diff)));
    check_additive(e);
  }
  for (std::uint64_t seed = 100; seed < 120; ++seed) check_additive(estimate_constant(testing::random_dataset(seed, 300, 3)));
}

TEST_CASE("score families sum to zero") {
  const Dataset ds = testing::random_dataset(8, 500, 2);
  const EffectScores eta = scores_constant(fit_constant(ds));
  for (const ScoreSet* s : {&eta.direct, &eta.indirect, &eta.interaction}) {
    const double scale = s->scores.cwiseAbs().sum();
    CHECK(std::abs(compensated_sum(s->scores)) <= 1e-8 * scale);
  }
}

TEST_CASE("the interaction score carries the centered covariate term") {
  // Rebuilt from the two regression fits by explicit matrix products.
  const Dataset ds = testing::random_dataset(12, 200, 2);
  const ConstantFit fit = fit_constant(ds);
  const EffectScores eta = scores_constant(fit);
  const double bdm = fit.beta[3];
  const Vector ax = fit.alpha.tail(2);
  Vector c31 = Vector::Zero(6), c32 = Vector::Zero(4);
  c31[3] = fit.alpha[0] + fit.xbar.dot(ax);
  c32[0] = bdm;
  c32.tail(2) = bdm * fit.xbar;
  const Matrix centered = fit.x.rowwise() - fit.xbar.transpose();
  const Vector expected = (fit.y_fit.regressors * fit.y_fit.gram_inverse * c31).cwiseProduct(fit.y_fit.residuals) +
                          (fit.m_fit.regressors * fit.m_fit.gram_inverse * c32).cwiseProduct(fit.m_fit.residuals) +
                          bdm * centered * ax;
  CHECK((eta.interaction.scores - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("outcome affine equivariance") {
  const Dataset ds = testing::random_dataset(31, 400, 2);
  const double a = -2.5, b = 7.0;
  RawColumns raw;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    raw.y.push_back(a * ds.y()[i] + b);
    raw.d.push_back(ds.d()[i]);
    raw.m.push_back(ds.m()[i]);
  }
  raw.x.resize(2);
  for (int j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < ds.size(); ++i) raw.x[j].push_back(ds.x()(static_cast<Eigen::Index>(i), j));
  raw.column_names = ds.column_names();
  const Dataset shifted = validate_dataset(raw);

  const ConstantFit f0 = fit_constant(ds), f1 = fit_constant(shifted);
  CHECK(f1.beta[0] == doctest::Approx(a * f0.beta[0] + b).epsilon(1e-10));
  const EffectEstimates e0 = effects_constant(f0), e1 = effects_constant(f1);
  for (Effect k : kAllEffects) {
    CHECK(e1[k].point == doctest::Approx(a * e0[k].point).epsilon(1e-10));
    CHECK(e1[k].se == doctest::Approx(std::abs(a) * e0[k].se).epsilon(1e-10));
  }
}

TEST_CASE("zero interaction coefficient: formula structure") {
  SimulationDesign design = SimulationDesign::standard(1);
  design.params.beta_dm = 0.0;
  double last = 1.0;
  for (std::size_t n : {1000u, 100000u}) {
    const auto sample = generate_dataset(design, n, 42);
    const ConstantFit fit = fit_constant(sample.data);
    const EffectEstimates e = effects_constant(fit);
    const double p0 = fit.alpha[0] + fit.xbar.dot(fit.alpha.tail(1));
    CHECK(e.interaction.point == doctest::Approx(fit.beta[3] * p0).epsilon(1e-14));
    CHECK(std::abs(e.interaction.point) <= 4 * e.interaction.se);
    last = std::abs(e.interaction.point);
  }
  CHECK(last < 0.01);
}

TEST_CASE("Design 1 estimates converge to the true effects") {
  const auto sample = generate_dataset(SimulationDesign::standard(1), 400000, 2024);
  const EffectEstimates e = estimate_constant(sample.data);
  const double truth[] = {1.125, 0.5, 0.5, 0.125};
  for (Effect k : kAllEffects) {
    CHECK(std::abs(e[k].point - truth[static_cast<int>(k)]) <= 4 * e[k].se);
    CHECK(e[k].se < 0.02);
  }
  CHECK(e.complier_share == doctest::Approx(0.5).epsilon(0.02));
}
