#include "pathfree/design.hpp"

#include <string>
#include <vector>

#include "pathfree/rng.hpp"

namespace pathfree {

SimulationDesign SimulationDesign::standard(int id) {
  if (id < 1 || id > 4) {
    throw Error(ErrorCode::InvalidArgument, "design id must be 1, 2, 3 or 4 (got " + std::to_string(id) + ")");
  }
  SimulationDesign d;
  d.id = id;
  const bool normal_x = id >= 3;
  d.x_law = normal_x ? CovariateLaw::Normal : CovariateLaw::Uniform01;
  d.x_sd = normal_x ? 2.0 : 1.0;
  d.m_error = normal_x ? MediatorError::StandardNormal : MediatorError::Uniform01;
  d.m_threshold = normal_x ? 0.0 : 1.0;
  d.y_kind = (id % 2 == 0) ? OutcomeKind::Probit : OutcomeKind::Continuous;
  d.params.x_mean = Vector::Constant(1, normal_x ? 0.0 : 0.5);
  return d;
}

namespace {

struct Unit {
  double x, d, m0, m1, y00, y01, y10, y11;
};

class UnitSampler {
 public:
  UnitSampler(const SimulationDesign& design, std::uint64_t seed) : design_(design), rng_(seed) {}

  Unit draw() {
    const auto& p = design_.params;
    const double x = design_.x_law == CovariateLaw::Uniform01 ? rng_.uniform() : design_.x_sd * rng_.normal();
    const double e = design_.m_error == MediatorError::Uniform01 ? rng_.uniform() : rng_.normal();
    const double u = rng_.normal();
    const double d = rng_.bernoulli(design_.p_treat) ? 1.0 : 0.0;

    const double m_index = p.alpha1 + x * p.alpha_x[0] + e;
    Unit unit{};
    unit.x = x;
    unit.d = d;
    unit.m0 = design_.m_threshold < m_index ? 1.0 : 0.0;
    unit.m1 = design_.m_threshold < m_index + p.alpha_d ? 1.0 : 0.0;
    const double base = p.beta1 + x * p.beta_x[0] + u;
    unit.y00 = outcome(base);
    unit.y01 = outcome(base + p.beta_m);
    unit.y10 = outcome(base + p.beta_d);
    unit.y11 = outcome(base + p.beta_d + p.beta_m + p.beta_dm);
    return unit;
  }

 private:
  double outcome(double latent) const {
    if (design_.y_kind == OutcomeKind::Continuous) return latent;
    return 0.0 < latent ? 1.0 : 0.0;
  }

  const SimulationDesign& design_;
  Rng rng_;
};

void check_scalar_covariate(const SimulationDesign& design) {
  const auto& p = design.params;
  if (p.alpha_x.size() != 1 || p.beta_x.size() != 1 || p.x_mean.size() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "simulation designs use exactly one covariate");
  }
}

PotentialTable allocate(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return {Vector(k), Vector(k), Vector(k), Vector(k), Vector(k), Vector(k)};
}

void store(PotentialTable& pt, Eigen::Index i, const Unit& u) {
  pt.m0[i] = u.m0;
  pt.m1[i] = u.m1;
  pt.y00[i] = u.y00;
  pt.y01[i] = u.y01;
  pt.y10[i] = u.y10;
  pt.y11[i] = u.y11;
}

}  // namespace

GeneratedSample generate_dataset(const SimulationDesign& design, std::size_t n, std::uint64_t seed) {
  check_scalar_covariate(design);
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be positive");
  UnitSampler sampler(design, seed);
  PotentialTable pt = allocate(n);
  RawColumns raw;
  raw.y.resize(n);
  raw.d.resize(n);
  raw.m.resize(n);
  raw.x.assign(1, std::vector<double>(n));
  raw.column_names = {kSimulatedCovariate};
  for (std::size_t i = 0; i < n; ++i) {
    const Unit u = sampler.draw();
    store(pt, static_cast<Eigen::Index>(i), u);
    const double m = u.d == 1.0 ? u.m1 : u.m0;
    double y;
    if (u.d == 0.0)
      y = m == 0.0 ? u.y00 : u.y01;
    else
      y = m == 0.0 ? u.y10 : u.y11;
    raw.y[i] = y;
    raw.d[i] = u.d;
    raw.m[i] = m;
    raw.x[0][i] = u.x;
  }
  return {validate_dataset(raw), std::move(pt)};
}

PotentialTable generate_potentials(const SimulationDesign& design, std::size_t n, std::uint64_t seed) {
  check_scalar_covariate(design);
  UnitSampler sampler(design, seed);
  PotentialTable pt = allocate(n);
  for (std::size_t i = 0; i < n; ++i) store(pt, static_cast<Eigen::Index>(i), sampler.draw());
  return pt;
}

}  // namespace pathfree
