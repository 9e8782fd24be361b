#include "pathfree/oracle.hpp"

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "parallel.hpp"
#include "pathfree/basis.hpp"
#include "pathfree/ols.hpp"
#include "pathfree/rng.hpp"

namespace pathfree {

EffectVector true_effects_linear(const LinearParams& p) {
  if (p.alpha_x.size() != p.beta_x.size() || p.alpha_x.size() != p.x_mean.size()) {
    throw Error(ErrorCode::DimensionMismatch, "alpha_x, beta_x and x_mean must have equal length");
  }
  const double p_m0 = p.alpha1 + p.x_mean.dot(p.alpha_x);
  return EffectVector::from_parts(p.beta_d, (p.beta_m + p.beta_dm) * p.alpha_d, p.beta_dm * p_m0);
}

NaturalEffects natural_effects_linear(const LinearParams& p) {
  if (p.alpha_x.size() != p.x_mean.size()) {
    throw Error(ErrorCode::DimensionMismatch, "alpha_x and x_mean must have equal length");
  }
  const double base = p.alpha1 + p.x_mean.dot(p.alpha_x);
  NaturalEffects out;
  out.delta0 = p.beta_d + p.beta_dm * base;
  out.delta1 = p.beta_d + p.beta_dm * (base + p.alpha_d);
  out.mu0 = p.beta_m * p.alpha_d;
  out.mu1 = (p.beta_m + p.beta_dm) * p.alpha_d;
  return out;
}

EffectVector true_effects_analytic(const SimulationDesign& design) {
  const auto& p = design.params;
  if (design.y_kind != OutcomeKind::Continuous) {
    throw Error(ErrorCode::InvalidArgument,
                "no closed form for design " + std::to_string(design.id) + "; use the Monte-Carlo method");
  }
  if (design.m_error == MediatorError::Uniform01 && design.x_law == CovariateLaw::Uniform01 &&
      design.m_threshold == 1.0) {
    return true_effects_linear(p);
  }
  if (design.m_error == MediatorError::StandardNormal && design.x_law == CovariateLaw::Normal &&
      p.alpha_x.size() == 1) {
    // E Phi(a + bX) = Phi(a / sqrt(1 + b^2 s^2)) for X ~ N(0, s^2).
    const double b = p.alpha_x[0] * design.x_sd;
    const double scale = std::sqrt(1.0 + b * b);
    const double shift = p.alpha1 - design.m_threshold;
    const double p0 = normal_cdf(shift / scale);
    const double p1 = normal_cdf((shift + p.alpha_d) / scale);
    return EffectVector::from_parts(p.beta_d, (p.beta_m + p.beta_dm) * (p1 - p0), p.beta_dm * p0);
  }
  throw Error(ErrorCode::InvalidArgument, "no closed form for this design");
}

namespace {

struct Stratum {
  std::array<std::size_t, 4> count{};
  std::array<double, 4> y_sum{};
  std::size_t size = 0;
};

std::string describe_row(const std::vector<double>& row) {
  std::string out = "(";
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j > 0) out += ", ";
    out += std::to_string(row[j]);
  }
  return out + ")";
}

}  // namespace

EffectVector effects_from_cells(const Dataset& data, StratumPolicy policy) {
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto kx = static_cast<Eigen::Index>(data.num_covariates());

  std::map<std::vector<double>, Stratum> strata;
  std::vector<double> row(static_cast<std::size_t>(kx));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < kx; ++j) row[static_cast<std::size_t>(j)] = data.x()(i, j);
    auto& s = strata[row];
    const auto cell = static_cast<std::size_t>(2 * data.d()[i] + data.m()[i]);
    ++s.count[cell];
    s.y_sum[cell] += data.y()[i];
    ++s.size;
  }

  double w_total = 0.0, acc_dir = 0.0, acc_ind = 0.0, acc_int = 0.0;
  for (const auto& [key, s] : strata) {
    bool complete = true;
    for (int c = 0; c < 4 && complete; ++c) {
      if (s.count[static_cast<std::size_t>(c)] == 0) {
        if (policy == StratumPolicy::Reject) {
          const std::string dm = std::to_string(c / 2) + std::to_string(c % 2);
          throw Error(ErrorCode::EmptyStratumCell,
                      "stratum X=" + describe_row(key) + " has no observations with (D,M)=" + dm,
                      {describe_row(key), dm});
        }
        complete = false;
      }
    }
    if (!complete) continue;

    auto mean = [&](int c) { return s.y_sum[c] / static_cast<double>(s.count[c]); };
    const double n0 = static_cast<double>(s.count[0] + s.count[1]);
    const double n1 = static_cast<double>(s.count[2] + s.count[3]);
    const double p0 = static_cast<double>(s.count[1]) / n0;
    const double p1 = static_cast<double>(s.count[3]) / n1;
    const double ey1 = (s.y_sum[2] + s.y_sum[3]) / n1;
    const double ey0 = (s.y_sum[0] + s.y_sum[1]) / n0;

    const double dir = mean(2) - mean(0);
    const double ind = (mean(3) - mean(2)) * (p1 - p0);
    const double tot = ey1 - ey0;
    const double w = static_cast<double>(s.size);
    w_total += w;
    acc_dir += w * dir;
    acc_ind += w * ind;
    acc_int += w * (tot - dir - ind);
  }
  if (w_total == 0.0) {
    throw Error(ErrorCode::EmptyStratumCell, "no stratum contains all four (D,M) cells");
  }
  return EffectVector::from_parts(acc_dir / w_total, acc_ind / w_total, acc_int / w_total);
}

namespace {

struct UnitTerms {
  Vector total, direct, indirect, interaction;
};

UnitTerms unit_terms(const PotentialTable& pt) {
  for (Eigen::Index i = 0; i < pt.m0.size(); ++i) {
    const bool binary = (pt.m0[i] == 0.0 || pt.m0[i] == 1.0) && (pt.m1[i] == 0.0 || pt.m1[i] == 1.0);
    if (!binary) throw Error(ErrorCode::NonBinaryColumn, "potential mediators must be 0 or 1");
  }
  UnitTerms t;
  const Vector y1_minus_y10 = pt.y11 - pt.y10;
  t.direct = pt.y10 - pt.y00;
  t.indirect = y1_minus_y10.cwiseProduct(pt.m1 - pt.m0);
  t.interaction = (y1_minus_y10 - pt.y01 + pt.y00).cwiseProduct(pt.m0);
  // Y_d = Y^{d, M^d}
  const Vector y1 = pt.y10 + pt.m1.cwiseProduct(pt.y11 - pt.y10);
  const Vector y0 = pt.y00 + pt.m0.cwiseProduct(pt.y01 - pt.y00);
  t.total = y1 - y0;
  return t;
}

struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  static Moments of(const Vector& v) {
    Moments out;
    out.count = static_cast<double>(v.size());
    if (v.size() == 0) return out;
    out.mean = compensated_mean(v);
    out.m2 = compensated_sum((v.array() - out.mean).square().matrix());
    return out;
  }

  // Chan et al. pairwise update.
  void merge(const Moments& o) {
    if (o.count == 0.0) return;
    const double n = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * o.count / n;
    m2 += o.m2 + delta * delta * count * o.count / n;
    count = n;
  }

  double standard_error() const { return count > 1.0 ? std::sqrt(m2 / count) / std::sqrt(count) : 0.0; }
};

}  // namespace

EffectVector population_effects_from_potentials(const PotentialTable& pt) {
  if (pt.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty potential table");
  const UnitTerms t = unit_terms(pt);
  const EffectVector out = EffectVector::from_parts(
      compensated_mean(t.direct), compensated_mean(t.indirect), compensated_mean(t.interaction));
  const double direct_total = compensated_mean(t.total);
  const double scale = std::max({1.0, std::abs(direct_total), std::abs(out.total)});
  if (std::abs(direct_total - out.total) > 1e-12 * scale) {
    throw Error(ErrorCode::InvalidArgument, "potential table violates the three-effect identity");
  }
  return out;
}

MonteCarloEffects true_effects_montecarlo(const SimulationDesign& design, std::uint64_t draws,
                                          std::uint64_t seed, unsigned threads) {
  if (draws < kMinMonteCarloDraws) {
    throw Error(ErrorCode::InvalidArgument, "Monte-Carlo oracle needs at least 10000 draws");
  }
  const std::size_t chunks = static_cast<std::size_t>((draws + kMonteCarloChunk - 1) / kMonteCarloChunk);
  std::vector<std::array<Moments, 4>> parts(chunks);
  detail::parallel_for(chunks, threads, [&](std::size_t c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * kMonteCarloChunk;
    const std::size_t len = static_cast<std::size_t>(std::min<std::uint64_t>(kMonteCarloChunk, draws - begin));
    const UnitTerms t = unit_terms(generate_potentials(design, len, mix_seed(seed, c)));
    parts[c] = {Moments::of(t.total), Moments::of(t.direct), Moments::of(t.indirect),
                Moments::of(t.interaction)};
  });

  std::array<Moments, 4> acc{};
  for (const auto& p : parts)
    for (std::size_t k = 0; k < 4; ++k) acc[k].merge(p[k]);

  MonteCarloEffects out;
  out.draws = draws;
  out.effects = EffectVector::from_parts(acc[1].mean, acc[2].mean, acc[3].mean);
  out.mc_se = {acc[0].standard_error(), acc[1].standard_error(), acc[2].standard_error(),
               acc[3].standard_error()};
  return out;
}

}  // namespace pathfree
