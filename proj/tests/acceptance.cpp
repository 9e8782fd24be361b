// Acceptance suite: prints one PASS/FAIL/SKIP line per criterion, with
// indented detail lines above it. Exit status is non-zero if any criterion
// fails.
//
// Criterion 7 reads a Card-style CSV from $PATHFREE_CARD_CSV. The default
// column binding is the common public layout (lwage, black, educ, age,
// reg661..reg669, smsa66, smsa, south); override it with
// $PATHFREE_CARD_COLUMNS="y|d|m|x1,x2,...".

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pathfree/constant_effect.hpp"
#include "pathfree/design.hpp"
#include "pathfree/io.hpp"
#include "pathfree/oracle.hpp"
#include "pathfree/rng.hpp"
#include "pathfree/simulation.hpp"
#include "pathfree/varying_effect.hpp"
#include "test_support.hpp"

using namespace pathfree;

namespace {

// Pinned tolerances and sizes.
constexpr double kMcSigmas = 3.0;
constexpr std::uint64_t kTrueDraws = 10'000'000;
constexpr double kDesign3Tol = 0.005;
constexpr double kRuntimeTrueEffects = 120.0;
constexpr double kRuntimeTable1 = 300.0;
constexpr double kTable1Bias = 0.02;
constexpr double kTable1SdBand = 0.20;
constexpr double kAsyRatioLo = 0.85, kAsyRatioHi = 1.15;
constexpr double kConstIntBiasMin = 0.15, kV1IntBiasMin = 0.8, kV3IntBiasMax = 0.15;
constexpr double kOracleTol = 1e-8;
constexpr double kNoCovTol = 1e-12;
constexpr double kAdditivityTol = 1e-12;
constexpr double kBootstrapBand = 0.15;
constexpr int kBootstrapResamples = 1000;
constexpr double kCardPointTol = 0.0005;  // agreement to three decimals
constexpr double kCardTTol = 0.5;
constexpr std::uint64_t kSeed = 1;
constexpr std::size_t kStudyN = 1000, kStudyReps = 2000;

const char* kEffectShort[] = {"tot", "dir", "ind", "int"};

struct Outcome {
  enum Status { Pass, Fail, Skip } status = Pass;
  std::vector<std::string> details;

  void note(const std::string& s) { details.push_back(s); }
  void require(bool ok, const std::string& s) {
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + s);
    if (!ok) status = Fail;
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

unsigned many_threads() { return std::max(4u, std::thread::hardware_concurrency()); }

// ---- criterion 1 -------------------------------------------------------

struct TrueRun {
  std::string bytes;  // rendered reports, for criterion 8
};

TrueRun true_effects_all(unsigned threads, Outcome* out) {
  const double target[5][4] = {{},
                              {1.125, 0.500, 0.500, 0.125},
                              {0.395, 0.184, 0.166, 0.045},
                              {0.888, 0.500, 0.138, 0.250},
                              {0.169, 0.089, 0.024, 0.055}};
  TrueRun run;
  for (int id = 1; id <= 4; ++id) {
    const auto design = SimulationDesign::standard(id);
    const auto t0 = std::chrono::steady_clock::now();
    TrueEffectsReport rep;
    rep.design_id = id;
    if (id == 2 || id == 4) {
      const auto mc = true_effects_montecarlo(design, kTrueDraws, kSeed, threads);
      rep.method = "mc";
      rep.effects = mc.effects;
      rep.mc_se = mc.mc_se;
      rep.draws = mc.draws;
      rep.seed = kSeed;
    } else {
      rep.method = "analytic";
      rep.effects = true_effects_analytic(design);
    }
    const double secs = seconds_since(t0);
    run.bytes += render(rep, OutputFormat::Json);
    if (!out) continue;

    for (Effect k : kAllEffects) {
      const int i = static_cast<int>(k);
      const double v = rep.effects[k], p = target[id][i];
      if (id == 1) {
        out->require(v == p, fmt("design 1 %s analytic %.6f, target %.3f (exact)", kEffectShort[i], v, p));
      } else if (id == 3) {
        out->require(std::abs(v - p) <= kDesign3Tol,
                     fmt("design 3 %s analytic %.6f, target %.3f, |diff| %.6f <= %.3f", kEffectShort[i], v, p,
                         std::abs(v - p), kDesign3Tol));
      } else {
        const double se = (*rep.mc_se)[k];
        const double z = std::abs(v - p) / se;
        out->require(z <= kMcSigmas, fmt("design %d %s mc %.6f (se %.6f), target %.3f, |diff|/se %.2f <= %.0f", id,
                                         kEffectShort[i], v, se, p, z, kMcSigmas));
      }
    }
    out->require(secs <= kRuntimeTrueEffects, fmt("design %d runtime %.2fs <= %.0fs", id, secs, kRuntimeTrueEffects));
  }
  return run;
}

// ---- criteria 2 and 3 --------------------------------------------------

SimulationReport study(int design, const std::string& roster, unsigned threads) {
  StudyConfig cfg;
  cfg.design = SimulationDesign::standard(design);
  cfg.n = kStudyN;
  cfg.reps = kStudyReps;
  cfg.seed = kSeed;
  cfg.threads = threads;
  cfg.true_draws = kTrueDraws;
  cfg.roster = parse_roster(roster, {kSimulatedCovariate});
  return run_study(cfg);
}

std::string scaled_reproduction(unsigned threads, Outcome* out) {
  const auto t0 = std::chrono::steady_clock::now();
  const SimulationReport r = study(1, "c", threads);
  const double secs = seconds_since(t0);
  if (out) {
    const double target_sd[] = {0.06, 0.21, 0.12, 0.30};
    const EstimatorSummary& c = r.estimator("c");
    out->require(c.failed_reps == 0, fmt("failed repetitions: %zu", c.failed_reps));
    for (Effect k : kAllEffects) {
      const int i = static_cast<int>(k);
      const EffectMetrics& m = c[k];
      out->require(m.abs_bias_n() <= kTable1Bias, fmt("%s |bias| %.4f <= %.2f", kEffectShort[i], m.abs_bias_n(), kTable1Bias));
      const double rel = m.sd_n() / target_sd[i] - 1.0;
      out->require(std::abs(rel) <= kTable1SdBand,
                   fmt("%s Sd %.4f vs target %.2f (%+.1f%%, band +-%.0f%%)", kEffectShort[i], m.sd_n(), target_sd[i],
                       100 * rel, 100 * kTable1SdBand));
      const double ratio = m.mean_asy_sd / m.sd;
      out->require(ratio >= kAsyRatioLo && ratio <= kAsyRatioHi,
                   fmt("%s AsySd/Sd %.3f in [%.2f, %.2f]", kEffectShort[i], ratio, kAsyRatioLo, kAsyRatioHi));
    }
    out->require(secs <= kRuntimeTable1, fmt("runtime %.1fs <= %.0fs", secs, kRuntimeTable1));
  }
  return render(r, OutputFormat::Json);
}

std::string bias_signature(unsigned threads, Outcome* out) {
  const SimulationReport r = study(4, "c,v1,v3", threads);
  if (out) {
    const double c = r.estimator("c")[Effect::Interaction].abs_bias_n();
    const double v1 = r.estimator("v1")[Effect::Interaction].abs_bias_n();
    const double v3 = r.estimator("v3")[Effect::Interaction].abs_bias_n();
    for (const auto& s : r.estimators)
      out->require(s.failed_reps == 0, fmt("%s failed repetitions: %zu", s.label.c_str(), s.failed_reps));
    out->require(c >= kConstIntBiasMin, fmt("OLS_c interaction |bias| %.3f >= %.2f (target 0.23)", c, kConstIntBiasMin));
    out->require(v1 >= kV1IntBiasMin, fmt("OLS_v1 interaction |bias| %.3f >= %.2f (target 1.07)", v1, kV1IntBiasMin));
    out->require(v3 <= kV3IntBiasMax, fmt("OLS_v3 interaction |bias| %.3f <= %.2f (target 0.07)", v3, kV3IntBiasMax));
  }
  return render(r, OutputFormat::Json);
}

// ---- criterion 4 -------------------------------------------------------

Dataset binarized(const Dataset& ds, double cut) {
  RawColumns raw;
  raw.y.assign(ds.y().begin(), ds.y().end());
  raw.d.assign(ds.d().begin(), ds.d().end());
  raw.m.assign(ds.m().begin(), ds.m().end());
  std::vector<double> x;
  for (double v : ds.x().col(0)) x.push_back(v > cut ? 1.0 : 0.0);
  raw.x = {x};
  raw.column_names = {kSimulatedCovariate};
  return validate_dataset(raw);
}

Dataset without_covariates(const Dataset& ds) {
  RawColumns raw;
  raw.y.assign(ds.y().begin(), ds.y().end());
  raw.d.assign(ds.d().begin(), ds.d().end());
  raw.m.assign(ds.m().begin(), ds.m().end());
  return validate_dataset(raw);
}

// Binary covariates a, b with every stratum cell seeded.
Dataset random_binary(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> normal;
  const int n = 32 + static_cast<int>(gen() % 2000);
  std::vector<double> y, d, m, a, b;
  for (int i = 0; i < n; ++i) {
    const bool fixed = i < 16;
    d.push_back(fixed ? (i & 1) : coin(gen));
    m.push_back(fixed ? (i >> 1) & 1 : coin(gen));
    a.push_back(fixed ? (i >> 2) & 1 : coin(gen));
    b.push_back(fixed ? (i >> 3) & 1 : coin(gen));
    y.push_back(d.back() * (0.3 + a.back()) - m.back() * b.back() + 0.8 * d.back() * m.back() * a.back() +
                2 * normal(gen));
  }
  return testing::make_data(y, d, m, {a, b}, {"a", "b"});
}

double diff_in_means(const Dataset& ds) {
  double s1 = 0, s0 = 0, n1 = 0, n0 = 0;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(ds.size()); ++i) {
    if (ds.d()[i] == 1.0) {
      s1 += ds.y()[i];
      ++n1;
    } else {
      s0 += ds.y()[i];
      ++n0;
    }
  }
  return s1 / n1 - s0 / n0;
}

void oracle_equivalence(Outcome& out) {
  double worst = 0;
  int cases = 0;
  auto compare = [&](const Dataset& ds, const BasisSpec& spec) {
    const EffectEstimates v = estimate_varying(ds, spec);
    const EffectVector o = effects_from_cells(ds);
    for (Effect k : kAllEffects) worst = std::max(worst, std::abs(v[k].point - o[k]));
    ++cases;
  };
  for (std::uint64_t s = 0; s < 200; ++s) compare(random_binary(1000 + s), BasisSpec::parse("1, a, b, a*b"));
  for (int id = 1; id <= 4; ++id) {
    for (std::uint64_t s = 0; s < 25; ++s) {
      const auto g = generate_dataset(SimulationDesign::standard(id), 2000, mix_seed(kSeed, 100 * id + s));
      compare(binarized(g.data, id <= 2 ? 0.5 : 0.0), BasisSpec::parse("1, x"));
    }
  }
  out.require(worst <= kOracleTol, fmt("saturated basis vs cell means: %d datasets, max |diff| %.2e <= %.0e", cases,
                                       worst, kOracleTol));

  double worst_rel = 0;
  cases = 0;
  for (int id = 1; id <= 4; ++id) {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto g = generate_dataset(SimulationDesign::standard(id), 50 + 37 * s, mix_seed(kSeed, 500 + 100 * id + s));
      const Dataset ds = without_covariates(g.data);
      if (!ds.empty_cells().empty()) continue;
      const double diff = diff_in_means(ds);
      const double total = estimate_constant(ds).total.point;
      worst_rel = std::max(worst_rel, std::abs(total - diff) / std::max(1.0, std::abs(diff)));
      ++cases;
    }
  }
  out.require(worst_rel <= kNoCovTol, fmt("no covariates, total vs difference in means: %d datasets, max rel diff %.2e <= %.0e",
                                          cases, worst_rel, kNoCovTol));
}

// ---- criterion 5 -------------------------------------------------------

void decomposition_identities(Outcome& out) {
  double worst = 0;
  int cases = 0;
  auto check = [&](const EffectEstimates& e) {
    const double parts = e.direct.point + e.indirect.point + e.interaction.point;
    worst = std::max(worst, std::abs(e.total.point - parts) / std::max(1.0, std::abs(parts)));
    ++cases;
  };
  const BasisSpec specs[] = {BasisSpec::parse("1"), BasisSpec::parse("x1, x2"),
                             BasisSpec::parse("x1, x2, x1^2, phi(x2), x1*x2"),
                             BasisSpec::parse("all: x1; xm: x1, x2, phi(x1); x2: x2^2")};
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Dataset ds = testing::random_dataset(7000 + s, 60 + 13 * s, 2);
    check(estimate_constant(ds));
    for (const auto& spec : specs) check(estimate_varying(ds, spec));
  }
  out.require(worst <= kAdditivityTol,
              fmt("additivity over %d fuzzed fits (both estimators): max rel gap %.2e <= %.0e", cases, worst, kAdditivityTol));

  std::mt19937_64 gen(kSeed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst_path = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    LinearParams p;
    p.alpha1 = u(gen);
    p.alpha_d = u(gen);
    p.beta1 = u(gen);
    p.beta_d = u(gen);
    p.beta_m = u(gen);
    p.beta_dm = u(gen);
    const int k = 1 + trial % 5;
    p.alpha_x = Vector(k);
    p.beta_x = Vector(k);
    p.x_mean = Vector(k);
    for (int j = 0; j < k; ++j) {
      p.alpha_x[j] = u(gen);
      p.beta_x[j] = u(gen);
      p.x_mean[j] = u(gen);
    }
    const NaturalEffects n = natural_effects_linear(p);
    const double total = true_effects_linear(p).total;
    const double scale = std::max(1.0, std::abs(total));
    worst_path = std::max({worst_path, std::abs(n.mu1 + n.delta0 - total) / scale,
                           std::abs(n.delta1 + n.mu0 - total) / scale});
  }
  out.require(worst_path <= kAdditivityTol,
              fmt("path identity mu1+delta0 = delta1+mu0 = total over 1000 parameter draws: max rel gap %.2e", worst_path));

  // The product identity holds given X: the average conditional covariance
  // of (Y11 - Y10) and (M1 - M0) is zero. Conditional means come from the
  // test-side design laws.
  for (int id = 1; id <= 4; ++id) {
    const auto sample = generate_dataset(SimulationDesign::standard(id), 1'000'000, mix_seed(kSeed, 9000 + id));
    const PotentialTable& pt = sample.potentials;
    const testing::DesignLaw law{id};
    const auto n = static_cast<Eigen::Index>(pt.size());
    Vector gap(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = sample.data.x()(i, 0);
      gap[i] = (pt.y11[i] - pt.y10[i]) * (pt.m1[i] - pt.m0[i]) -
               (law.mu(1, 1, x) - law.mu(1, 0, x)) * (law.p_m(1, x) - law.p_m(0, x));
    }
    const double mean = gap.mean();
    const double se = std::sqrt((gap.array() - mean).square().sum() / (n - 1.0) / static_cast<double>(n));
    out.require(std::abs(mean) <= kMcSigmas * se,
                fmt("design %d conditional factorization gap %.2e, MC se %.2e (|z| %.2f <= %.0f)", id, mean, se,
                    std::abs(mean) / se, kMcSigmas));
  }
}

// ---- criterion 6 -------------------------------------------------------

Dataset resample(const Dataset& ds, std::mt19937_64& gen) {
  const auto n = ds.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  RawColumns raw;
  raw.x.resize(ds.num_covariates());
  raw.column_names = ds.column_names();
  for (std::size_t r = 0; r < n; ++r) {
    const auto i = static_cast<Eigen::Index>(pick(gen));
    raw.y.push_back(ds.y()[i]);
    raw.d.push_back(ds.d()[i]);
    raw.m.push_back(ds.m()[i]);
    for (std::size_t j = 0; j < raw.x.size(); ++j) raw.x[j].push_back(ds.x()(i, static_cast<Eigen::Index>(j)));
  }
  return validate_dataset(raw);
}

void bootstrap_validity(Outcome& out) {
  const auto sample = generate_dataset(SimulationDesign::standard(1), 1000, kSeed);
  const EffectEstimates est = estimate_constant(sample.data);
  std::mt19937_64 gen(kSeed);
  std::vector<std::array<double, 4>> draws;
  for (int b = 0; b < kBootstrapResamples; ++b) {
    const EffectEstimates e = estimate_constant(resample(sample.data, gen));
    draws.push_back({e.total.point, e.direct.point, e.indirect.point, e.interaction.point});
  }
  for (Effect k : kAllEffects) {
    const int i = static_cast<int>(k);
    double mean = 0;
    for (const auto& d : draws) mean += d[i];
    mean /= kBootstrapResamples;
    double ss = 0;
    for (const auto& d : draws) ss += (d[i] - mean) * (d[i] - mean);
    const double boot = std::sqrt(ss / (kBootstrapResamples - 1));
    const double rel = est[k].se / boot - 1.0;
    out.require(std::abs(rel) <= kBootstrapBand, fmt("%s asymptotic SE %.5f vs bootstrap %.5f (%+.1f%%, band +-%.0f%%)",
                                                     kEffectShort[i], est[k].se, boot, 100 * rel, 100 * kBootstrapBand));
  }
}

// ---- criterion 7 -------------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

void card_reproduction(Outcome& out) {
  const char* path = std::getenv("PATHFREE_CARD_CSV");
  if (!path || !*path) {
    out.status = Outcome::Skip;
    out.note("PATHFREE_CARD_CSV not set; Card data is not bundled");
    return;
  }
  ColumnMapping map;
  map.y = ColumnExpr::parse("lwage");
  map.d = ColumnExpr::parse("black");
  map.m = ColumnExpr::parse("threshold(educ, 12)");
  map.x = {"age", "reg661", "reg662", "reg663", "reg664", "reg665", "reg666", "reg667", "reg669", "smsa66", "smsa", "south"};
  if (const char* cols = std::getenv("PATHFREE_CARD_COLUMNS"); cols && *cols) {
    const auto parts = split(cols, '|');
    if (parts.size() != 4) {
      out.require(false, "PATHFREE_CARD_COLUMNS must be \"y|d|m|x1,x2,...\"");
      return;
    }
    map.y = ColumnExpr::parse(parts[0]);
    map.d = ColumnExpr::parse(parts[1]);
    map.m = ColumnExpr::parse(parts[2]);
    map.x = split(parts[3], ',');
  }
  const LoadedCsv csv = load_csv(path, map);
  out.note(fmt("loaded N=%zu (dropped %zu rows with missing values)", csv.data.size(), csv.rows_dropped));
  const EffectEstimates e = estimate_constant(csv.data);
  const double point[] = {-0.243, -0.272, -0.054, 0.083};
  const double tval[] = {-13, -12, -6.3, 4.4};
  for (Effect k : kAllEffects) {
    const int i = static_cast<int>(k);
    out.require(std::abs(e[k].point - point[i]) <= kCardPointTol,
                fmt("%s %.4f vs target %.3f", kEffectShort[i], e[k].point, point[i]));
    out.require(std::abs(e[k].t - tval[i]) <= kCardTTol, fmt("%s t %.2f vs target %.1f (+-%.1f)", kEffectShort[i], e[k].t,
                                                             tval[i], kCardTTol));
  }
}

// ---- driver ------------------------------------------------------------

Outcome guarded(const std::function<void(Outcome&)>& body) {
  Outcome out;
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  return out;
}

}  // namespace

int main() {
  const char* titles[] = {"",
                          "true-effect reproduction",
                          "scaled reproduction (Design 1, OLS_c)",
                          "bias signature (Design 4)",
                          "oracle equivalence",
                          "decomposition identities",
                          "variance validity (bootstrap)",
                          "empirical reproduction (Card data)",
                          "determinism across runs and thread counts"};
  std::string bytes1, bytes2, bytes3;
  std::vector<Outcome> results(9);
  results[1] = guarded([&](Outcome& o) { bytes1 = true_effects_all(1, &o).bytes; });
  results[2] = guarded([&](Outcome& o) { bytes2 = scaled_reproduction(1, &o); });
  results[3] = guarded([&](Outcome& o) { bytes3 = bias_signature(1, &o); });
  results[4] = guarded(oracle_equivalence);
  results[5] = guarded(decomposition_identities);
  results[6] = guarded(bootstrap_validity);
  results[7] = guarded(card_reproduction);
  results[8] = guarded([&](Outcome& o) {
    const unsigned t = many_threads();
    o.require(true_effects_all(1, nullptr).bytes == bytes1, "criterion 1 reports: second run identical");
    o.require(true_effects_all(t, nullptr).bytes == bytes1, fmt("criterion 1 reports: %u threads identical", t));
    o.require(scaled_reproduction(1, nullptr) == bytes2, "criterion 2 report: second run identical");
    o.require(scaled_reproduction(t, nullptr) == bytes2, fmt("criterion 2 report: %u threads identical", t));
    o.require(bias_signature(1, nullptr) == bytes3, "criterion 3 report: second run identical");
    o.require(bias_signature(t, nullptr) == bytes3, fmt("criterion 3 report: %u threads identical", t));
  });

  int failures = 0;
  for (int c = 1; c <= 8; ++c) {
    const Outcome& o = results[c];
    for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
    const char* status = o.status == Outcome::Pass ? "PASS" : o.status == Outcome::Fail ? "FAIL" : "SKIP";
    std::printf("%s criterion %d: %s\n", status, c, titles[c]);
    if (o.status == Outcome::Fail) ++failures;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
