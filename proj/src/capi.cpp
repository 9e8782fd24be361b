#define PATHFREE_BUILDING_LIBRARY 1
#include "pathfree/pathfree.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pathfree/constant_effect.hpp"
#include "pathfree/io.hpp"
#include "pathfree/oracle.hpp"
#include "pathfree/simulation.hpp"
#include "pathfree/varying_effect.hpp"

struct pf_dataset {
  pathfree::Dataset data;
};

struct pf_estimates {
  pathfree::EffectEstimates value;
};

struct pf_report {
  pathfree::SimulationReport value;
};

struct pf_true_effects {
  pathfree::TrueEffectsReport value;
};

namespace {

thread_local std::string g_last_error;

pf_status to_status(pathfree::ErrorCode code) {
  using pathfree::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return PF_ERR_INVALID_ARGUMENT;
    case ErrorCode::NonBinaryColumn: return PF_ERR_NON_BINARY_COLUMN;
    case ErrorCode::LengthMismatch: return PF_ERR_LENGTH_MISMATCH;
    case ErrorCode::NonFiniteValue: return PF_ERR_NON_FINITE_VALUE;
    case ErrorCode::DimensionMismatch: return PF_ERR_DIMENSION_MISMATCH;
    case ErrorCode::RankDeficient: return PF_ERR_RANK_DEFICIENT;
    case ErrorCode::EmptyCell: return PF_ERR_EMPTY_CELL;
    case ErrorCode::TreatedCellMissing: return PF_ERR_TREATED_CELL_MISSING;
    case ErrorCode::EmptyStratumCell: return PF_ERR_EMPTY_STRATUM_CELL;
    case ErrorCode::MissingColumn: return PF_ERR_MISSING_COLUMN;
    case ErrorCode::ParseError: return PF_ERR_PARSE;
    case ErrorCode::IoError: return PF_ERR_IO;
    case ErrorCode::AllRepsFailed: return PF_ERR_ALL_REPS_FAILED;
  }
  return PF_ERR_INTERNAL;
}

pf_status fail(pf_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename Fn>
pf_status guarded(Fn&& fn) {
  try {
    fn();
    return PF_OK;
  } catch (const pathfree::Error& e) {
    return fail(to_status(e.code()), std::string(pathfree::to_string(e.code())) + ": " + e.what());
  } catch (const std::bad_alloc&) {
    return fail(PF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PF_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pathfree::OutputFormat to_format(pf_format f) {
  switch (f) {
    case PF_FORMAT_JSON: return pathfree::OutputFormat::Json;
    case PF_FORMAT_TEXT: return pathfree::OutputFormat::Text;
  }
  throw pathfree::Error(pathfree::ErrorCode::InvalidArgument, "unknown output format");
}

std::optional<pathfree::Effect> to_effect(pf_effect e) {
  switch (e) {
    case PF_EFFECT_TOTAL: return pathfree::Effect::Total;
    case PF_EFFECT_DIRECT: return pathfree::Effect::Direct;
    case PF_EFFECT_INDIRECT: return pathfree::Effect::Indirect;
    case PF_EFFECT_INTERACTION: return pathfree::Effect::Interaction;
  }
  return std::nullopt;
}

void require(bool ok, const char* what) {
  if (!ok) throw pathfree::Error(pathfree::ErrorCode::InvalidArgument, what);
}

std::vector<std::string> split_names(const char* list) {
  std::vector<std::string> out;
  if (list == nullptr) return out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

pathfree::RankPolicy rank_policy(int drop_collinear) {
  return drop_collinear ? pathfree::RankPolicy::DropDependent : pathfree::RankPolicy::Reject;
}

}  // namespace

extern "C" {

const char* pf_version(void) { return "1.0.0"; }

const char* pf_last_error(void) { return g_last_error.c_str(); }

const char* pf_status_name(pf_status status) {
  switch (status) {
    case PF_OK: return "OK";
    case PF_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case PF_ERR_NON_BINARY_COLUMN: return "NonBinaryColumn";
    case PF_ERR_LENGTH_MISMATCH: return "LengthMismatch";
    case PF_ERR_NON_FINITE_VALUE: return "NonFiniteValue";
    case PF_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case PF_ERR_RANK_DEFICIENT: return "RankDeficient";
    case PF_ERR_EMPTY_CELL: return "EmptyCell";
    case PF_ERR_TREATED_CELL_MISSING: return "TreatedCellMissing";
    case PF_ERR_EMPTY_STRATUM_CELL: return "EmptyStratumCell";
    case PF_ERR_MISSING_COLUMN: return "MissingColumn";
    case PF_ERR_PARSE: return "ParseError";
    case PF_ERR_IO: return "IoError";
    case PF_ERR_ALL_REPS_FAILED: return "AllRepsFailed";
    case PF_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

void pf_string_free(char* s) { std::free(s); }

pf_status pf_dataset_create(const double* y, const double* d, const double* m, const double* x, size_t n,
                            size_t kx, const char* const* names, pf_dataset** out) {
  return guarded([&] {
    require(out != nullptr, "output handle is null");
    *out = nullptr;
    require(y != nullptr && d != nullptr && m != nullptr, "y, d and m must be non-null");
    require(kx == 0 || (x != nullptr && names != nullptr), "covariates require data and names");
    pathfree::RawColumns raw;
    raw.y.assign(y, y + n);
    raw.d.assign(d, d + n);
    raw.m.assign(m, m + n);
    raw.x.assign(kx, std::vector<double>(n));
    for (size_t j = 0; j < kx; ++j) {
      require(names[j] != nullptr, "covariate name is null");
      raw.column_names.emplace_back(names[j]);
      for (size_t i = 0; i < n; ++i) raw.x[j][i] = x[i * kx + j];
    }
    *out = new pf_dataset{pathfree::validate_dataset(raw)};
  });
}

pf_status pf_dataset_load_csv(const char* path, const char* y, const char* d, const char* m, const char* x_list,
                              pf_dataset** out, size_t* rows_dropped) {
  return guarded([&] {
    require(out != nullptr, "output handle is null");
    *out = nullptr;
    require(path != nullptr && y != nullptr && d != nullptr && m != nullptr, "path, y, d and m are required");
    pathfree::ColumnMapping mapping;
    mapping.y = pathfree::ColumnExpr::parse(y);
    mapping.d = pathfree::ColumnExpr::parse(d);
    mapping.m = pathfree::ColumnExpr::parse(m);
    mapping.x = split_names(x_list);
    auto loaded = pathfree::load_csv(path, mapping);
    if (rows_dropped != nullptr) *rows_dropped = loaded.rows_dropped;
    *out = new pf_dataset{std::move(loaded.data)};
  });
}

void pf_dataset_free(pf_dataset* ds) { delete ds; }

size_t pf_dataset_size(const pf_dataset* ds) { return ds ? ds->data.size() : 0; }

size_t pf_dataset_num_covariates(const pf_dataset* ds) { return ds ? ds->data.num_covariates() : 0; }

size_t pf_dataset_cell_count(const pf_dataset* ds, int d, int m) {
  if (ds == nullptr || (d != 0 && d != 1) || (m != 0 && m != 1)) return 0;
  return ds->data.cell_count({d, m});
}

pf_status pf_estimate_constant(const pf_dataset* ds, pf_estimates** out) {
  return guarded([&] {
    require(ds != nullptr && out != nullptr, "null handle");
    *out = nullptr;
    *out = new pf_estimates{pathfree::estimate_constant(ds->data)};
  });
}

pf_status pf_estimate_varying(const pf_dataset* ds, const char* basis, int drop_collinear, pf_estimates** out) {
  return guarded([&] {
    require(ds != nullptr && out != nullptr, "null handle");
    *out = nullptr;
    const auto spec = (basis == nullptr || *basis == '\0') ? pathfree::BasisSpec::linear(ds->data.column_names())
                                                           : pathfree::BasisSpec::parse(basis);
    *out = new pf_estimates{pathfree::estimate_varying(ds->data, spec, {rank_policy(drop_collinear)})};
  });
}

pf_status pf_estimate_label(const pf_dataset* ds, const char* label, int drop_collinear, pf_estimates** out) {
  return guarded([&] {
    require(ds != nullptr && out != nullptr && label != nullptr, "null handle");
    *out = nullptr;
    const auto spec = pathfree::make_estimator(label, ds->data.column_names());
    *out = new pf_estimates{pathfree::run_estimator(spec, ds->data, rank_policy(drop_collinear))};
  });
}

void pf_estimates_free(pf_estimates* est) { delete est; }

pf_status pf_estimates_get(const pf_estimates* est, pf_effect effect, double* point, double* se, double* t) {
  return guarded([&] {
    require(est != nullptr, "null handle");
    const auto e = to_effect(effect);
    require(e.has_value(), "unknown effect");
    const auto& v = est->value[*e];
    if (point) *point = v.point;
    if (se) *se = v.se;
    if (t) *t = v.t;
  });
}

double pf_estimates_complier_share(const pf_estimates* est) { return est ? est->value.complier_share : 0.0; }

size_t pf_estimates_n(const pf_estimates* est) { return est ? est->value.n : 0; }

pf_status pf_estimates_render(const pf_estimates* est, pf_format format, char** out) {
  return guarded([&] {
    require(est != nullptr && out != nullptr, "null handle");
    *out = copy_string(pathfree::render(est->value, to_format(format)));
  });
}

pf_status pf_true_effects_compute(int design, pf_true_method method, uint64_t draws, uint64_t seed,
                                  unsigned threads, pf_true_effects** out) {
  return guarded([&] {
    require(out != nullptr, "output handle is null");
    *out = nullptr;
    const auto sim = pathfree::SimulationDesign::standard(design);
    pathfree::TrueEffectsReport r;
    r.design_id = design;
    if (method == PF_TRUE_ANALYTIC) {
      r.method = "analytic";
      r.effects = pathfree::true_effects_analytic(sim);
    } else if (method == PF_TRUE_MONTECARLO) {
      const auto mc = pathfree::true_effects_montecarlo(sim, draws, seed, threads == 0 ? 1 : threads);
      r.method = "mc";
      r.effects = mc.effects;
      r.mc_se = mc.mc_se;
      r.draws = mc.draws;
      r.seed = seed;
    } else {
      require(false, "unknown true-effect method");
    }
    *out = new pf_true_effects{std::move(r)};
  });
}

void pf_true_effects_free(pf_true_effects* te) { delete te; }

pf_status pf_true_effects_get(const pf_true_effects* te, pf_effect effect, double* value, double* mc_se) {
  return guarded([&] {
    require(te != nullptr, "null handle");
    const auto e = to_effect(effect);
    require(e.has_value(), "unknown effect");
    if (value) *value = te->value.effects[*e];
    if (mc_se) *mc_se = te->value.mc_se ? (*te->value.mc_se)[*e] : 0.0;
  });
}

pf_status pf_true_effects_render(const pf_true_effects* te, pf_format format, char** out) {
  return guarded([&] {
    require(te != nullptr && out != nullptr, "null handle");
    *out = copy_string(pathfree::render(te->value, to_format(format)));
  });
}

void pf_study_config_init(pf_study_config* config) {
  if (config == nullptr) return;
  config->design = 1;
  config->n = 1000;
  config->reps = 1000;
  config->estimators = "c";
  config->seed = 0;
  config->threads = 1;
  config->true_draws = 0;
  config->drop_collinear = 0;
}

pf_status pf_simulate(const pf_study_config* config, pf_report** out) {
  return guarded([&] {
    require(config != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    require(config->estimators != nullptr, "estimator roster is null");
    pathfree::StudyConfig cfg;
    cfg.design = pathfree::SimulationDesign::standard(config->design);
    cfg.n = config->n;
    cfg.reps = config->reps;
    cfg.roster = pathfree::parse_roster(config->estimators, {pathfree::kSimulatedCovariate});
    cfg.seed = config->seed;
    cfg.threads = config->threads == 0 ? 1 : config->threads;
    if (config->true_draws != 0) cfg.true_draws = config->true_draws;
    cfg.rank_policy = rank_policy(config->drop_collinear);
    *out = new pf_report{pathfree::run_study(cfg)};
  });
}

void pf_report_free(pf_report* report) { delete report; }

pf_status pf_report_render(const pf_report* report, pf_format format, char** out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "null handle");
    *out = copy_string(pathfree::render(report->value, to_format(format)));
  });
}

pf_status pf_report_metrics(const pf_report* report, const char* label, pf_effect effect, double* abs_bias,
                            double* sd, double* rmse, double* asy_sd) {
  return guarded([&] {
    require(report != nullptr && label != nullptr, "null argument");
    const auto e = to_effect(effect);
    require(e.has_value(), "unknown effect");
    const auto& m = report->value.estimator(label)[*e];
    if (abs_bias) *abs_bias = m.abs_bias_n();
    if (sd) *sd = m.sd_n();
    if (rmse) *rmse = m.rmse_n();
    if (asy_sd) *asy_sd = m.asy_sd_n();
  });
}

pf_status pf_write_file(const char* path, const char* content) {
  return guarded([&] {
    require(path != nullptr && content != nullptr, "null argument");
    pathfree::write_output(path, content);
  });
}

}  // extern "C"
