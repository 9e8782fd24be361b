#include "pathfree/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pathfree {

using ojson = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, "unterminated quote on line " + std::to_string(line_no),
                          {std::to_string(line_no)});
  out.push_back(std::move(field));
  return out;
}

bool is_missing(std::string_view field) {
  field = trim(field);
  return field.empty() || field == "NA";
}

}  // namespace

ColumnExpr ColumnExpr::parse(std::string_view text) {
  const std::string_view s = trim(text);
  auto fail = [&]() -> ColumnExpr {
    throw Error(ErrorCode::ParseError, "cannot parse column expression '" + std::string(text) + "'");
  };
  ColumnExpr e;
  const auto open = s.find('(');
  if (open == std::string_view::npos) {
    if (s.empty()) return fail();
    e.column = std::string(s);
    return e;
  }
  if (s.back() != ')') return fail();
  const std::string_view fn = trim(s.substr(0, open));
  const std::string_view args = s.substr(open + 1, s.size() - open - 2);
  if (fn == "ln" || fn == "log") {
    e.kind = Kind::Log;
    e.column = std::string(trim(args));
  } else if (fn == "threshold") {
    const auto comma = args.rfind(',');
    if (comma == std::string_view::npos) return fail();
    e.kind = Kind::Threshold;
    e.column = std::string(trim(args.substr(0, comma)));
    const auto c = parse_number(args.substr(comma + 1));
    if (!c) return fail();
    e.cutoff = *c;
  } else {
    return fail();
  }
  if (e.column.empty()) return fail();
  return e;
}

std::string ColumnExpr::to_string() const {
  switch (kind) {
    case Kind::Identity: return column;
    case Kind::Log: return "ln(" + column + ")";
    case Kind::Threshold: return "threshold(" + column + ", " + format_double("%.17g", cutoff) + ")";
  }
  return column;
}

double ColumnExpr::apply(double value) const noexcept {
  switch (kind) {
    case Kind::Identity: return value;
    case Kind::Log: return std::log(value);
    case Kind::Threshold: return value >= cutoff ? 1.0 : 0.0;
  }
  return value;
}

ColumnMapping ColumnMapping::plain(std::string y, std::string d, std::string m, std::vector<std::string> x) {
  ColumnMapping mapping;
  mapping.y.column = std::move(y);
  mapping.d.column = std::move(d);
  mapping.m.column = std::move(m);
  mapping.x = std::move(x);
  return mapping;
}

LoadedCsv parse_csv(std::string_view content, const ColumnMapping& mapping) {
  std::vector<std::string> sources{mapping.y.column, mapping.d.column, mapping.m.column};
  sources.insert(sources.end(), mapping.x.begin(), mapping.x.end());
  for (std::size_t a = 0; a < sources.size(); ++a)
    for (std::size_t b = a + 1; b < sources.size(); ++b)
      if (sources[a] == sources[b])
        throw Error(ErrorCode::InvalidArgument, "column '" + sources[a] + "' is mapped twice", {sources[a]});

  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    while (pos < content.size()) {
      const auto end = content.find('\n', pos);
      line = content.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
      pos = end == std::string_view::npos ? content.size() : end + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!trim(line).empty()) return true;
    }
    return false;
  };

  std::string_view line;
  if (!next_line(line)) throw Error(ErrorCode::ParseError, "missing header row", {"1"});
  if (line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
  const auto header = split_record(line, line_no);
  std::vector<std::size_t> index;
  for (const auto& name : sources) {
    const auto it = std::find_if(header.begin(), header.end(),
                                 [&](const std::string& h) { return trim(h) == name; });
    if (it == header.end()) throw Error(ErrorCode::MissingColumn, "column '" + name + "' not in header", {name});
    index.push_back(static_cast<std::size_t>(it - header.begin()));
  }

  RawColumns raw;
  raw.x.resize(mapping.x.size());
  raw.column_names = mapping.x;
  std::size_t rows_read = 0, rows_dropped = 0;
  std::vector<double> values(sources.size());
  while (next_line(line)) {
    ++rows_read;
    const auto fields = split_record(line, line_no);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(header.size()),
                  {std::to_string(line_no)});
    }
    bool missing = false;
    for (std::size_t k = 0; k < sources.size(); ++k) {
      const std::string& f = fields[index[k]];
      if (is_missing(f)) {
        missing = true;
        break;
      }
      const auto v = parse_number(f);
      if (!v) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line_no) + ": column '" + sources[k] + "' is not numeric ('" + f + "')",
                    {std::to_string(line_no), sources[k]});
      }
      values[k] = *v;
    }
    if (missing) {
      ++rows_dropped;
      continue;
    }
    raw.y.push_back(mapping.y.apply(values[0]));
    raw.d.push_back(mapping.d.apply(values[1]));
    raw.m.push_back(mapping.m.apply(values[2]));
    for (std::size_t j = 0; j < mapping.x.size(); ++j) raw.x[j].push_back(values[3 + j]);
  }
  return {validate_dataset(raw), rows_read, rows_dropped};
}

LoadedCsv load_csv(const std::string& path, const ColumnMapping& mapping) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'", {path});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), mapping);
}

std::string dataset_to_csv(const Dataset& data) {
  std::string out = "y,d,m";
  for (const auto& n : data.column_names()) out += "," + n;
  out += '\n';
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(data.size()); ++i) {
    out += format_double("%.17g", data.y()[i]);
    out += "," + format_double("%.17g", data.d()[i]);
    out += "," + format_double("%.17g", data.m()[i]);
    for (Eigen::Index j = 0; j < data.x().cols(); ++j) out += "," + format_double("%.17g", data.x()(i, j));
    out += '\n';
  }
  return out;
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "text") return OutputFormat::Text;
  throw Error(ErrorCode::InvalidArgument, "unknown output format '" + std::string(name) + "'");
}

namespace {

ojson effect_vector_json(const EffectVector& v) {
  ojson j;
  for (Effect e : kAllEffects) j[to_string(e)] = v[e];
  return j;
}

const char* short_label(Effect e) {
  switch (e) {
    case Effect::Total: return "tot";
    case Effect::Direct: return "dir";
    case Effect::Indirect: return "ind";
    case Effect::Interaction: return "int";
  }
  return "?";
}

}  // namespace

std::string render(const EffectEstimates& est, OutputFormat format) {
  if (format == OutputFormat::Json) {
    ojson j;
    j["estimator"] = est.estimator_id;
    j["n"] = est.n;
    ojson effects;
    for (Effect e : kAllEffects) {
      effects[to_string(e)] = {{"point", est[e].point}, {"se", est[e].se}, {"t", est[e].t}};
    }
    j["effects"] = std::move(effects);
    j["complier_share"] = est.complier_share;
    return j.dump(2) + "\n";
  }
  std::string out = "estimator " + est.estimator_id + "  N=" + std::to_string(est.n) + "\n";
  out += "effect          estimate        se   t-value\n";
  for (Effect e : kAllEffects) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-12s %11.6f %9.6f %9.3f\n", to_string(e), est[e].point, est[e].se, est[e].t);
    out += buf;
  }
  out += "complier share " + format_double("%.6f", est.complier_share) + "\n";
  return out;
}

std::string render(const SimulationReport& report, OutputFormat format) {
  if (format == OutputFormat::Json) {
    ojson j;
    j["design"] = report.design_id;
    j["n"] = report.n;
    j["reps"] = report.reps;
    j["seed"] = report.seed;
    ojson truth;
    truth["method"] = report.true_method;
    truth["effects"] = effect_vector_json(report.true_effects);
    if (report.true_mc_se) {
      truth["mc_se"] = effect_vector_json(*report.true_mc_se);
      truth["draws"] = report.true_draws;
    }
    j["true_effects"] = std::move(truth);
    ojson ests = ojson::array();
    for (const auto& s : report.estimators) {
      ojson e;
      e["label"] = s.label;
      e["estimator_id"] = s.estimator_id;
      e["successful_reps"] = s.successful_reps;
      e["failed_reps"] = s.failed_reps;
      if (s.failed_reps > 0) e["first_failure"] = s.first_failure;
      ojson metrics;
      for (Effect eff : kAllEffects) {
        const auto& m = s[eff];
        metrics[to_string(eff)] = {
            {"normalized", m.normalized},
            {"abs_bias", m.abs_bias_n()},
            {"sd", m.sd_n()},
            {"rmse", m.rmse_n()},
            {"asy_sd", m.asy_sd_n()},
            {"raw", {{"bias", m.bias}, {"sd", m.sd}, {"rmse", m.rmse}, {"asy_sd", m.mean_asy_sd}}},
        };
      }
      e["metrics"] = std::move(metrics);
      ests.push_back(std::move(e));
    }
    j["estimators"] = std::move(ests);
    return j.dump(2) + "\n";
  }

  std::string out = "Design " + std::to_string(report.design_id) + ", N=" + std::to_string(report.n) +
                    ", reps=" + std::to_string(report.reps) + ", seed=" + std::to_string(report.seed) + "\n";
  out += "|Bias|/|effect| Sd/|effect| (Rmse/|effect|) AsySd/|effect|\n";
  for (const auto& s : report.estimators) {
    out += "OLS_" + s.label + "  [" + s.estimator_id + "]";
    if (s.failed_reps > 0) out += "  failed reps: " + std::to_string(s.failed_reps);
    out += "\n";
    for (Effect eff : kAllEffects) {
      const auto& m = s[eff];
      char buf[128];
      std::snprintf(buf, sizeof buf, "  %s  %.2f %.2f (%.2f) %.2f%s\n", short_label(eff), m.abs_bias_n(), m.sd_n(),
                    m.rmse_n(), m.asy_sd_n(), m.normalized ? "" : "  (unnormalized)");
      out += buf;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "tru  %.3f, %.3f, %.3f, %.3f  (%s)\n", report.true_effects.total,
                report.true_effects.direct, report.true_effects.indirect, report.true_effects.interaction,
                report.true_method.c_str());
  out += buf;
  return out;
}

std::string render(const TrueEffectsReport& report, OutputFormat format) {
  if (format == OutputFormat::Json) {
    ojson j;
    j["design"] = report.design_id;
    j["method"] = report.method;
    j["effects"] = effect_vector_json(report.effects);
    if (report.mc_se) {
      j["mc_se"] = effect_vector_json(*report.mc_se);
      j["draws"] = report.draws;
      j["seed"] = report.seed;
    }
    return j.dump(2) + "\n";
  }
  std::string out = "Design " + std::to_string(report.design_id) + " true effects (" + report.method + ")\n";
  for (Effect e : kAllEffects) {
    char buf[128];
    if (report.mc_se)
      std::snprintf(buf, sizeof buf, "%-12s %.6f  (mc se %.6f)\n", to_string(e), report.effects[e], (*report.mc_se)[e]);
    else
      std::snprintf(buf, sizeof buf, "%-12s %.6f\n", to_string(e), report.effects[e]);
    out += buf;
  }
  return out;
}

void write_output(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing", {path});
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path + "'", {path});
}

}  // namespace pathfree
