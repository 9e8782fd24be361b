#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathfree/simulation.hpp"
#include "pathfree/types.hpp"

namespace pathfree {

/// A mapped source column with an optional transform:
///   name                 the raw value
///   ln(name)             natural logarithm
///   threshold(name, c)   1 if value >= c, else 0
struct ColumnExpr {
  enum class Kind { Identity, Log, Threshold };
  Kind kind = Kind::Identity;
  std::string column;
  double cutoff = 0.0;

  static ColumnExpr parse(std::string_view text);
  std::string to_string() const;
  double apply(double value) const noexcept;
};

struct ColumnMapping {
  ColumnExpr y;
  ColumnExpr d;
  ColumnExpr m;
  std::vector<std::string> x;

  /// Identity mapping from plain column names.
  static ColumnMapping plain(std::string y, std::string d, std::string m, std::vector<std::string> x = {});
};

struct LoadedCsv {
  Dataset data;
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;  // rows with an empty or NA mapped field
};

/// Comma-separated, header row, '.' decimal point. Unmapped columns are not
/// parsed. Errors: IoError, MissingColumn, ParseError (with line number),
/// and the Dataset validation errors after transforms.
LoadedCsv load_csv(const std::string& path, const ColumnMapping& mapping);
LoadedCsv parse_csv(std::string_view content, const ColumnMapping& mapping);

/// Writes y, d, m and the covariates with round-trip precision.
std::string dataset_to_csv(const Dataset& data);

enum class OutputFormat { Json, Text };

OutputFormat parse_output_format(std::string_view name);

struct TrueEffectsReport {
  int design_id = 0;
  std::string method;  // "analytic" or "mc"
  EffectVector effects;
  std::optional<EffectVector> mc_se;
  std::uint64_t draws = 0;
  std::uint64_t seed = 0;
};

std::string render(const EffectEstimates& est, OutputFormat format);
std::string render(const SimulationReport& report, OutputFormat format);
std::string render(const TrueEffectsReport& report, OutputFormat format);

/// Throws IoError when the file cannot be written.
void write_output(const std::string& path, std::string_view content);

}  // namespace pathfree
