#include "pathfree/types.hpp"

#include <cmath>
#include <string>

namespace pathfree {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonBinaryColumn: return "NonBinaryColumn";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::EmptyCell: return "EmptyCell";
    case ErrorCode::TreatedCellMissing: return "TreatedCellMissing";
    case ErrorCode::EmptyStratumCell: return "EmptyStratumCell";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::AllRepsFailed: return "AllRepsFailed";
  }
  return "Unknown";
}

const char* to_string(Effect e) noexcept {
  switch (e) {
    case Effect::Total: return "total";
    case Effect::Direct: return "direct";
    case Effect::Indirect: return "indirect";
    case Effect::Interaction: return "interaction";
  }
  return "unknown";
}

namespace {

void check_finite(const std::vector<double>& v, const std::string& label) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw Error(ErrorCode::NonFiniteValue,
                  "non-finite value in column '" + label + "' at row " + std::to_string(i),
                  {label, std::to_string(i)});
    }
  }
}

void check_binary(const std::vector<double>& v, const std::string& label) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0 && v[i] != 1.0) {
      throw Error(ErrorCode::NonBinaryColumn,
                  "column '" + label + "' has non-binary value at row " + std::to_string(i),
                  {label, std::to_string(i)});
    }
  }
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

Dataset validate_dataset(const RawColumns& raw) {
  const std::size_t n = raw.y.size();
  if (n == 0) throw Error(ErrorCode::LengthMismatch, "dataset must have at least one row");
  if (raw.d.size() != n || raw.m.size() != n) {
    throw Error(ErrorCode::LengthMismatch, "y, d and m must have equal length");
  }
  if (raw.column_names.size() != raw.x.size()) {
    throw Error(ErrorCode::LengthMismatch, "one name is required per covariate column");
  }
  for (std::size_t j = 0; j < raw.x.size(); ++j) {
    if (raw.x[j].size() != n) {
      throw Error(ErrorCode::LengthMismatch,
                  "covariate '" + raw.column_names[j] + "' has the wrong length",
                  {raw.column_names[j]});
    }
  }

  check_finite(raw.y, "y");
  check_finite(raw.d, "d");
  check_finite(raw.m, "m");
  for (std::size_t j = 0; j < raw.x.size(); ++j) check_finite(raw.x[j], raw.column_names[j]);
  check_binary(raw.d, "d");
  check_binary(raw.m, "m");

  Dataset ds;
  ds.y_ = to_vector(raw.y);
  ds.d_ = to_vector(raw.d);
  ds.m_ = to_vector(raw.m);
  ds.x_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(raw.x.size()));
  for (std::size_t j = 0; j < raw.x.size(); ++j) ds.x_.col(static_cast<Eigen::Index>(j)) = to_vector(raw.x[j]);
  ds.names_ = raw.column_names;
  for (std::size_t i = 0; i < n; ++i) {
    ++ds.cell_counts_[2 * static_cast<int>(raw.d[i]) + static_cast<int>(raw.m[i])];
  }
  return ds;
}

std::vector<Cell> Dataset::empty_cells() const {
  std::vector<Cell> out;
  for (int d = 0; d < 2; ++d)
    for (int m = 0; m < 2; ++m)
      if (cell_counts_[2 * d + m] == 0) out.push_back({d, m});
  return out;
}

int Dataset::column_index(const std::string& name) const noexcept {
  for (std::size_t j = 0; j < names_.size(); ++j)
    if (names_[j] == name) return static_cast<int>(j);
  return -1;
}

EffectEstimate make_estimate(double point, double se) noexcept {
  return {point, se, se > 0.0 ? point / se : 0.0};
}

const EffectEstimate& EffectEstimates::operator[](Effect e) const noexcept {
  switch (e) {
    case Effect::Direct: return direct;
    case Effect::Indirect: return indirect;
    case Effect::Interaction: return interaction;
    case Effect::Total: break;
  }
  return total;
}

EffectEstimate& EffectEstimates::operator[](Effect e) noexcept {
  return const_cast<EffectEstimate&>(static_cast<const EffectEstimates&>(*this)[e]);
}

double EffectVector::operator[](Effect e) const noexcept {
  switch (e) {
    case Effect::Direct: return direct;
    case Effect::Indirect: return indirect;
    case Effect::Interaction: return interaction;
    case Effect::Total: break;
  }
  return total;
}

}  // namespace pathfree
