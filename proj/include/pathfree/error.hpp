#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pathfree {

enum class ErrorCode {
  InvalidArgument,
  NonBinaryColumn,
  LengthMismatch,
  NonFiniteValue,
  DimensionMismatch,
  RankDeficient,
  EmptyCell,
  TreatedCellMissing,
  EmptyStratumCell,
  MissingColumn,
  ParseError,
  IoError,
  AllRepsFailed,
};

const char* to_string(ErrorCode code) noexcept;

// Every recoverable failure in the library is reported through this type.
// `details` carries structured context, e.g. the dependent column names of
// a RankDeficient error or the (d, m) labels of an EmptyCell error.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::string> details = {})
      : std::runtime_error(message), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
};

}  // namespace pathfree
