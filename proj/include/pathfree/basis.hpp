#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pathfree/types.hpp"

namespace pathfree {

/// The six covariate blocks of the varying-effect estimator:
///   Y  on (X0, X1*D, X4*M, X3*DM)
///   DY on D*(X2, X2*M)
///   M  on (Xm, Xm*D)
enum class BasisBlock { X0 = 0, X1, X2, X3, X4, Xm };

inline constexpr std::size_t kNumBasisBlocks = 6;
inline constexpr std::array<BasisBlock, kNumBasisBlocks> kAllBasisBlocks = {
    BasisBlock::X0, BasisBlock::X1, BasisBlock::X2, BasisBlock::X3, BasisBlock::X4, BasisBlock::Xm};

const char* to_string(BasisBlock b) noexcept;

struct BasisFactor {
  enum class Kind { Power, NormalCdf };
  Kind kind = Kind::Power;
  std::string name;
  int power = 1;

  friend bool operator==(const BasisFactor&, const BasisFactor&) = default;
};

/// Product of factors; the empty product is the intercept.
struct BasisTerm {
  std::vector<BasisFactor> factors;

  bool is_intercept() const noexcept { return factors.empty(); }
  std::string to_string() const;
  friend bool operator==(const BasisTerm&, const BasisTerm&) = default;
};

/// Declarative covariate expansion for each block.
///
/// Text grammar (whitespace ignored):
///
///   spec   := terms | block (';' block)*
///   block  := ('x0'|'x1'|'x2'|'x3'|'x4'|'xm'|'all') ':' terms
///   terms  := term (',' term)*
///   term   := '1' | factor ('*' factor)*
///   factor := name ['^' k] | 'phi(' name ')' ['^' k]
///
/// A bare term list applies to all six blocks. In block form, blocks that are
/// not listed take the 'all' entry, or the intercept alone if there is none.
/// Every block carries an implicit leading intercept; terms are canonicalized
/// (factors sorted, repeated names merged into powers) and de-duplicated.
class BasisSpec {
 public:
  BasisSpec();

  static BasisSpec parse(std::string_view text);
  static BasisSpec uniform(std::vector<BasisTerm> terms);

  /// 1, x_1, ..., x_k
  static BasisSpec linear(const std::vector<std::string>& names);
  /// linear plus x_j^2
  static BasisSpec quadratic(const std::vector<std::string>& names);
  /// quadratic plus phi(x_j)
  static BasisSpec quadratic_phi(const std::vector<std::string>& names);

  /// Terms including the leading intercept.
  const std::vector<BasisTerm>& terms(BasisBlock b) const noexcept {
    return blocks_[static_cast<std::size_t>(b)];
  }
  std::size_t dimension(BasisBlock b) const noexcept { return terms(b).size(); }

  void set_terms(BasisBlock b, std::vector<BasisTerm> terms);

  /// Canonical text; parse(to_string()) reproduces the spec.
  std::string to_string() const;
  /// 16 hex digit FNV-1a digest of to_string().
  std::string hash() const;

  /// Throws MissingColumn if a term references an unknown covariate.
  void validate(const std::vector<std::string>& column_names) const;

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;

 private:
  std::array<std::vector<BasisTerm>, kNumBasisBlocks> blocks_;
};

struct ExpandedBasis {
  std::array<Matrix, kNumBasisBlocks> blocks;
  std::array<std::vector<std::string>, kNumBasisBlocks> names;

  const Matrix& block(BasisBlock b) const noexcept { return blocks[static_cast<std::size_t>(b)]; }
  const std::vector<std::string>& block_names(BasisBlock b) const noexcept {
    return names[static_cast<std::size_t>(b)];
  }
};

/// Evaluates every block on every observation; columns follow spec order.
ExpandedBasis expand_basis(const Dataset& data, const BasisSpec& spec);

/// Standard normal distribution function.
double normal_cdf(double x) noexcept;

}  // namespace pathfree
