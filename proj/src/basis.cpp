#include "pathfree/basis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <tuple>

namespace pathfree {

const char* to_string(BasisBlock b) noexcept {
  switch (b) {
    case BasisBlock::X0: return "x0";
    case BasisBlock::X1: return "x1";
    case BasisBlock::X2: return "x2";
    case BasisBlock::X3: return "x3";
    case BasisBlock::X4: return "x4";
    case BasisBlock::Xm: return "xm";
  }
  return "?";
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::string BasisTerm::to_string() const {
  if (factors.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& f = factors[i];
    if (i > 0) out += '*';
    out += f.kind == BasisFactor::Kind::NormalCdf ? "phi(" + f.name + ")" : f.name;
    if (f.power != 1) out += "^" + std::to_string(f.power);
  }
  return out;
}

namespace {

BasisTerm canonical(BasisTerm term) {
  auto key = [](const BasisFactor& f) { return std::tie(f.name, f.kind); };
  std::stable_sort(term.factors.begin(), term.factors.end(),
                   [&](const BasisFactor& a, const BasisFactor& b) { return key(a) < key(b); });
  std::vector<BasisFactor> merged;
  for (auto& f : term.factors) {
    if (!merged.empty() && merged.back().name == f.name && merged.back().kind == f.kind) {
      merged.back().power += f.power;
    } else {
      merged.push_back(std::move(f));
    }
  }
  term.factors = std::move(merged);
  return term;
}

std::vector<BasisTerm> normalize(std::vector<BasisTerm> terms) {
  std::vector<BasisTerm> out{BasisTerm{}};
  for (auto& t : terms) {
    BasisTerm c = canonical(std::move(t));
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  BasisSpec spec() {
    skip_ws();
    if (!looks_like_block_form()) {
      auto terms = term_list();
      expect_end();
      return BasisSpec::uniform(std::move(terms));
    }

    std::optional<std::vector<BasisTerm>> all;
    std::array<std::optional<std::vector<BasisTerm>>, kNumBasisBlocks> given;
    while (true) {
      skip_ws();
      const std::string label = identifier();
      skip_ws();
      expect(':');
      auto terms = term_list();
      if (label == "all") {
        all = std::move(terms);
      } else {
        const auto idx = block_index(label);
        if (given[idx]) fail("block '" + label + "' given twice");
        given[idx] = std::move(terms);
      }
      skip_ws();
      if (at_end()) break;
      expect(';');
    }
    BasisSpec spec;
    for (std::size_t b = 0; b < kNumBasisBlocks; ++b) {
      if (given[b])
        spec.set_terms(kAllBasisBlocks[b], *given[b]);
      else if (all)
        spec.set_terms(kAllBasisBlocks[b], *all);
    }
    return spec;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError,
                "basis spec: " + what + " at offset " + std::to_string(pos_) + " in '" +
                    std::string(text_) + "'");
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void expect_end() {
    skip_ws();
    if (!at_end()) fail("unexpected trailing input");
  }

  bool looks_like_block_form() const { return text_.find(':') != std::string_view::npos; }

  static std::size_t block_index(const std::string& label) {
    for (std::size_t b = 0; b < kNumBasisBlocks; ++b)
      if (label == to_string(kAllBasisBlocks[b])) return b;
    throw Error(ErrorCode::ParseError, "basis spec: unknown block '" + label + "'");
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  }

  std::string identifier() {
    skip_ws();
    if (!ident_start(peek())) fail("expected a name");
    const std::size_t start = pos_;
    while (!at_end() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  int exponent() {
    skip_ws();
    if (peek() != '^') return 1;
    ++pos_;
    skip_ws();
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a positive integer exponent");
    const int k = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (k < 1) fail("exponent must be positive");
    return k;
  }

  BasisFactor factor() {
    BasisFactor f;
    f.name = identifier();
    skip_ws();
    if (f.name == "phi" && peek() == '(') {
      ++pos_;
      f.kind = BasisFactor::Kind::NormalCdf;
      f.name = identifier();
      expect(')');
    }
    f.power = exponent();
    return f;
  }

  BasisTerm term() {
    skip_ws();
    if (peek() == '1') {
      ++pos_;
      return {};
    }
    BasisTerm t;
    t.factors.push_back(factor());
    while (true) {
      skip_ws();
      if (peek() != '*') break;
      ++pos_;
      t.factors.push_back(factor());
    }
    return t;
  }

  std::vector<BasisTerm> term_list() {
    std::vector<BasisTerm> out{term()};
    while (true) {
      skip_ws();
      if (peek() != ',') break;
      ++pos_;
      out.push_back(term());
    }
    return out;
  }
};

std::string join_terms(const std::vector<BasisTerm>& terms) {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0) out += ", ";
    out += terms[i].to_string();
  }
  return out;
}

double evaluate(const BasisFactor& f, double x) {
  const double base = f.kind == BasisFactor::Kind::NormalCdf ? normal_cdf(x) : x;
  double v = 1.0;
  for (int k = 0; k < f.power; ++k) v *= base;
  return v;
}

}  // namespace

BasisSpec::BasisSpec() {
  for (auto& b : blocks_) b = {BasisTerm{}};
}

void BasisSpec::set_terms(BasisBlock b, std::vector<BasisTerm> terms) {
  blocks_[static_cast<std::size_t>(b)] = normalize(std::move(terms));
}

BasisSpec BasisSpec::parse(std::string_view text) { return Parser(text).spec(); }

BasisSpec BasisSpec::uniform(std::vector<BasisTerm> terms) {
  BasisSpec spec;
  const auto normalized = normalize(std::move(terms));
  for (auto& b : spec.blocks_) b = normalized;
  return spec;
}

BasisSpec BasisSpec::linear(const std::vector<std::string>& names) {
  std::vector<BasisTerm> terms;
  for (const auto& n : names) terms.push_back({{{BasisFactor::Kind::Power, n, 1}}});
  return uniform(std::move(terms));
}

BasisSpec BasisSpec::quadratic(const std::vector<std::string>& names) {
  std::vector<BasisTerm> terms;
  for (const auto& n : names) terms.push_back({{{BasisFactor::Kind::Power, n, 1}}});
  for (const auto& n : names) terms.push_back({{{BasisFactor::Kind::Power, n, 2}}});
  return uniform(std::move(terms));
}

BasisSpec BasisSpec::quadratic_phi(const std::vector<std::string>& names) {
  std::vector<BasisTerm> terms;
  for (const auto& n : names) terms.push_back({{{BasisFactor::Kind::Power, n, 1}}});
  for (const auto& n : names) terms.push_back({{{BasisFactor::Kind::Power, n, 2}}});
  for (const auto& n : names) terms.push_back({{{BasisFactor::Kind::NormalCdf, n, 1}}});
  return uniform(std::move(terms));
}

std::string BasisSpec::to_string() const {
  const bool uniform_blocks =
      std::all_of(blocks_.begin(), blocks_.end(), [&](const auto& b) { return b == blocks_[0]; });
  if (uniform_blocks) return join_terms(blocks_[0]);
  std::string out;
  for (std::size_t b = 0; b < kNumBasisBlocks; ++b) {
    if (b > 0) out += "; ";
    out += std::string(pathfree::to_string(kAllBasisBlocks[b])) + ": " + join_terms(blocks_[b]);
  }
  return out;
}

std::string BasisSpec::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_string()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void BasisSpec::validate(const std::vector<std::string>& column_names) const {
  for (std::size_t b = 0; b < kNumBasisBlocks; ++b) {
    for (const auto& t : blocks_[b]) {
      for (const auto& f : t.factors) {
        if (std::find(column_names.begin(), column_names.end(), f.name) == column_names.end()) {
          throw Error(ErrorCode::MissingColumn,
                      "basis block " + std::string(pathfree::to_string(kAllBasisBlocks[b])) +
                          " references unknown covariate '" + f.name + "'",
                      {f.name});
        }
      }
    }
  }
}

ExpandedBasis expand_basis(const Dataset& data, const BasisSpec& spec) {
  spec.validate(data.column_names());
  const auto n = static_cast<Eigen::Index>(data.size());
  ExpandedBasis out;
  for (std::size_t b = 0; b < kNumBasisBlocks; ++b) {
    const auto& terms = spec.terms(kAllBasisBlocks[b]);
    Matrix block(n, static_cast<Eigen::Index>(terms.size()));
    for (std::size_t t = 0; t < terms.size(); ++t) {
      auto col = block.col(static_cast<Eigen::Index>(t));
      col.setOnes();
      for (const auto& f : terms[t].factors) {
        const auto src = data.x().col(data.column_index(f.name));
        for (Eigen::Index i = 0; i < n; ++i) col[i] *= evaluate(f, src[i]);
      }
      out.names[b].push_back(terms[t].to_string());
    }
    out.blocks[b] = std::move(block);
  }
  return out;
}

}  // namespace pathfree
