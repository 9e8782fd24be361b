#include <doctest.h>

#include "pathfree/basis.hpp"
#include "test_support.hpp"

using namespace pathfree;
using testing::error_code_of;
using testing::make_data;

TEST_CASE("intercept-only spec gives a column of ones") {
  const Dataset ds = make_data({1, 2, 3}, {0, 1, 1}, {0, 1, 0}, {{4, 5, 6}}, {"age"});
  const ExpandedBasis e = expand_basis(ds, BasisSpec::parse("1"));
  for (BasisBlock b : kAllBasisBlocks) {
    REQUIRE(e.block(b).cols() == 1);
    CHECK(e.block(b).col(0).isOnes());
  }
}

TEST_CASE("powers and the normal cdf") {
  const Dataset ds = make_data({1}, {0}, {0}, {{2}}, {"age"});
  const ExpandedBasis e = expand_basis(ds, BasisSpec::parse("1, age, age^2"));
  const Matrix& x0 = e.block(BasisBlock::X0);
  REQUIRE(x0.cols() == 3);
  CHECK(x0(0, 0) == 1.0);
  CHECK(x0(0, 1) == 2.0);
  CHECK(x0(0, 2) == 4.0);

  const Dataset zero = make_data({1}, {0}, {0}, {{0}}, {"x"});
  const Matrix phi = expand_basis(zero, BasisSpec::parse("1, x, phi(x)")).block(BasisBlock::Xm);
  REQUIRE(phi.cols() == 3);
  CHECK(phi(0, 1) == 0.0);
  CHECK(phi(0, 2) == 0.5);
}

TEST_CASE("normal cdf values") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
  CHECK(normal_cdf(-1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-14));
}

TEST_CASE("implicit intercept and de-duplication") {
  const BasisSpec spec = BasisSpec::parse("age, 1, age, age*age, age^2, south");
  const auto& terms = spec.terms(BasisBlock::X1);
  REQUIRE(terms.size() == 4);
  CHECK(terms[0].is_intercept());
  CHECK(terms[1].to_string() == "age");
  CHECK(terms[2].to_string() == "age^2");
  CHECK(terms[3].to_string() == "south");
}

TEST_CASE("products are canonical") {
  CHECK(BasisSpec::parse("b*a") == BasisSpec::parse("a*b"));
  CHECK(BasisSpec::parse("a*a*b") == BasisSpec::parse("b*a^2"));
  const Dataset ds = make_data({1}, {0}, {0}, {{3}, {5}}, {"a", "b"});
  const Matrix x = expand_basis(ds, BasisSpec::parse("a^2*b, phi(b)*a")).block(BasisBlock::X2);
  REQUIRE(x.cols() == 3);
  CHECK(x(0, 1) == 45.0);
  CHECK(x(0, 2) == doctest::Approx(3.0 * normal_cdf(5.0)));
}

TEST_CASE("block form") {
  const BasisSpec spec = BasisSpec::parse("all: age; xm: age, phi(age); x4: 1");
  CHECK(spec.dimension(BasisBlock::X0) == 2);
  CHECK(spec.dimension(BasisBlock::X3) == 2);
  CHECK(spec.dimension(BasisBlock::X4) == 1);
  CHECK(spec.dimension(BasisBlock::Xm) == 3);

  const BasisSpec partial = BasisSpec::parse("x1: age");
  CHECK(partial.dimension(BasisBlock::X1) == 2);
  CHECK(partial.dimension(BasisBlock::X0) == 1);
}

TEST_CASE("text round trip") {
  const char* specs[] = {"1",
                         "age, age^2",
                         "age, phi(age), south*age",
                         "all: a, b; xm: a, phi(b)^2",
                         "x0: a; x1: b; x2: a*b; x3: 1; x4: a^3; xm: phi(a)"};
  for (const char* text : specs) {
    const BasisSpec spec = BasisSpec::parse(text);
    const BasisSpec again = BasisSpec::parse(spec.to_string());
    CHECK(again == spec);
    CHECK(again.to_string() == spec.to_string());
    CHECK(again.hash() == spec.hash());
  }
  CHECK(BasisSpec::parse("age").hash().size() == 16);
  CHECK(BasisSpec::parse("age").hash() != BasisSpec::parse("age, age^2").hash());
}

TEST_CASE("presets") {
  const std::vector<std::string> names{"x"};
  CHECK(BasisSpec::linear(names) == BasisSpec::parse("x"));
  CHECK(BasisSpec::quadratic(names) == BasisSpec::parse("x, x^2"));
  CHECK(BasisSpec::quadratic_phi(names) == BasisSpec::parse("x, x^2, phi(x)"));
}

TEST_CASE("parse and validation errors") {
  CHECK(error_code_of([] { BasisSpec::parse("age,"); }) == ErrorCode::ParseError);
  CHECK(error_code_of([] { BasisSpec::parse("age^0"); }) == ErrorCode::ParseError);
  CHECK(error_code_of([] { BasisSpec::parse("age^"); }) == ErrorCode::ParseError);
  CHECK(error_code_of([] { BasisSpec::parse("x9: age"); }) == ErrorCode::ParseError);
  CHECK(error_code_of([] { BasisSpec::parse("phi(age"); }) == ErrorCode::ParseError);
  CHECK(error_code_of([] { BasisSpec::parse("age + 1"); }) == ErrorCode::ParseError);

  const Dataset ds = make_data({1}, {0}, {0}, {{2}}, {"age"});
  CHECK(error_code_of([&] { expand_basis(ds, BasisSpec::parse("age, wage")); }) == ErrorCode::MissingColumn);
}
