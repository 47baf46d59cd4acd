#include <doctest.h>

#include <cmath>
#include <complex>

#include "test_support.hpp"
#include "zrescale/errors.hpp"
#include "zrescale/expr.hpp"
#include "zrescale/sampling.hpp"

using namespace zrescale;
using testsupport::fd_gradient;
using testsupport::rel_error;
using testsupport::Rng;

namespace {

CPoint pt1(Complex z) { return CPoint{z}; }

}  // namespace

TEST_CASE("parse maps the grammar directly") {
  ExprPtr e = parse_expression("z1^2", 1);
  CHECK(e->kind() == ExprKind::IntegerPower);
  CHECK(e->exponent() == 2);
  CHECK(e->children().front()->kind() == ExprKind::Variable);

  ExprPtr s = parse_expression("j*z1 + 0", 2);
  REQUIRE(s->kind() == ExprKind::Sum);
  REQUIRE(s->children().size() == 2);
  CHECK(s->children()[0]->kind() == ExprKind::Product);
  CHECK(s->children()[1]->kind() == ExprKind::Constant);
  CHECK(s->children()[1]->constant_value() == Complex(0.0, 0.0));
  CHECK(s->has_parameter());

  CHECK(parse_expression("exp(z1)", 1)->kind() == ExprKind::Exp);
  CHECK(parse_expression("inv(exp(z1))", 1)->kind() == ExprKind::Reciprocal);
  CHECK(parse_expression("z1^j", 1)->kind() == ExprKind::ParameterPower);
  CHECK(parse_expression("1.5e-3", 1)->constant_value() == Complex(1.5e-3, 0.0));
}

TEST_CASE("parse rejects malformed input with a position") {
  CHECK_THROWS_AS(parse_expression("z3", 2), ParseError);
  CHECK_THROWS_WITH_AS(parse_expression("z3", 2),
                       "variable index out of range (at position 0)", ParseError);
  CHECK_THROWS_AS(parse_expression("z1 +", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("zx", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("foo(z1)", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("(z1", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("z1 2", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("z0", 1), ParseError);
}

TEST_CASE("division needs a constant-or-j denominator or inv()") {
  CHECK_NOTHROW(parse_expression("z1/2", 1));
  CHECK_NOTHROW(parse_expression("z1/j", 1));
  CHECK_NOTHROW(parse_expression("z1/(2*j + 1)", 1));
  CHECK_NOTHROW(parse_expression("z1/inv(exp(z1))", 1));
  CHECK_NOTHROW(parse_expression("1/j + z1", 1));
  CHECK_THROWS_AS(parse_expression("1/(z1)", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("1/z2", 2), ParseError);
  CHECK_THROWS_AS(parse_expression("1/0", 1), NumericRangeError);
}

TEST_CASE("instantiate substitutes the parameter and folds constants") {
  FamilySpec family{1, parse_expression("j*z1", 1), Ball{origin(1), 1.0}, false};
  ExprPtr f10 = instantiate(family, 10);
  CHECK(!f10->has_parameter());
  CHECK(evaluate(f10, pt1(Complex(0.3, 0.0))) == Complex(3.0, 0.0));

  family.tmpl = parse_expression("exp(j*z1)", 1);
  ExprPtr f3 = instantiate(family, 3);
  CHECK(rel_error(std::abs(evaluate(f3, pt1(Complex(0.1, 0.0)))),
                  std::exp(0.3)) < 1e-15);

  family.tmpl = parse_expression("z1 + 1/j", 1);
  ExprPtr f4 = instantiate(family, 4);
  CHECK(to_string(f4) == "z1 + 0.25");

  family.tmpl = parse_expression("z1^j", 1);
  CHECK(evaluate(instantiate(family, 3), pt1(Complex(2.0, 0.0))) ==
        Complex(8.0, 0.0));

  CHECK_THROWS_AS(instantiate(family, 0), DomainError);
  CHECK_THROWS_AS(evaluate(family.tmpl, pt1(Complex(1.0, 0.0))), DomainError);
}

TEST_CASE("evaluate on hand-checked values") {
  CHECK(evaluate(parse_expression("z1^2", 1), pt1(Complex(1.0, 1.0))) ==
        Complex(0.0, 2.0));
  CHECK(evaluate(parse_expression("exp(z1)", 1), pt1(Complex(0.0, 0.0))) ==
        Complex(1.0, 0.0));
  CHECK(evaluate(parse_expression("10*z1", 1), pt1(Complex(0.3, 0.0))) ==
        Complex(3.0, 0.0));
  CHECK_THROWS_AS(evaluate(parse_expression("z1", 2), pt1(Complex(0.0, 0.0))),
                  DomainError);
}

TEST_CASE("evaluate reports non-finite results as numeric range errors") {
  ExprPtr f = parse_expression("exp(1000*z1)", 1);
  CHECK_THROWS_AS(evaluate(f, pt1(Complex(1.0, 0.0))), NumericRangeError);
  CHECK_THROWS_AS(eval_jet(f, pt1(Complex(1.0, 0.0))), NumericRangeError);
}

TEST_CASE("gradient matches hand values and the finite-difference oracle") {
  ExprPtr f = parse_expression("z1*z2", 2);
  auto g = gradient(f, CPoint{Complex(2.0, 0.0), Complex(0.0, 3.0)});
  CHECK(g[0] == Complex(0.0, 3.0));
  CHECK(g[1] == Complex(2.0, 0.0));

  CHECK(gradient(parse_expression("exp(z1)", 1), pt1(Complex(0.0, 0.0)))[0] ==
        Complex(1.0, 0.0));

  ExprPtr cube = parse_expression("z1^3", 1);
  const CPoint z2{Complex(2.0, 0.0)};
  CHECK(gradient(cube, z2)[0] == Complex(12.0, 0.0));
  CHECK(std::abs(gradient(cube, z2)[0] - fd_gradient(cube, z2)[0]) / 12.0 <
        1e-6);
}

TEST_CASE("gradient agrees with central differences on catalogue draws") {
  Rng rng(0x5eed0001);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto draw = testsupport::draw_catalogue_member(rng);
    const CPoint z = rng.point_in_box(draw.dimension, 0.8);
    const auto ad = gradient(draw.f, z);
    const auto fd = fd_gradient(draw.f, z);
    double ad_norm = 0.0, diff = 0.0;
    for (std::size_t k = 0; k < ad.size(); ++k) {
      ad_norm += std::norm(ad[k]);
      diff += std::norm(ad[k] - fd[k]);
    }
    ad_norm = std::sqrt(ad_norm);
    if (ad_norm <= 1e-8) continue;
    CHECK(std::sqrt(diff) / ad_norm < 1e-5);
    ++checked;
  }
  CHECK(checked > 900);
}

TEST_CASE("affine_reparam composes and matches its examples") {
  ExprPtr id = parse_expression("z1", 1);
  CHECK(affine_reparam(id, origin(1), 1.0) == id);  // identity shortcut

  const Complex c(0.4, -0.2);
  ExprPtr h = affine_reparam(id, CPoint{c}, 0.7);
  CHECK(evaluate(h, pt1(Complex(0.0, 0.0))) == c);

  ExprPtr ten = parse_expression("10*z1", 1);
  ExprPtr rescaled = affine_reparam(ten, origin(1), 0.1);
  Rng rng(0x5eed0002);
  for (int i = 0; i < 100; ++i) {
    const CPoint z = rng.point_in_box(1, 1.0);
    CHECK(std::abs(evaluate(rescaled, z) - z[0]) <= 1e-15);
  }

  CHECK_THROWS_AS(affine_reparam(id, origin(2), 1.0), DomainError);
  CHECK_THROWS_AS(affine_reparam(id, origin(1), 0.0), DomainError);
  CHECK_THROWS_AS(affine_reparam(id, origin(1), -1.0), DomainError);
}

TEST_CASE("composition law: nested affine equals the composed map") {
  Rng rng(0x5eed0003);
  for (int trial = 0; trial < 200; ++trial) {
    auto draw = testsupport::draw_catalogue_member(rng);
    const int n = draw.dimension;
    const CPoint a = rng.point_in_box(n, 0.3);
    const CPoint b = rng.point_in_box(n, 0.3);
    const double r = rng.uniform(0.1, 1.5);
    const double s = rng.uniform(0.1, 1.5);
    ExprPtr nested = affine_reparam(affine_reparam(draw.f, a, r), b, s);
    CPoint ab(a);
    for (int k = 0; k < n; ++k) ab[k] += r * b[k];
    ExprPtr composed = affine_reparam(draw.f, ab, r * s);
    for (int i = 0; i < 5; ++i) {
      const CPoint z = rng.point_in_box(n, 0.5);
      const Complex u = evaluate(nested, z);
      const Complex v = evaluate(composed, z);
      CHECK(std::abs(u - v) <= 1e-14 * std::max(1.0, std::abs(v)));
    }
  }
}

TEST_CASE("scale_by_power") {
  ExprPtr f = parse_expression("z1", 1);
  CHECK(scale_by_power(f, 0.1, 0.0) == f);
  ExprPtr one = parse_expression("1", 1);
  CHECK(scale_by_power(one, 4.0, 0.5)->constant_value() == Complex(2.0, 0.0));
  ExprPtr h = scale_by_power(f, 0.01, -1.0);
  CHECK(rel_error(std::abs(evaluate(h, pt1(Complex(1.0, 0.0)))), 100.0) < 1e-14);
  CHECK_THROWS_AS(scale_by_power(f, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(scale_by_power(f, 1e300, 2.0), NumericRangeError);
}

TEST_CASE("reciprocal evaluation and involution") {
  ExprPtr e = parse_expression("exp(z1)", 1);
  ExprPtr inv_e = make_reciprocal(e, true);
  CHECK(evaluate(inv_e, pt1(Complex(0.0, 0.0))) == Complex(1.0, 0.0));

  ExprPtr two = parse_expression("2", 1);
  CHECK(make_reciprocal(two, true)->constant_value() == Complex(0.5, 0.0));

  ExprPtr e3 = parse_expression("exp(3*z1)", 1);
  CHECK(rel_error(std::abs(evaluate(make_reciprocal(e3, true),
                                    pt1(Complex(0.1, 0.0)))),
                  std::exp(-0.3)) < 1e-14);

  // involution: 1/(1/f) evaluates as f
  Rng rng(0x5eed0004);
  ExprPtr back = make_reciprocal(make_reciprocal(e3, true), true);
  for (int i = 0; i < 100; ++i) {
    const CPoint z = rng.point_in_box(1, 1.0);
    const Complex u = evaluate(back, z);
    const Complex v = evaluate(e3, z);
    CHECK(std::abs(u - v) <= 1e-14 * std::abs(v));
  }

  CHECK_THROWS_AS(make_reciprocal(e, false), DomainError);
  FamilySpec not_zero_free{1, parse_expression("z1", 1), Ball{origin(1), 1.0},
                           false};
  CHECK_THROWS_AS(reciprocal(not_zero_free, e), DomainError);
  CHECK(evaluate(reciprocal(FamilySpec{1, e, Ball{origin(1), 1.0}, true}, e),
                 pt1(Complex(0.0, 0.0))) == Complex(1.0, 0.0));

  // reciprocal(f) * f == 1 wherever |f| is in range
  ExprPtr prod = make_product({e3, make_reciprocal(e3, true)});
  for (int i = 0; i < 20; ++i) {
    const CPoint z = rng.point_in_box(1, 1.0);
    CHECK(std::abs(evaluate(prod, z) - Complex(1.0, 0.0)) <= 1e-14);
  }
}

TEST_CASE("print/parse round-trip on the catalogue and generated trees") {
  Rng rng(0x5eed0005);
  for (const auto& entry : catalogue()) {
    ExprPtr parsed = parse_expression(entry.expression, entry.dimension);
    ExprPtr reparsed = parse_expression(to_string(parsed), entry.dimension);
    CHECK(to_string(parsed) == to_string(reparsed));
    FamilySpec fam{entry.dimension, parsed, entry.domain, entry.zero_free};
    FamilySpec fam2{entry.dimension, reparsed, entry.domain, entry.zero_free};
    ExprPtr a = instantiate(fam, 7);
    ExprPtr b = instantiate(fam2, 7);
    for (int i = 0; i < 100; ++i) {
      const CPoint z = rng.point_in_box(entry.dimension, 0.8);
      const Complex u = evaluate(a, z);
      const Complex v = evaluate(b, z);
      CHECK(std::abs(u - v) <= 1e-15 * std::max(1.0, std::abs(v)));
    }
  }
}

TEST_CASE("printer handles negative constants, negation, and substitutions") {
  Rng rng(0x5eed0006);
  ExprPtr tree = make_sum(
      {make_constant(Complex(-1.5, 2.0), 1),
       make_negate(parse_expression("z1^2", 1)),
       make_product({make_constant(Complex(0.0, -3.0), 1),
                     parse_expression("exp(z1)", 1)})});
  ExprPtr wrapped = scale_by_power(
      affine_reparam(tree, CPoint{Complex(0.2, -0.1)}, 0.5), 2.0, 1.5);
  for (ExprPtr e : {tree, wrapped}) {
    ExprPtr reparsed = parse_expression(to_string(e), 1);
    for (int i = 0; i < 50; ++i) {
      const CPoint z = rng.point_in_box(1, 1.0);
      const Complex u = evaluate(e, z);
      const Complex v = evaluate(reparsed, z);
      CHECK(std::abs(u - v) <= 1e-14 * std::max(1.0, std::abs(u)));
    }
  }
}

TEST_CASE("zero-free declarations are spot-checked by sampling") {
  FamilySpec expfam{1, parse_expression("exp(j*z1)", 1),
                    Ball{origin(1), 0.3}, true};
  CHECK_NOTHROW(check_zero_free(expfam, 80, *instantiate(expfam, 80)));

  FamilySpec bad{1, parse_expression("z1", 1), Ball{origin(1), 1.0}, true};
  CHECK_THROWS_AS(check_zero_free(bad, 1, *instantiate(bad, 1)),
                  ZeroFreeViolation);

  FamilySpec not_declared{1, parse_expression("z1", 1), Ball{origin(1), 1.0},
                          false};
  CHECK_NOTHROW(check_zero_free(not_declared, 1, *instantiate(not_declared, 1)));
}

TEST_CASE("expression trees reject invalid construction") {
  CHECK_THROWS_AS(make_variable(2, 2), DomainError);
  CHECK_THROWS_AS(make_variable(-1, 2), DomainError);
  CHECK_THROWS_AS(make_int_pow(parse_expression("z1", 1), -1), DomainError);
  CHECK_THROWS_AS(make_constant(Complex(1.0 / 0.0, 0.0), 1), NumericRangeError);
  CHECK_THROWS_AS(
      make_sum({parse_expression("z1", 1), parse_expression("z1", 2)}),
      DomainError);
  CHECK_THROWS_AS(make_scalar_multiple(parse_expression("z1", 1), -2.0),
                  DomainError);
}
