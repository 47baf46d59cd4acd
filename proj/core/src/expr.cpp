#include "zrescale/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "zrescale/errors.hpp"
#include "zrescale/sampling.hpp"

namespace zrescale {

namespace {

bool is_const(const ExprPtr& e) { return e->kind() == ExprKind::Constant; }

void require_dim(const std::vector<ExprPtr>& children) {
  for (const ExprPtr& c : children)
    if (c->dimension() != children.front()->dimension())
      throw DomainError("expression children disagree on dimension");
}

std::shared_ptr<Expr> node(ExprKind kind, int dim) {
  if (dim < 1) throw DomainError("expression dimension must be >= 1");
  return std::make_shared<Expr>(Expr::Private{}, kind, dim);
}

}  // namespace

ExprPtr make_variable(int index, int dimension) {
  if (index < 0 || index >= dimension)
    throw DomainError("variable index out of range");
  auto e = node(ExprKind::Variable, dimension);
  e->int_payload_ = index;
  return e;
}

ExprPtr make_constant(Complex value, int dimension) {
  if (!is_finite(value))
    throw NumericRangeError("constant must have finite components");
  auto e = node(ExprKind::Constant, dimension);
  e->constant_ = value;
  return e;
}

ExprPtr make_parameter(int dimension) {
  auto e = node(ExprKind::Parameter, dimension);
  e->has_param_ = true;
  return e;
}

ExprPtr make_sum(std::vector<ExprPtr> children) {
  if (children.empty()) throw DomainError("sum needs at least one term");
  require_dim(children);
  if (children.size() == 1) return children.front();
  bool all_const = true;
  for (const ExprPtr& c : children) all_const = all_const && is_const(c);
  if (all_const) {
    Complex acc{0.0, 0.0};
    for (const ExprPtr& c : children) acc += c->constant_value();
    return make_constant(acc, children.front()->dimension());
  }
  auto e = node(ExprKind::Sum, children.front()->dimension());
  for (const ExprPtr& c : children) e->has_param_ = e->has_param_ || c->has_parameter();
  e->children_ = std::move(children);
  return e;
}

ExprPtr make_product(std::vector<ExprPtr> children) {
  if (children.empty()) throw DomainError("product needs at least one factor");
  require_dim(children);
  if (children.size() == 1) return children.front();
  bool all_const = true;
  for (const ExprPtr& c : children) all_const = all_const && is_const(c);
  if (all_const) {
    Complex acc{1.0, 0.0};
    for (const ExprPtr& c : children) acc *= c->constant_value();
    return make_constant(acc, children.front()->dimension());
  }
  auto e = node(ExprKind::Product, children.front()->dimension());
  for (const ExprPtr& c : children) e->has_param_ = e->has_param_ || c->has_parameter();
  e->children_ = std::move(children);
  return e;
}

ExprPtr make_negate(ExprPtr child) {
  if (is_const(child)) return make_constant(-child->constant_value(), child->dimension());
  if (child->kind() == ExprKind::Negate) return child->children().front();
  auto e = node(ExprKind::Negate, child->dimension());
  e->has_param_ = child->has_parameter();
  e->children_ = {std::move(child)};
  return e;
}

ExprPtr make_int_pow(ExprPtr child, int exponent) {
  if (exponent < 0) throw DomainError("integer power exponent must be >= 0");
  if (exponent == 0) return make_constant(Complex(1.0, 0.0), child->dimension());
  if (exponent == 1) return child;
  if (is_const(child)) {
    Complex v = std::pow(child->constant_value(), exponent);
    if (!is_finite(v)) throw NumericRangeError("constant power overflows");
    return make_constant(v, child->dimension());
  }
  auto e = node(ExprKind::IntegerPower, child->dimension());
  e->int_payload_ = exponent;
  e->has_param_ = child->has_parameter();
  e->children_ = {std::move(child)};
  return e;
}

ExprPtr make_param_pow(ExprPtr child) {
  auto e = node(ExprKind::ParameterPower, child->dimension());
  e->has_param_ = true;
  e->children_ = {std::move(child)};
  return e;
}

ExprPtr make_exp(ExprPtr child) {
  auto e = node(ExprKind::Exp, child->dimension());
  e->has_param_ = child->has_parameter();
  e->children_ = {std::move(child)};
  return e;
}

ExprPtr make_reciprocal(ExprPtr child, bool zero_free_declared) {
  if (!zero_free_declared)
    throw DomainError("reciprocal requires a zero-free declaration");
  if (is_const(child)) {
    Complex v = child->constant_value();
    if (std::norm(v) == 0.0)
      throw NumericRangeError("reciprocal of the zero constant");
    return make_constant(Complex(1.0, 0.0) / v, child->dimension());
  }
  auto e = node(ExprKind::Reciprocal, child->dimension());
  e->has_param_ = child->has_parameter();
  e->children_ = {std::move(child)};
  return e;
}

ExprPtr affine_reparam(ExprPtr f, CPoint center, double scale) {
  if (static_cast<int>(center.size()) != f->dimension())
    throw DomainError("affine center dimension mismatch");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw DomainError("affine scale must be positive and finite");
  if (!is_finite(center))
    throw NumericRangeError("affine center must have finite components");
  if (is_const(f)) return f;
  if (scale == 1.0 && norm_sq(center) == 0.0) return f;
  if (f->kind() == ExprKind::AffineSubstitution) {
    // f(w) = g(b + s w), so f(a + r z) = g((b + s a) + (s r) z).
    const ExprPtr& g = f->children().front();
    CPoint composed = f->center();
    for (std::size_t k = 0; k < composed.size(); ++k)
      composed[k] += f->scale() * center[k];
    return affine_reparam(g, std::move(composed), f->scale() * scale);
  }
  auto e = node(ExprKind::AffineSubstitution, f->dimension());
  e->scale_ = scale;
  e->center_ = std::move(center);
  e->has_param_ = f->has_parameter();
  e->children_ = {std::move(f)};
  return e;
}

ExprPtr make_scalar_multiple(ExprPtr f, double coefficient) {
  if (!(coefficient > 0.0) || !std::isfinite(coefficient))
    throw DomainError("scalar multiple coefficient must be positive and finite");
  if (coefficient == 1.0) return f;
  if (is_const(f))
    return make_constant(coefficient * f->constant_value(), f->dimension());
  if (f->kind() == ExprKind::ScalarMultiple) {
    return make_scalar_multiple(f->children().front(), coefficient * f->scale());
  }
  auto e = node(ExprKind::ScalarMultiple, f->dimension());
  e->scale_ = coefficient;
  e->has_param_ = f->has_parameter();
  e->children_ = {std::move(f)};
  return e;
}

ExprPtr scale_by_power(ExprPtr f, double r, double alpha) {
  if (!(r > 0.0)) throw DomainError("scale_by_power requires r > 0");
  if (alpha == 0.0) return f;
  const double coeff = std::pow(r, alpha);
  if (!std::isfinite(coeff) || coeff <= 0.0)
    throw NumericRangeError("r^alpha left the double range");
  return make_scalar_multiple(std::move(f), coeff);
}

namespace {

Jet jet_rec(const Expr& f, const CPoint& z) {
  const std::size_t n = z.size();
  switch (f.kind()) {
    case ExprKind::Variable: {
      Jet j{z[f.variable_index()], std::vector<Complex>(n, Complex{})};
      j.grad[f.variable_index()] = Complex(1.0, 0.0);
      return j;
    }
    case ExprKind::Constant:
      return Jet{f.constant_value(), std::vector<Complex>(n, Complex{})};
    case ExprKind::Parameter:
    case ExprKind::ParameterPower:
      throw DomainError("cannot evaluate an uninstantiated parameter symbol");
    case ExprKind::Sum: {
      Jet acc{Complex{}, std::vector<Complex>(n, Complex{})};
      for (const ExprPtr& c : f.children()) {
        Jet cj = jet_rec(*c, z);
        acc.value += cj.value;
        for (std::size_t k = 0; k < n; ++k) acc.grad[k] += cj.grad[k];
      }
      return acc;
    }
    case ExprKind::Product: {
      Jet acc{Complex(1.0, 0.0), std::vector<Complex>(n, Complex{})};
      for (const ExprPtr& c : f.children()) {
        Jet cj = jet_rec(*c, z);
        for (std::size_t k = 0; k < n; ++k)
          acc.grad[k] = acc.grad[k] * cj.value + acc.value * cj.grad[k];
        acc.value *= cj.value;
      }
      return acc;
    }
    case ExprKind::Negate: {
      Jet cj = jet_rec(*f.children().front(), z);
      cj.value = -cj.value;
      for (Complex& g : cj.grad) g = -g;
      return cj;
    }
    case ExprKind::IntegerPower: {
      Jet cj = jet_rec(*f.children().front(), z);
      const int k = f.exponent();
      const Complex p = std::pow(cj.value, k - 1);
      const Complex dk(static_cast<double>(k), 0.0);
      for (Complex& g : cj.grad) g *= dk * p;
      cj.value = p * cj.value;
      return cj;
    }
    case ExprKind::Exp: {
      Jet cj = jet_rec(*f.children().front(), z);
      const Complex e = std::exp(cj.value);
      cj.value = e;
      for (Complex& g : cj.grad) g *= e;
      return cj;
    }
    case ExprKind::Reciprocal: {
      Jet cj = jet_rec(*f.children().front(), z);
      const Complex r = Complex(1.0, 0.0) / cj.value;
      cj.value = r;
      const Complex d = -r * r;
      for (Complex& g : cj.grad) g *= d;
      return cj;
    }
    case ExprKind::AffineSubstitution: {
      CPoint w = f.center();
      for (std::size_t k = 0; k < n; ++k) w[k] += f.scale() * z[k];
      Jet cj = jet_rec(*f.children().front(), w);
      for (Complex& g : cj.grad) g *= f.scale();
      return cj;
    }
    case ExprKind::ScalarMultiple: {
      Jet cj = jet_rec(*f.children().front(), z);
      cj.value *= f.scale();
      for (Complex& g : cj.grad) g *= f.scale();
      return cj;
    }
  }
  throw DomainError("unknown expression node");
}

Complex value_rec(const Expr& f, const CPoint& z) {
  switch (f.kind()) {
    case ExprKind::Variable:
      return z[f.variable_index()];
    case ExprKind::Constant:
      return f.constant_value();
    case ExprKind::Parameter:
    case ExprKind::ParameterPower:
      throw DomainError("cannot evaluate an uninstantiated parameter symbol");
    case ExprKind::Sum: {
      Complex acc{};
      for (const ExprPtr& c : f.children()) acc += value_rec(*c, z);
      return acc;
    }
    case ExprKind::Product: {
      Complex acc(1.0, 0.0);
      for (const ExprPtr& c : f.children()) acc *= value_rec(*c, z);
      return acc;
    }
    case ExprKind::Negate:
      return -value_rec(*f.children().front(), z);
    case ExprKind::IntegerPower:
      return std::pow(value_rec(*f.children().front(), z), f.exponent());
    case ExprKind::Exp:
      return std::exp(value_rec(*f.children().front(), z));
    case ExprKind::Reciprocal:
      return Complex(1.0, 0.0) / value_rec(*f.children().front(), z);
    case ExprKind::AffineSubstitution: {
      CPoint w = f.center();
      for (std::size_t k = 0; k < w.size(); ++k) w[k] += f.scale() * z[k];
      return value_rec(*f.children().front(), w);
    }
    case ExprKind::ScalarMultiple:
      return f.scale() * value_rec(*f.children().front(), z);
  }
  throw DomainError("unknown expression node");
}

void require_point(const Expr& f, const CPoint& z) {
  if (static_cast<int>(z.size()) != f.dimension())
    throw DomainError("evaluation point dimension mismatch");
}

}  // namespace

Complex evaluate(const Expr& f, const CPoint& z) {
  require_point(f, z);
  Complex v = value_rec(f, z);
  if (!is_finite(v))
    throw NumericRangeError("evaluation produced a non-finite value");
  return v;
}

Jet eval_jet(const Expr& f, const CPoint& z) {
  require_point(f, z);
  Jet j = jet_rec(f, z);
  if (!is_finite(j.value) || !is_finite(j.grad))
    throw NumericRangeError("evaluation produced a non-finite value or gradient");
  return j;
}

std::vector<Complex> gradient(const Expr& f, const CPoint& z) {
  return eval_jet(f, z).grad;
}

ExprPtr instantiate(const FamilySpec& family, long j) {
  if (j < 1) throw DomainError("family index j must be >= 1");
  if (!family.tmpl) throw DomainError("family has no template expression");
  struct Subst {
    long j;
    ExprPtr apply(const ExprPtr& e) {
      if (!e->has_parameter()) return e;
      switch (e->kind()) {
        case ExprKind::Parameter:
          return make_constant(Complex(static_cast<double>(j), 0.0), e->dimension());
        case ExprKind::Sum:
        case ExprKind::Product: {
          std::vector<ExprPtr> cs;
          cs.reserve(e->children().size());
          for (const ExprPtr& c : e->children()) cs.push_back(apply(c));
          return e->kind() == ExprKind::Sum ? make_sum(std::move(cs))
                                            : make_product(std::move(cs));
        }
        case ExprKind::Negate:
          return make_negate(apply(e->children().front()));
        case ExprKind::IntegerPower:
          return make_int_pow(apply(e->children().front()), e->exponent());
        case ExprKind::ParameterPower:
          return make_int_pow(apply(e->children().front()), static_cast<int>(j));
        case ExprKind::Exp:
          return make_exp(apply(e->children().front()));
        case ExprKind::Reciprocal:
          return make_reciprocal(apply(e->children().front()), true);
        case ExprKind::AffineSubstitution:
          return affine_reparam(apply(e->children().front()), e->center(), e->scale());
        case ExprKind::ScalarMultiple:
          return make_scalar_multiple(apply(e->children().front()), e->scale());
        default:
          return e;
      }
    }
  };
  return Subst{j}.apply(family.tmpl);
}

void check_zero_free(const FamilySpec& family, long j, const Expr& instance,
                     std::size_t samples, double floor) {
  if (!family.zero_free) return;
  double min_abs = std::numeric_limits<double>::infinity();
  for (const CPoint& p : ball_samples(family.domain, samples)) {
    min_abs = std::min(min_abs, std::abs(evaluate(instance, p)));
    if (min_abs < floor) break;
  }
  if (min_abs < floor) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "zero-free declaration fails sampling at j=%ld: min |f_j| = %.3e",
                  j, min_abs);
    throw ZeroFreeViolation(buf);
  }
}

ExprPtr reciprocal(const FamilySpec& family, ExprPtr f) {
  if (!family.zero_free)
    throw DomainError("reciprocal requires the family to declare zero_free");
  return make_reciprocal(std::move(f), true);
}

}  // namespace zrescale
