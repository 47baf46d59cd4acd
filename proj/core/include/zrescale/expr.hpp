#pragma once

#include <memory>
#include <string>
#include <vector>

#include "zrescale/types.hpp"

namespace zrescale {

enum class ExprKind {
  Variable,
  Constant,
  Parameter,  // the family index symbol, replaced by instantiate()
  Sum,
  Product,
  Negate,
  IntegerPower,
  ParameterPower,  // child^j, becomes IntegerPower at instantiation
  Exp,
  Reciprocal,
  AffineSubstitution,  // child evaluated at center + scale * z
  ScalarMultiple,      // positive real coefficient * child
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable node of a holomorphic expression tree over C^n.
///
/// Trees are built through the factory functions below, which validate
/// invariants (variable index < dimension, nonnegative exponents, positive
/// scales) and fold constant subtrees. Nodes are shared freely; evaluation
/// is pure, so concurrent use needs no synchronization.
class Expr {
 public:
  ExprKind kind() const { return kind_; }
  int dimension() const { return dim_; }
  bool has_parameter() const { return has_param_; }

  // Payload accessors; each is meaningful only for the matching kind.
  int variable_index() const { return int_payload_; }   // Variable (0-based)
  int exponent() const { return int_payload_; }         // IntegerPower
  Complex constant_value() const { return constant_; }  // Constant
  double scale() const { return scale_; }      // AffineSubstitution / ScalarMultiple
  const CPoint& center() const { return center_; }      // AffineSubstitution
  const std::vector<ExprPtr>& children() const { return children_; }

  struct Private {};  // construction goes through the factories
  Expr(Private, ExprKind kind, int dim) : kind_(kind), dim_(dim) {}

 private:
  ExprKind kind_;
  int dim_;
  bool has_param_ = false;
  int int_payload_ = 0;
  Complex constant_{0.0, 0.0};
  double scale_ = 1.0;
  CPoint center_;
  std::vector<ExprPtr> children_;

  friend ExprPtr make_variable(int, int);
  friend ExprPtr make_constant(Complex, int);
  friend ExprPtr make_parameter(int);
  friend ExprPtr make_sum(std::vector<ExprPtr>);
  friend ExprPtr make_product(std::vector<ExprPtr>);
  friend ExprPtr make_negate(ExprPtr);
  friend ExprPtr make_int_pow(ExprPtr, int);
  friend ExprPtr make_param_pow(ExprPtr);
  friend ExprPtr make_exp(ExprPtr);
  friend ExprPtr make_reciprocal(ExprPtr, bool);
  friend ExprPtr affine_reparam(ExprPtr, CPoint, double);
  friend ExprPtr make_scalar_multiple(ExprPtr, double);
};

// Factories. All throw DomainError on invariant violations.
ExprPtr make_variable(int index, int dimension);  // index is 0-based
ExprPtr make_constant(Complex value, int dimension);
ExprPtr make_parameter(int dimension);
ExprPtr make_sum(std::vector<ExprPtr> children);
ExprPtr make_product(std::vector<ExprPtr> children);
ExprPtr make_negate(ExprPtr child);
ExprPtr make_int_pow(ExprPtr child, int exponent);  // exponent >= 0
ExprPtr make_param_pow(ExprPtr child);              // child^j
ExprPtr make_exp(ExprPtr child);

/// Reciprocal 1/child. Construction refuses zero_free_declared == false:
/// the caller owns the assertion that the child never vanishes.
ExprPtr make_reciprocal(ExprPtr child, bool zero_free_declared);

/// h with h(z) = f(center + scale * z). Nested substitutions compose into a
/// single node; scale must be > 0.
ExprPtr affine_reparam(ExprPtr f, CPoint center, double scale);

/// coefficient * f with coefficient > 0.
ExprPtr make_scalar_multiple(ExprPtr f, double coefficient);

/// r^alpha * f. alpha == 0 returns f unchanged; throws NumericRangeError
/// when r^alpha leaves the double range.
ExprPtr scale_by_power(ExprPtr f, double r, double alpha);

/// Value and holomorphic gradient at one point.
struct Jet {
  Complex value;
  std::vector<Complex> grad;
};

Complex evaluate(const Expr& f, const CPoint& z);
Jet eval_jet(const Expr& f, const CPoint& z);
std::vector<Complex> gradient(const Expr& f, const CPoint& z);

inline Complex evaluate(const ExprPtr& f, const CPoint& z) { return evaluate(*f, z); }
inline Jet eval_jet(const ExprPtr& f, const CPoint& z) { return eval_jet(*f, z); }
inline std::vector<Complex> gradient(const ExprPtr& f, const CPoint& z) {
  return gradient(*f, z);
}

/// Renders the tree in the input grammar; parse(to_string(e)) evaluates
/// identically to e. AffineSubstitution and ScalarMultiple nodes are
/// printed by textual substitution since the grammar has no syntax for them.
std::string to_string(const Expr& f);
inline std::string to_string(const ExprPtr& f) { return to_string(*f); }

/// Parses the expression grammar:
///   expr   := term (('+' | '-') term)*
///   term   := factor (('*' | '/') factor)*
///   factor := base ('^' (UINT | 'j'))?
///   base   := 'z' UINT | NUMBER | 'i' | 'j' | '(' expr ')'
///           | 'exp' '(' expr ')' | 'inv' '(' expr ')'
/// '/' requires a constant-or-j-only denominator or an inv() factor;
/// 'inv' declares the argument zero-free; '^j' makes the family index the
/// exponent. Throws ParseError with position.
ExprPtr parse_expression(const std::string& text, int dimension);

/// A rule j -> f_j: a template expression with the parameter symbol j,
/// a domain ball, and the user's zero-free assertion.
struct FamilySpec {
  int dimension = 1;
  ExprPtr tmpl;
  Ball domain;
  bool zero_free = false;
};

/// Replaces every parameter symbol by the integer j and folds constants.
/// The result contains no parameter symbols.
ExprPtr instantiate(const FamilySpec& family, long j);

/// Sampling spot-check of a zero-free declaration: min |f_j| over
/// `samples` low-discrepancy domain points must stay above `floor`.
/// Throws ZeroFreeViolation otherwise. No-op when the family is not
/// declared zero-free.
void check_zero_free(const FamilySpec& family, long j, const Expr& instance,
                     std::size_t samples = 10000, double floor = 1e-12);

/// 1/f for a member of a zero-free family; refuses when the family does
/// not declare zero_free.
ExprPtr reciprocal(const FamilySpec& family, ExprPtr f);

}  // namespace zrescale
