#include <cctype>
#include <charconv>
#include <cstdio>
#include <string>
#include <vector>

#include "zrescale/errors.hpp"
#include "zrescale/expr.hpp"

namespace zrescale {

namespace {

// ---------------------------------------------------------------------------
// Parser: recursive descent over the grammar in expr.hpp.

class Parser {
 public:
  Parser(const std::string& text, int dimension) : text_(text), dim_(dimension) {
    if (dimension < 1) throw DomainError("dimension must be >= 1");
  }

  ExprPtr run() {
    ExprPtr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  ExprPtr parse_expr() {
    std::vector<ExprPtr> terms;
    terms.push_back(parse_term());
    for (;;) {
      if (eat('+')) {
        terms.push_back(parse_term());
      } else if (eat('-')) {
        terms.push_back(make_negate(parse_term()));
      } else {
        break;
      }
    }
    return make_sum(std::move(terms));
  }

  // '/' denominators must be constant-or-j-only or an inv() factor; anything
  // else needs an explicit zero-free declaration through inv().
  ExprPtr parse_term() {
    std::vector<ExprPtr> factors;
    factors.push_back(parse_factor());
    for (;;) {
      if (eat('*')) {
        factors.push_back(parse_factor());
      } else if (eat('/')) {
        const std::size_t slash_pos = pos_;
        ExprPtr den = parse_factor();
        if (contains_variable(*den) && den->kind() != ExprKind::Reciprocal) {
          throw ParseError(
              "division by a non-constant subexpression requires inv(...)",
              slash_pos);
        }
        factors.push_back(make_reciprocal(std::move(den), true));
      } else {
        break;
      }
    }
    return make_product(std::move(factors));
  }

  ExprPtr parse_factor() {
    ExprPtr base = parse_base();
    if (eat('^')) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == 'j') {
        ++pos_;
        return make_param_pow(std::move(base));
      }
      return make_int_pow(std::move(base), parse_uint("exponent"));
    }
    return base;
  }

  ExprPtr parse_base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_word();
    fail(std::string("unexpected character '") + c + "'");
  }

  ExprPtr parse_word() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isalpha(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    const std::string word = text_.substr(start, pos_ - start);
    if (word == "exp" || word == "inv") {
      if (!eat('(')) fail("expected '(' after '" + word + "'");
      ExprPtr arg = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return word == "exp" ? make_exp(std::move(arg))
                           : make_reciprocal(std::move(arg), true);
    }
    if (word == "i") return make_constant(Complex(0.0, 1.0), dim_);
    if (word == "j") return make_parameter(dim_);
    if (word == "z") {
      if (pos_ >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        fail("expected a variable index after 'z'");
      const int index = parse_uint("variable index");
      if (index < 1 || index > dim_) {
        pos_ = start;
        fail("variable index out of range");
      }
      return make_variable(index - 1, dim_);
    }
    pos_ = start;
    fail("unknown identifier '" + word + "'");
  }

  ExprPtr parse_number() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec == std::errc::result_out_of_range)
      fail("numeric literal out of double range");
    if (ec != std::errc{} || ptr == begin) fail("malformed numeric literal");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return make_constant(Complex(value, 0.0), dim_);
  }

  int parse_uint(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    unsigned long v = 0;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<unsigned long>(text_[pos_] - '0');
      if (v > 1000000000ul) fail(std::string(what) + " too large");
      ++pos_;
    }
    if (pos_ == start) fail(std::string("expected ") + what);
    return static_cast<int>(v);
  }

  static bool contains_variable(const Expr& e) {
    if (e.kind() == ExprKind::Variable) return true;
    for (const ExprPtr& c : e.children())
      if (contains_variable(*c)) return true;
    return false;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int dim_;
};

// ---------------------------------------------------------------------------
// Printer. Emits only grammar-conformant text: no unary minus (negation is
// written 0 - x), reciprocals as inv(), and affine substitutions expanded
// textually into each variable occurrence.

enum Prec { kAdd = 0, kMul = 1, kAtom = 2 };

std::string fmt_real(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Bare nonnegative real, "i", or a fully parenthesized composite; safe to
// splice into any context.
std::string fmt_constant(Complex c) {
  const double re = c.real() == 0.0 ? 0.0 : c.real();
  const double im = c.imag() == 0.0 ? 0.0 : c.imag();
  if (im == 0.0) {
    if (re >= 0.0) return fmt_real(re);
    return "(0 - " + fmt_real(-re) + ")";
  }
  std::string s = "(";
  if (re < 0.0)
    s += "0 - " + fmt_real(-re);
  else
    s += fmt_real(re);
  if (im < 0.0)
    s += " - " + fmt_real(-im) + "*i";
  else
    s += " + " + fmt_real(im) + "*i";
  return s + ")";
}

class Printer {
 public:
  explicit Printer(int dim) {
    vars_.reserve(dim);
    for (int k = 0; k < dim; ++k) vars_.push_back("z" + std::to_string(k + 1));
  }

  std::string print(const Expr& e, Prec prec) {
    switch (e.kind()) {
      case ExprKind::Variable:
        return vars_[e.variable_index()];
      case ExprKind::Parameter:
        return "j";
      case ExprKind::Constant:
        return fmt_constant(e.constant_value());
      case ExprKind::Sum: {
        std::string s;
        bool first = true;
        for (const ExprPtr& c : e.children()) {
          if (c->kind() == ExprKind::Negate) {
            if (first) s += "0";
            s += " - " + print(*c->children().front(), kMul);
          } else {
            if (!first) s += " + ";
            s += print(*c, kMul);
          }
          first = false;
        }
        return prec > kAdd ? "(" + s + ")" : s;
      }
      case ExprKind::Product: {
        std::string s;
        bool first = true;
        for (const ExprPtr& c : e.children()) {
          if (!first) s += " * ";
          s += print(*c, kMul);
          first = false;
        }
        return prec > kMul ? "(" + s + ")" : s;
      }
      case ExprKind::Negate:
        return "(0 - " + print(*e.children().front(), kAdd) + ")";
      case ExprKind::IntegerPower:
        return print(*e.children().front(), kAtom) + "^" +
               std::to_string(e.exponent());
      case ExprKind::ParameterPower:
        return print(*e.children().front(), kAtom) + "^j";
      case ExprKind::Exp:
        return "exp(" + print(*e.children().front(), kAdd) + ")";
      case ExprKind::Reciprocal:
        return "inv(" + print(*e.children().front(), kAdd) + ")";
      case ExprKind::ScalarMultiple: {
        std::string s = fmt_real(e.scale()) + " * " +
                        print(*e.children().front(), kMul);
        return prec > kMul ? "(" + s + ")" : s;
      }
      case ExprKind::AffineSubstitution: {
        std::vector<std::string> saved = vars_;
        for (std::size_t k = 0; k < vars_.size(); ++k) {
          vars_[k] = "(" + fmt_constant(e.center()[k]) + " + " +
                     fmt_real(e.scale()) + " * " + saved[k] + ")";
        }
        std::string s = print(*e.children().front(), prec);
        vars_ = std::move(saved);
        return s;
      }
    }
    throw DomainError("unknown expression node");
  }

 private:
  std::vector<std::string> vars_;
};

}  // namespace

ExprPtr parse_expression(const std::string& text, int dimension) {
  return Parser(text, dimension).run();
}

std::string to_string(const Expr& f) {
  return Printer(f.dimension()).print(f, kAdd);
}

}  // namespace zrescale
