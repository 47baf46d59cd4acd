#include "zrescale/sharp.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "zrescale/errors.hpp"

namespace zrescale {

namespace {

double pairing_abs(const std::vector<Complex>& grad, const CPoint& v) {
  Complex acc{};
  for (std::size_t k = 0; k < grad.size(); ++k) acc += grad[k] * v[k];
  return std::abs(acc);
}

// Platform-stable standard normals: Box-Muller over mt19937_64 draws.
class GaussianSource {
 public:
  explicit GaussianSource(unsigned long long seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = unit_open();
    const double u2 = unit_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  double unit_open() {  // (0, 1)
    return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

double levi_form(const Expr& f, const CPoint& z, const CPoint& v) {
  if (v.size() != z.size())
    throw DomainError("direction dimension mismatch");
  const Jet j = eval_jet(f, z);
  const double den = 1.0 + std::norm(j.value);
  const double num = pairing_abs(j.grad, v);
  return (num * num) / (den * den);
}

SharpValue sharp(const Expr& f, const CPoint& z) {
  const Jet j = eval_jet(f, z);
  SharpValue s;
  s.abs_f = std::abs(j.value);
  double g2 = 0.0;
  for (const Complex& c : j.grad) g2 += std::norm(c);
  s.gradient_norm = std::sqrt(g2);
  s.value = s.gradient_norm / (1.0 + s.abs_f * s.abs_f);
  if (!std::isfinite(s.value))
    throw NumericRangeError("sharp derivative left the double range");
  return s;
}

double sharp_via_direction_sup(const Expr& f, const CPoint& z,
                               int num_samples, unsigned long long seed) {
  if (num_samples < 1) throw DomainError("num_samples must be >= 1");
  const Jet j = eval_jet(f, z);
  const std::size_t n = z.size();
  double g2 = 0.0;
  for (const Complex& c : j.grad) g2 += std::norm(c);
  if (g2 == 0.0) return 0.0;

  const double den = 1.0 + std::norm(j.value);
  const double gnorm = std::sqrt(g2);

  // Analytic maximizer v* = conj(Df)/|Df|.
  CPoint v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = std::conj(j.grad[k]) / gnorm;
  double best = pairing_abs(j.grad, v) / den;

  GaussianSource gauss(seed);
  for (int s = 0; s < num_samples; ++s) {
    double vnorm2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      v[k] = Complex(gauss.next(), gauss.next());
      vnorm2 += std::norm(v[k]);
    }
    if (vnorm2 == 0.0) continue;
    const double inv = 1.0 / std::sqrt(vnorm2);
    for (Complex& c : v) c *= inv;
    best = std::max(best, pairing_abs(j.grad, v) / den);
  }
  return best;
}

}  // namespace zrescale
