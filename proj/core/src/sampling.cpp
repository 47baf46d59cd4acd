#include "zrescale/sampling.hpp"

#include "zrescale/errors.hpp"

namespace zrescale {

namespace {

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
constexpr std::size_t kMaxGridPoints = std::size_t{1} << 24;

CPoint cube_point(const Ball& ball, const std::vector<double>& u) {
  const std::size_t n = ball.dimension();
  CPoint p(n);
  for (std::size_t k = 0; k < n; ++k) {
    p[k] = ball.center[k] + Complex(ball.radius * (2.0 * u[2 * k] - 1.0),
                                    ball.radius * (2.0 * u[2 * k + 1] - 1.0));
  }
  return p;
}

}  // namespace

double radical_inverse(unsigned base, unsigned long long i) {
  const double inv_base = 1.0 / base;
  double f = inv_base;
  double r = 0.0;
  while (i != 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv_base;
  }
  return r;
}

std::vector<double> halton_point(std::size_t d, unsigned long long i) {
  if (d > std::size(kPrimes))
    throw DomainError("halton_point: dimension exceeds the prime table");
  std::vector<double> u(d);
  for (std::size_t k = 0; k < d; ++k) u[k] = radical_inverse(kPrimes[k], i);
  return u;
}

std::vector<CPoint> ball_grid(const Ball& ball, std::size_t per_dim) {
  const std::size_t d = 2 * ball.dimension();
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    if (total > kMaxGridPoints / per_dim)
      throw DomainError("ball_grid: per_dim^(2n) exceeds the point cap");
    total *= per_dim;
  }
  std::vector<CPoint> points;
  points.reserve(total / 2 + 1);
  points.push_back(ball.center);
  for (unsigned long long i = 1; i <= total; ++i) {
    CPoint p = cube_point(ball, halton_point(d, i));
    if (point_distance(p, ball.center) <= ball.radius) points.push_back(std::move(p));
  }
  return points;
}

std::vector<CPoint> ball_samples(const Ball& ball, std::size_t count) {
  const std::size_t d = 2 * ball.dimension();
  std::vector<CPoint> points;
  points.reserve(count + 1);
  points.push_back(ball.center);
  const unsigned long long max_attempts = 200ull * count + 1000ull;
  for (unsigned long long i = 1; i <= max_attempts && points.size() <= count; ++i) {
    CPoint p = cube_point(ball, halton_point(d, i));
    if (point_distance(p, ball.center) <= ball.radius) points.push_back(std::move(p));
  }
  return points;
}

}  // namespace zrescale
