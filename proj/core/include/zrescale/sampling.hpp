#pragma once

#include <cstddef>
#include <vector>

#include "zrescale/types.hpp"

namespace zrescale {

/// Van der Corput radical inverse of i in the given base.
double radical_inverse(unsigned base, unsigned long long i);

/// Halton point #i in [0,1)^d (bases = first d primes, index starts at 1).
std::vector<double> halton_point(std::size_t d, unsigned long long i);

/// Low-discrepancy grid over a ball in C^n, sampled in the 2n real
/// coordinates: per_dim^(2n) Halton points in the bounding cube with points
/// outside the ball discarded. The ball center is always the first entry,
/// so optimizers probing the grid never miss it.
std::vector<CPoint> ball_grid(const Ball& ball, std::size_t per_dim);

/// First `count` Halton points that land inside the ball (center prepended).
std::vector<CPoint> ball_samples(const Ball& ball, std::size_t count);

}  // namespace zrescale
