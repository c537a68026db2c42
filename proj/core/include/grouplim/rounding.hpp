#pragma once

#include <cstdint>

#include "grouplim/spectral.hpp"

namespace grouplim {

/// Independent Bernoulli(f(a)) rounding of a [0,1]-valued function. Draw a
/// uses the counter-based stream (seed, stream, a).
DenseFn randomized_round(const DenseFn& f, std::uint64_t seed, std::uint64_t stream = 0);

struct RoundingResult {
  DenseFn h;
  double u2_deviation = 0.0;  // ||f - h||_{U2}
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;   // winning trial
  int trials = 0;
};

/// Best of `trials` independent roundings by U2 deviation (ties: lowest stream).
RoundingResult best_of_round(const DenseFn& f, std::uint64_t seed, int trials = 8);

/// Raises a {0,1}-valued h to ceil(delta |A|) ones by switching uniformly
/// random zeros on; returns h unchanged when mean(h) >= delta already.
DenseFn adjust_density(const DenseFn& h, double delta, std::uint64_t seed);

}  // namespace grouplim
