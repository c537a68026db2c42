#include "grouplim/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "grouplim/error.hpp"
#include "grouplim/parallel.hpp"
#include "grouplim/random.hpp"

namespace grouplim {
namespace {

constexpr double kRangeTol = 1e-12;

void require_unit_interval(const DenseFn& f) {
  for (std::size_t a = 0; a < f.size(); ++a) {
    const Complex v = f[a];
    if (std::abs(v.imag()) > kRangeTol || v.real() < -kRangeTol || v.real() > 1.0 + kRangeTol) {
      throw ValidationError("rounding needs values in [0,1]; index " + std::to_string(a) + " holds (" +
                            std::to_string(v.real()) + "," + std::to_string(v.imag()) + ")");
    }
  }
}

// Key stream for choosing which zeros to switch on.
constexpr std::uint64_t kAdjustStream = 0xad105e7ULL;

}  // namespace

DenseFn randomized_round(const DenseFn& f, std::uint64_t seed, std::uint64_t stream) {
  require_unit_interval(f);
  std::vector<Complex> h(f.size());
  parallel_for(f.size(), [&](std::size_t a) {
    const double p = std::clamp(f[a].real(), 0.0, 1.0);
    h[a] = counter_uniform(seed, stream, a) < p ? 1.0 : 0.0;
  });
  return DenseFn(f.group(), std::move(h));
}

RoundingResult best_of_round(const DenseFn& f, std::uint64_t seed, int trials) {
  if (trials < 1) throw ValidationError("best-of needs at least one trial");
  std::optional<RoundingResult> best;
  for (int t = 0; t < trials; ++t) {
    DenseFn h = randomized_round(f, seed, static_cast<std::uint64_t>(t));
    std::vector<Complex> diff(f.size());
    for (std::size_t a = 0; a < f.size(); ++a) diff[a] = f[a] - h[a];
    const double dev = u2_fourier(DenseFn(f.group(), std::move(diff)));
    if (!best || dev < best->u2_deviation) {
      best = RoundingResult{std::move(h), dev, seed, static_cast<std::uint64_t>(t), trials};
    }
  }
  return std::move(*best);
}

DenseFn adjust_density(const DenseFn& h, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw ValidationError("target density must lie in [0,1]");
  const std::size_t n = h.size();
  std::size_t ones = 0;
  std::vector<std::size_t> zeros;
  for (std::size_t a = 0; a < n; ++a) {
    const Complex v = h[a];
    if (v == Complex(1.0)) {
      ++ones;
    } else if (v == Complex(0.0)) {
      zeros.push_back(a);
    } else {
      throw ValidationError("adjust_density needs a {0,1}-valued function");
    }
  }
  const double need = delta * static_cast<double>(n);
  if (static_cast<double>(ones) >= need) return h;
  const auto target = static_cast<std::size_t>(std::ceil(need - 1e-9));
  const std::size_t flips = std::min(zeros.size(), target - ones);
  // The `flips` zeros with the smallest keys form a uniform random subset.
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
  keyed.reserve(zeros.size());
  for (std::size_t a : zeros) keyed.emplace_back(counter_bits(seed, kAdjustStream, a), a);
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(flips), keyed.end());
  std::vector<Complex> out(h.values().begin(), h.values().end());
  for (std::size_t t = 0; t < flips; ++t) out[keyed[t].second] = 1.0;
  return DenseFn(h.group(), std::move(out));
}

}  // namespace grouplim
