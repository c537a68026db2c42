#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "grouplim/config_density.hpp"

namespace grouplim {

/// Gradient of t(L, f) for real f with respect to the normalized counting
/// measure: entry v equals |A| * dt/df(v)
///   = sum_i |A| * E_x [L_i(x) = v] prod_{j != i} f(L_j(x)).
/// With this scaling a constant f = delta on Z_p gives k * delta^(k-1) for
/// forms that are uniform on Z_p.
std::vector<double> density_gradient(const ConfigSystem& L, const DenseFn& f, const DensityOptions& opts = {});
std::vector<double> density_gradient(const ConfigSystem& L, const GroupSpec& G, std::span<const double> f,
                                     const DensityOptions& opts = {});

/// Euclidean projection onto {u in [0,1]^N : mean(u) = delta}, computed as
/// clip(v - tau, 0, 1) with tau found by bisection.
std::vector<double> project_box_mean(std::span<const double> v, double delta);

bool is_prime(Int p);

struct MinimizeOptions {
  int restarts = 16;  // random starts, in addition to the constant start
  std::uint64_t seed = 0;
  int max_iter = 5000;
  double tol = 1e-8;  // projected-gradient norm
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double init_step = 1.0;
  bool allow_composite = false;
  DensityOptions density;
};

struct OptResult {
  DenseFn f_star;
  double value = 0.0;
  double grad_norm = 0.0;
  int restarts_used = 0;  // runs performed, including the constant start
  int best_run = 0;       // 0 = constant start, i >= 1 = random restart i
  int iterations = 0;
  bool converged = false;
  std::vector<std::pair<int, double>> trace;  // (iteration, value) of the best run
};

/// Projected-gradient norm sqrt(E[(f - P(f - grad))^2]), the stationarity
/// residual used as stopping rule.
double projected_gradient_norm(std::span<const double> f, std::span<const double> grad, double delta);

/// Local minimization of t(L, f) over f: Z_p -> [0,1] with E f = delta.
/// The result is an upper bound for the minimal density at this p.
OptResult minimize_density(const ConfigSystem& L, Int p, double delta, const MinimizeOptions& opts = {});

struct RhoPoint {
  double delta = 0.0;
  double value = 0.0;      // minimize_density result
  double monotone = 0.0;   // min over grid points at or above delta
  double grad_norm = 0.0;
  bool violation = false;  // value > monotone: the raw curve decreased here
};

std::vector<RhoPoint> rho_curve(const ConfigSystem& L, Int p, std::span<const double> deltas,
                                const MinimizeOptions& opts = {});

std::string rho_curve_csv(std::span<const RhoPoint> curve);

}  // namespace grouplim
