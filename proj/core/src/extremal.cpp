#include "grouplim/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>

#include "grouplim/error.hpp"
#include "grouplim/parallel.hpp"
#include "grouplim/random.hpp"

namespace grouplim {
namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double mean_product(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s / static_cast<double>(a.size());
}

void require_delta(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in [0,1]");
}

struct RunResult {
  std::vector<double> f;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::pair<int, double>> trace;
};

// Projected gradient descent with Armijo backtracking. The first trial step
// of each line search is opts.init_step on the first iteration and the
// Barzilai-Borwein step s.s / s.y afterwards (init_step when s.y <= 0).
RunResult descend(const ConfigSystem& L, const GroupSpec& G, std::vector<double> f, double delta,
                  const MinimizeOptions& opts) {
  RunResult run;
  double t = density_real(L, G, f, opts.density);
  std::vector<double> g = density_gradient(L, G, f, opts.density);
  run.trace.emplace_back(0, t);
  double step = opts.init_step;
  const std::size_t n = f.size();
  std::vector<double> trial(n), s(n), y(n);
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    run.grad_norm = projected_gradient_norm(f, g, delta);
    if (run.grad_norm <= opts.tol) {
      run.converged = true;
      break;
    }
    bool accepted = false;
    double tt = t;
    for (double a = step; a >= 1e-18; a *= opts.shrink) {
      std::vector<double> moved(n);
      for (std::size_t i = 0; i < n; ++i) moved[i] = f[i] - a * g[i];
      trial = project_box_mean(moved, delta);
      for (std::size_t i = 0; i < n; ++i) s[i] = trial[i] - f[i];
      const double decrease = mean_product(g, s);
      tt = density_real(L, G, trial, opts.density);
      if (tt <= t + opts.armijo_c * decrease) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    std::vector<double> g_new = density_gradient(L, G, trial, opts.density);
    for (std::size_t i = 0; i < n; ++i) y[i] = g_new[i] - g[i];
    const double sy = mean_product(s, y);
    const double ss = mean_product(s, s);
    step = sy > 0.0 ? std::clamp(ss / sy, 1e-10, 1e10) : opts.init_step;
    f.swap(trial);
    g.swap(g_new);
    t = tt;
    run.trace.emplace_back(it + 1, t);
  }
  run.iterations = it;
  run.grad_norm = projected_gradient_norm(f, g, delta);
  run.converged = run.converged || run.grad_norm <= opts.tol;
  run.value = t;
  run.f = std::move(f);
  return run;
}

}  // namespace

std::vector<double> density_gradient(const ConfigSystem& L, const GroupSpec& G, std::span<const double> f,
                                     const DensityOptions& opts) {
  const std::size_t N = G.order();
  if (f.size() != N) throw ValidationError("value table does not match group order");
  const std::size_t n = L.arity();
  const std::size_t k = L.size();
  double evals = 1.0;
  for (std::size_t m = 0; m < n; ++m) evals *= static_cast<double>(N);
  if (evals * static_cast<double>(k) > static_cast<double>(opts.budget)) {
    throw BudgetError("gradient needs " + std::to_string(evals) + " tuples x " + std::to_string(k) +
                      " forms, above the budget");
  }
  const FiniteIndexer ix(G);
  std::vector<std::vector<std::uint32_t>> scaled(n * k);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t i = 0; i < k; ++i) scaled[m * k + i] = ix.scale_table(L.form(i).coeffs[m]);
  }
  std::vector<double> grad(N, 0.0);
  std::vector<std::size_t> x(n, 0), part((n + 1) * k, 0), y(k);
  std::vector<double> prefix(k + 1), suffix(k + 1);
  for (std::size_t d = 0; d < n; ++d) {
    for (std::size_t i = 0; i < k; ++i) part[(d + 1) * k + i] = ix.add(part[d * k + i], scaled[d * k + i][0]);
  }
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) y[i] = part[n * k + i];
    prefix[0] = 1.0;
    for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] * f[y[i]];
    suffix[k] = 1.0;
    for (std::size_t i = k; i-- > 0;) suffix[i] = suffix[i + 1] * f[y[i]];
    for (std::size_t i = 0; i < k; ++i) grad[y[i]] += prefix[i] * suffix[i + 1];
    std::size_t d = n;
    while (d-- > 0) {
      if (++x[d] < N) break;
      x[d] = 0;
    }
    if (d == static_cast<std::size_t>(-1)) break;
    for (std::size_t dd = d; dd < n; ++dd) {
      for (std::size_t i = 0; i < k; ++i) part[(dd + 1) * k + i] = ix.add(part[dd * k + i], scaled[dd * k + i][x[dd]]);
    }
  }
  const double scale = static_cast<double>(N) / evals;
  for (double& v : grad) v *= scale;
  return grad;
}

std::vector<double> density_gradient(const ConfigSystem& L, const DenseFn& f, const DensityOptions& opts) {
  if (!f.is_real()) throw ValidationError("density_gradient needs a real-valued function");
  const auto v = f.real_values();
  return density_gradient(L, f.group(), v, opts);
}

std::vector<double> project_box_mean(std::span<const double> v, double delta) {
  require_delta(delta);
  const std::size_t n = v.size();
  if (n == 0) throw ValidationError("cannot project an empty vector");
  if (delta == 0.0) return std::vector<double>(n, 0.0);
  if (delta == 1.0) return std::vector<double>(n, 1.0);
  auto clipped_mean = [&](double tau) {
    double s = 0.0;
    for (double x : v) s += std::clamp(x - tau, 0.0, 1.0);
    return s / static_cast<double>(n);
  };
  double lo = *std::min_element(v.begin(), v.end()) - 1.0;  // mean 1
  double hi = *std::max_element(v.begin(), v.end());        // mean 0
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (clipped_mean(mid) > delta ? lo : hi) = mid;
  }
  const double tau = 0.5 * (lo + hi);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::clamp(v[i] - tau, 0.0, 1.0);
  // Spread the residual of the bisection over the free coordinates.
  for (int pass = 0; pass < 3; ++pass) {
    const double residual = delta - mean_of(u);
    if (residual == 0.0) break;
    std::size_t free = 0;
    for (double x : u) free += (x > 0.0 && x < 1.0);
    if (free == 0) break;
    const double shift = residual * static_cast<double>(n) / static_cast<double>(free);
    for (double& x : u) {
      if (x > 0.0 && x < 1.0) x = std::clamp(x + shift, 0.0, 1.0);
    }
  }
  return u;
}

bool is_prime(Int p) {
  if (p < 2) return false;
  for (Int d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

double projected_gradient_norm(std::span<const double> f, std::span<const double> grad, double delta) {
  std::vector<double> moved(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) moved[i] = f[i] - grad[i];
  const auto p = project_box_mean(moved, delta);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += (f[i] - p[i]) * (f[i] - p[i]);
  return std::sqrt(s / static_cast<double>(f.size()));
}

OptResult minimize_density(const ConfigSystem& L, Int p, double delta, const MinimizeOptions& opts) {
  require_delta(delta);
  if (p < 2) throw ValidationError("group order must be at least 2");
  if (!opts.allow_composite && !is_prime(p)) {
    throw ValidationError(std::to_string(p) + " is not prime; the minimization family is Z_p for prime p");
  }
  if (opts.restarts < 0) throw ValidationError("restarts must be nonnegative");
  const GroupSpec G = make_group({p});
  const auto N = static_cast<std::size_t>(p);
  const int runs = opts.restarts + 1;
  std::vector<std::optional<RunResult>> results(static_cast<std::size_t>(runs));
  parallel_for(static_cast<std::size_t>(runs), [&](std::size_t r) {
    std::vector<double> start(N, delta);
    if (r > 0) {
      for (std::size_t a = 0; a < N; ++a) start[a] = counter_uniform(opts.seed, r, a);
      start = project_box_mean(start, delta);
    }
    results[r] = descend(L, G, std::move(start), delta, opts);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r) {
    if (results[r]->value < results[best]->value) best = r;
  }
  RunResult& win = *results[best];
  OptResult out{DenseFn::from_real(G, win.f), 0.0, 0.0, 0, 0, 0, false, {}};
  out.value = density_brute(L, out.f_star, opts.density).real();
  out.grad_norm = win.grad_norm;
  out.restarts_used = runs;
  out.best_run = static_cast<int>(best);
  out.iterations = win.iterations;
  out.converged = win.converged;
  out.trace = std::move(win.trace);
  return out;
}

std::vector<RhoPoint> rho_curve(const ConfigSystem& L, Int p, std::span<const double> deltas,
                                const MinimizeOptions& opts) {
  std::vector<RhoPoint> curve;
  curve.reserve(deltas.size());
  for (double d : deltas) {
    const OptResult r = minimize_density(L, p, d, opts);
    curve.push_back({d, r.value, r.value, r.grad_norm, false});
  }
  // rho is nondecreasing in delta, so each value also bounds every smaller
  // delta from above.
  std::vector<std::size_t> order(curve.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return curve[a].delta < curve[b].delta; });
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t t = order.size(); t-- > 0;) {
    RhoPoint& pt = curve[order[t]];
    running = std::min(running, pt.value);
    pt.monotone = running;
    pt.violation = pt.value > pt.monotone;
  }
  return curve;
}

std::string rho_curve_csv(std::span<const RhoPoint> curve) {
  std::ostringstream os;
  os << "delta,value,monotone,grad_norm,violation\n";
  char buf[160];
  for (const auto& pt : curve) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d\n", pt.delta, pt.value, pt.monotone, pt.grad_norm,
                  pt.violation ? 1 : 0);
    os << buf;
  }
  return os.str();
}

}  // namespace grouplim
