#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "grouplim/error.hpp"
#include "grouplim/extremal.hpp"
#include "oracles.hpp"

namespace gl = grouplim;
using gl::DenseFn;
using gl::GroupSpec;

namespace {

void expect_feasible(std::span<const double> u, double delta, double tol = 1e-10) {
  double s = 0.0;
  for (double x : u) {
    EXPECT_GE(x, -tol);
    EXPECT_LE(x, 1.0 + tol);
    s += x;
  }
  EXPECT_NEAR(s / static_cast<double>(u.size()), delta, tol);
}

// |A| times the central difference of t along the indicator of v.
std::vector<double> fd_gradient(const gl::ConfigSystem& L, const GroupSpec& G, std::vector<double> f, double h = 1e-6) {
  std::vector<double> out(f.size());
  auto eval = [&](const std::vector<double>& v) {
    const DenseFn g = DenseFn::from_real(G, v);
    return oracle::brute_density(L, std::vector<DenseFn>(L.size(), g)).real();
  };
  for (std::size_t v = 0; v < f.size(); ++v) {
    const double keep = f[v];
    f[v] = keep + h;
    const double up = eval(f);
    f[v] = keep - h;
    const double down = eval(f);
    f[v] = keep;
    out[v] = static_cast<double>(f.size()) * (up - down) / (2.0 * h);
  }
  return out;
}

}  // namespace

TEST(Gradient, ConstantOnAp3) {
  const auto L = gl::builtin_config("ap3");
  for (gl::Int p : {5, 11, 31}) {
    for (double d : {0.1, 0.4}) {
      const auto g = gl::density_gradient(L, DenseFn::constant(GroupSpec({p}), d));
      for (double x : g) EXPECT_NEAR(x, 3 * d * d, 1e-13);
    }
  }
}

TEST(Gradient, LinearObjective) {
  std::mt19937_64 rng(1);
  const auto L = gl::make_config({{1}});
  const auto f = oracle::random_real(GroupSpec({9}), rng);
  for (double x : gl::density_gradient(L, f)) EXPECT_NEAR(x, 1.0, 1e-14);
}

TEST(Gradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(2);
  int checked = 0;
  for (const std::string name : {"ap3", "parallelogram", "graph:0-1,1-2,2-0"}) {
    const auto L = gl::builtin_config(name);
    for (const GroupSpec& G : {GroupSpec({11}), GroupSpec({2, 8})}) {
      const int points = name == "ap3" ? 20 : 4;
      for (int t = 0; t < points; ++t) {
        const auto f = oracle::random_real(G, rng).real_values();
        const auto g = gl::density_gradient(L, G, f);
        const auto fd = fd_gradient(L, G, f);
        for (std::size_t v = 0; v < f.size(); ++v) {
          EXPECT_LE(std::abs(g[v] - fd[v]), 1e-5 * std::max(1.0, std::abs(fd[v]))) << name << " " << v;
        }
        ++checked;
      }
    }
  }
  EXPECT_EQ(checked, 56);
}

TEST(Gradient, RejectsComplex) {
  const DenseFn f(GroupSpec({3}), {1.0, gl::Complex(0, 1), 0.0});
  EXPECT_THROW(gl::density_gradient(gl::builtin_config("ap3"), f), gl::ValidationError);
}

TEST(Projection, Examples) {
  const std::vector<double> feasible = {0.2, 0.8, 0.5, 0.5};
  const auto same = gl::project_box_mean(feasible, 0.5);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(same[i], feasible[i], 1e-12);
  const std::vector<double> ones(7, 1.0);
  for (double x : gl::project_box_mean(ones, 0.5)) EXPECT_NEAR(x, 0.5, 1e-12);
  for (double x : gl::project_box_mean(ones, 0.0)) EXPECT_NEAR(x, 0.0, 1e-12);
  for (double x : gl::project_box_mean(std::vector<double>{-3, 4, 0.1}, 1.0)) EXPECT_NEAR(x, 1.0, 1e-12);
}

TEST(Projection, MatchesActiveSetOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> wide(-1.5, 2.5), ud;
  for (int t = 0; t < 200; ++t) {
    const std::size_t N = 1 + static_cast<std::size_t>(t % 8);
    std::vector<double> v(N);
    for (auto& x : v) x = wide(rng);
    const double delta = ud(rng);
    const auto u = gl::project_box_mean(v, delta);
    expect_feasible(u, delta);
    const auto want = oracle::projection_by_active_sets(v, delta);
    ASSERT_EQ(want.size(), N);
    for (std::size_t i = 0; i < N; ++i) EXPECT_NEAR(u[i], want[i], 1e-9) << t;
  }
}

TEST(Projection, Validation) {
  EXPECT_THROW(gl::project_box_mean(std::vector<double>{}, 0.5), gl::ValidationError);
  EXPECT_THROW(gl::project_box_mean(std::vector<double>{0.5}, 1.5), gl::ValidationError);
}

TEST(Prime, Examples) {
  EXPECT_FALSE(gl::is_prime(0));
  EXPECT_FALSE(gl::is_prime(1));
  EXPECT_TRUE(gl::is_prime(2));
  EXPECT_TRUE(gl::is_prime(31));
  EXPECT_FALSE(gl::is_prime(91));
  EXPECT_TRUE(gl::is_prime(1'000'003));
  EXPECT_FALSE(gl::is_prime(1'000'001));
}

TEST(Minimize, ConstantStartValue) {
  gl::MinimizeOptions opts;
  opts.restarts = 0;
  for (const std::string name : {"ap3", "ap4", "parallelogram"}) {
    const auto L = gl::builtin_config(name);
    const auto r = gl::minimize_density(L, 11, 0.3, opts);
    ASSERT_FALSE(r.trace.empty());
    EXPECT_EQ(r.trace.front().first, 0);
    EXPECT_NEAR(r.trace.front().second, std::pow(0.3, static_cast<double>(L.size())), 1e-14) << name;
    EXPECT_EQ(r.best_run, 0);
    EXPECT_EQ(r.restarts_used, 1);
  }
}

TEST(Minimize, ParallelogramHalf) {
  const auto L = gl::builtin_config("parallelogram");
  gl::MinimizeOptions opts;
  opts.restarts = 4;
  const auto r = gl::minimize_density(L, 17, 0.5, opts);
  EXPECT_NEAR(r.value, 1.0 / 16.0, 1e-3);
  EXPECT_GE(r.value, 1.0 / 16.0 - 1e-12);
  // The lower bound delta^4 is the spectral identity t = U2^4 >= |fhat(0)|^4.
  EXPECT_NEAR(r.value, std::pow(gl::u2_fourier(r.f_star), 4), 1e-9);
}

TEST(Minimize, Ap3SmallDelta) {
  const auto L = gl::builtin_config("ap3");
  gl::MinimizeOptions opts;
  opts.restarts = 8;
  const auto r = gl::minimize_density(L, 31, 0.1, opts);
  EXPECT_LE(r.value, 0.001 + 1e-12);
  EXPECT_GE(r.value, 0.0);
  EXPECT_LE(r.grad_norm, 1e-6);
  EXPECT_EQ(r.restarts_used, 9);
}

TEST(Minimize, ResultInvariants) {
  std::mt19937_64 rng(4);
  const auto L = gl::builtin_config("ap3");
  gl::MinimizeOptions opts;
  opts.restarts = 3;
  opts.seed = 12;
  for (double d : {0.05, 0.3, 0.6}) {
    const auto r = gl::minimize_density(L, 13, d, opts);
    const auto vals = r.f_star.real_values();
    expect_feasible(vals, d);
    EXPECT_NEAR(r.value, oracle::brute_density(L, {r.f_star, r.f_star, r.f_star}).real(), 1e-9);
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      EXPECT_LE(r.trace[i].second, r.trace[i - 1].second + 1e-15);
      EXPECT_GT(r.trace[i].first, r.trace[i - 1].first);
    }
    EXPECT_NEAR(r.trace.back().second, r.value, 1e-12);
  }
}

TEST(Minimize, Deterministic) {
  const auto L = gl::builtin_config("ap3");
  gl::MinimizeOptions opts;
  opts.restarts = 5;
  opts.seed = 77;
  const auto a = gl::minimize_density(L, 19, 0.25, opts);
  const auto b = gl::minimize_density(L, 19, 0.25, opts);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.best_run, b.best_run);
  EXPECT_TRUE(std::equal(a.f_star.values().begin(), a.f_star.values().end(), b.f_star.values().begin()));
}

TEST(Minimize, Validation) {
  const auto L = gl::builtin_config("ap3");
  EXPECT_THROW(gl::minimize_density(L, 15, 0.2), gl::ValidationError);
  EXPECT_THROW(gl::minimize_density(L, 1, 0.2), gl::ValidationError);
  EXPECT_THROW(gl::minimize_density(L, 13, 1.2), gl::ValidationError);
  gl::MinimizeOptions opts;
  opts.allow_composite = true;
  opts.restarts = 1;
  EXPECT_NO_THROW(gl::minimize_density(L, 15, 0.2, opts));
  opts.restarts = -1;
  EXPECT_THROW(gl::minimize_density(L, 13, 0.2, opts), gl::ValidationError);
}

TEST(Rho, EndpointsAndConstantBound) {
  const auto L = gl::builtin_config("ap3");
  gl::MinimizeOptions opts;
  opts.restarts = 2;
  std::vector<double> grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  const auto curve = gl::rho_curve(L, 31, grid, opts);
  ASSERT_EQ(curve.size(), grid.size());
  EXPECT_NEAR(curve.front().value, 0.0, 1e-15);
  EXPECT_NEAR(curve.back().value, 1.0, 1e-12);
  for (const auto& pt : curve) {
    EXPECT_LE(pt.value, pt.delta * pt.delta * pt.delta + 1e-12) << pt.delta;
    EXPECT_LE(pt.monotone, pt.value);
    EXPECT_EQ(pt.violation, pt.value > pt.monotone);
  }
  for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_LE(curve[i - 1].monotone, curve[i].monotone);
}

TEST(Rho, CsvLayout) {
  std::vector<gl::RhoPoint> curve = {{0.1, 0.5, 0.25, 1e-9, true}, {0.2, 0.25, 0.25, 0.0, false}};
  const std::string csv = gl::rho_curve_csv(curve);
  EXPECT_EQ(csv, "delta,value,monotone,grad_norm,violation\n"
                 "0.10000000000000001,0.5,0.25,1.0000000000000001e-09,1\n"
                 "0.20000000000000001,0.25,0.25,0,0\n");
}
