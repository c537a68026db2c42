#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "grouplim/error.hpp"
#include "grouplim/graphon.hpp"
#include "oracles.hpp"

namespace gl = grouplim;
using gl::Complex;
using gl::DenseFn;
using gl::Graph;
using gl::GroupSpec;

namespace {

// E over all vertex maps of prod_{edges} f(x_i + x_j), no kernel involved.
Complex cayley_hom_oracle(const Graph& H, const DenseFn& f) {
  const GroupSpec& G = f.group();
  const std::size_t N = G.order(), n = H.vertex_count();
  std::vector<std::size_t> x(n, 0);
  Complex acc = 0.0;
  std::size_t count = 0;
  for (;;) {
    Complex prod = 1.0;
    for (const auto& [u, v] : H.edges()) prod *= f.at(gl::add(G.element_at(x[u]), G.element_at(x[v]), G));
    acc += prod;
    ++count;
    std::size_t d = 0;
    while (d < n && ++x[d] == N) x[d++] = 0;
    if (d == n) break;
  }
  return acc / static_cast<double>(count);
}

// Every simple graph on n vertices, as edge subsets of K_n.
std::vector<Graph> all_graphs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pool;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) pool.emplace_back(u, v);
  std::vector<Graph> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << pool.size()); ++mask) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t b = 0; b < pool.size(); ++b)
      if (mask >> b & 1) e.push_back(pool[b]);
    out.emplace_back(n, e);
  }
  return out;
}

DenseFn indicator(const GroupSpec& G, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<double> v(G.order());
  for (auto& x : v) x = coin(rng) ? 1.0 : 0.0;
  return DenseFn::from_real(G, v);
}

}  // namespace

TEST(GraphTest, Validation) {
  EXPECT_THROW(Graph(3, {{0, 0}}), gl::ValidationError);
  EXPECT_THROW(Graph(3, {{0, 3}}), gl::ValidationError);
  EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}}), gl::ValidationError);
  EXPECT_THROW(Graph::cycle(2), gl::ValidationError);
  const Graph g(4, {{3, 1}, {2, 0}});
  ASSERT_EQ(g.edges().size(), 2u);
  EXPECT_EQ(g.edges()[0], (std::pair<std::size_t, std::size_t>{0, 2}));
  EXPECT_EQ(g.edges()[1], (std::pair<std::size_t, std::size_t>{1, 3}));
}

TEST(GraphTest, Families) {
  EXPECT_EQ(Graph::edge().vertex_count(), 2u);
  EXPECT_EQ(Graph::path(5).edges().size(), 4u);
  EXPECT_EQ(Graph::cycle(5).edges().size(), 5u);
  EXPECT_EQ(Graph::complete(5).edges().size(), 10u);
  const Graph u = gl::disjoint_union(Graph::cycle(3), Graph::edge());
  EXPECT_EQ(u.vertex_count(), 5u);
  EXPECT_EQ(u.edges().back(), (std::pair<std::size_t, std::size_t>{3, 4}));
}

TEST(GraphTest, LineConfig) {
  const auto L = gl::line_config(Graph::cycle(3));
  ASSERT_EQ(L.size(), 3u);
  EXPECT_EQ(L.form(0).coeffs, (std::vector<gl::Int>{1, 1, 0}));
  EXPECT_EQ(L.form(1).coeffs, (std::vector<gl::Int>{1, 0, 1}));
  EXPECT_EQ(L.form(2).coeffs, (std::vector<gl::Int>{0, 1, 1}));
  EXPECT_THROW(gl::line_config(Graph(3, {})), gl::ValidationError);
}

TEST(Cayley, Examples) {
  const auto c = gl::cayley_kernel(DenseFn::constant(GroupSpec({6}), Complex(0.3, 0.1)));
  for (std::size_t x = 0; x < 6; ++x)
    for (std::size_t y = 0; y < 6; ++y) EXPECT_EQ(c(x, y), Complex(0.3, 0.1));
  const auto w = gl::cayley_kernel(DenseFn::from_real(GroupSpec({2}), std::vector<double>{0, 1}));
  EXPECT_EQ(w(0, 0), Complex(0.0));
  EXPECT_EQ(w(0, 1), Complex(1.0));
  EXPECT_EQ(w(1, 0), Complex(1.0));
  EXPECT_EQ(w(1, 1), Complex(0.0));
}

TEST(Cayley, SymmetricAndDefinition) {
  std::mt19937_64 rng(1);
  const GroupSpec G({12});
  const auto f = oracle::random_complex(G, rng);
  const auto W = gl::cayley_kernel(f);
  for (std::size_t x = 0; x < 12; ++x) {
    for (std::size_t y = 0; y < 12; ++y) {
      EXPECT_EQ(W(x, y), W(y, x));
      EXPECT_EQ(W(x, y), f[(x + y) % 12]);
    }
  }
}

TEST(Cayley, OrderGuard) {
  EXPECT_THROW(gl::cayley_kernel(DenseFn::constant(GroupSpec({257}), 1.0)), gl::BudgetError);
  EXPECT_NO_THROW(gl::cayley_kernel(DenseFn::constant(GroupSpec({16, 16}), 1.0)));
  EXPECT_THROW(gl::Kernel(GroupSpec({2}), {0.0, 1.0, 0.5, 0.0}), gl::ValidationError);
}

TEST(Hom, Examples) {
  const auto constant = gl::cayley_kernel(DenseFn::constant(GroupSpec({5}), 0.7));
  EXPECT_NEAR(std::abs(gl::hom_density(Graph::edge(), constant) - 0.7), 0.0, 1e-15);
  const auto k2 = gl::cayley_kernel(DenseFn::from_real(GroupSpec({2}), std::vector<double>{0, 1}));
  EXPECT_EQ(gl::hom_density(Graph::cycle(3), k2), Complex(0.0));
  EXPECT_EQ(gl::hom_density(Graph::edge(), k2), Complex(0.5));
  EXPECT_EQ(gl::hom_density(Graph(3, {}), k2), Complex(1.0));
}

TEST(Hom, C4DominatesEdgeToTheFourth) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const GroupSpec G({static_cast<gl::Int>(3 + t % 9)});
    const auto W = gl::cayley_kernel(oracle::random_real(G, rng));
    const double edge = gl::hom_density(Graph::edge(), W).real();
    EXPECT_GE(gl::hom_density(Graph::cycle(4), W).real(), std::pow(edge, 4) - 1e-14);
  }
}

TEST(Hom, MultiplicativeOverDisjointUnion) {
  std::mt19937_64 rng(3);
  const auto W = gl::cayley_kernel(oracle::random_complex(GroupSpec({2, 3}), rng));
  const std::vector<Graph> parts = {Graph::edge(), Graph::path(3), Graph::cycle(3), Graph::cycle(4)};
  for (const auto& a : parts) {
    for (const auto& b : parts) {
      const Complex lhs = gl::hom_density(gl::disjoint_union(a, b), W);
      const Complex rhs = gl::hom_density(a, W) * gl::hom_density(b, W);
      EXPECT_LT(std::abs(lhs - rhs), 1e-12);
    }
  }
}

TEST(Hom, IndicatorsGiveUnitInterval) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    const auto W = gl::cayley_kernel(indicator(GroupSpec({7}), rng));
    for (const auto& H : {Graph::cycle(3), Graph::path(4), Graph::complete(4)}) {
      const Complex v = gl::hom_density(H, W);
      EXPECT_GE(v.real(), 0.0);
      EXPECT_LE(v.real(), 1.0);
      EXPECT_EQ(v.imag(), 0.0);
    }
  }
}

TEST(Hom, MatchesOracle) {
  std::mt19937_64 rng(5);
  const GroupSpec G({2, 3});
  const auto f = oracle::random_complex(G, rng);
  const auto W = gl::cayley_kernel(f);
  for (const auto& H : all_graphs(4)) EXPECT_LT(std::abs(gl::hom_density(H, W) - cayley_hom_oracle(H, f)), 1e-12);
}

TEST(Hom, Budget) {
  const auto W = gl::cayley_kernel(DenseFn::constant(GroupSpec({100}), 1.0));
  EXPECT_THROW(gl::hom_density(Graph::cycle(5), W, 1'000'000), gl::BudgetError);
}

TEST(Bridge, EdgeGivesMean) {
  std::mt19937_64 rng(6);
  const auto f = oracle::random_complex(GroupSpec({9}), rng);
  const auto r = gl::verify_bridge(Graph::edge(), f);
  EXPECT_TRUE(r.ok) << r.detail;
  EXPECT_LT(std::abs(r.hom - f.mean()), 1e-14);
  EXPECT_LT(std::abs(r.config - f.mean()), 1e-14);
}

TEST(Bridge, TriangleOnZ7AndC4OnZ11) {
  std::mt19937_64 rng(7);
  const auto f = oracle::random_real(GroupSpec({7}), rng);
  const auto tri = gl::verify_bridge(Graph::cycle(3), f, 1e-12);
  EXPECT_TRUE(tri.ok) << tri.detail;
  EXPECT_LT(std::abs(tri.hom - cayley_hom_oracle(Graph::cycle(3), f)), 1e-12);
  const auto s = indicator(GroupSpec({11}), rng);
  const auto c4 = gl::verify_bridge(Graph::cycle(4), s);
  EXPECT_TRUE(c4.ok) << c4.detail;
  EXPECT_LE(c4.difference, 1e-9);
}

TEST(Bridge, AllSmallGraphsAndGroups) {
  // Every graph on at most 5 vertices (with at least one edge) against groups of order <= 13.
  std::mt19937_64 rng(8);
  const std::vector<std::vector<gl::Int>> groups = {{2}, {5}, {2, 2}, {7}, {2, 4}, {3, 3}, {13}};
  int checks = 0;
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto graphs = all_graphs(n);
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
      // Full coverage for up to 4 vertices, a stride through the 1023 graphs on 5.
      if (n == 5 && gi % 31 != 0) continue;
      for (const auto& m : groups) {
        const GroupSpec G(m);
        if (n == 5 && G.order() > 7) continue;
        const auto r = gl::verify_bridge(graphs[gi], oracle::random_complex(G, rng));
        EXPECT_TRUE(r.ok) << r.detail;
        ++checks;
      }
    }
  }
  // 13^5 vertex maps keep the largest group to a few five-vertex graphs.
  for (const auto& H : {Graph::cycle(5), Graph::complete(5), Graph::path(5)}) {
    EXPECT_TRUE(gl::verify_bridge(H, oracle::random_complex(GroupSpec({13}), rng)).ok);
    ++checks;
  }
  EXPECT_GT(checks, 500);
}
