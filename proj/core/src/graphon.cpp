#include "grouplim/graphon.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "grouplim/error.hpp"
#include "grouplim/parallel.hpp"

namespace grouplim {

Graph::Graph(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges) : n_(n) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw ValidationError("edge endpoint out of range");
    if (u == v) throw ValidationError("graph loops are not allowed");
    auto e = std::minmax(u, v);
    if (!seen.insert({e.first, e.second}).second) throw ValidationError("repeated edge");
  }
  edges_.assign(seen.begin(), seen.end());
}

Graph Graph::edge() { return Graph(2, {{0, 1}}); }

Graph Graph::path(std::size_t vertices) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i + 1 < vertices; ++i) e.emplace_back(i, i + 1);
  return Graph(vertices, std::move(e));
}

Graph Graph::cycle(std::size_t vertices) {
  if (vertices < 3) throw ValidationError("cycles need at least three vertices");
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < vertices; ++i) e.emplace_back(i, (i + 1) % vertices);
  return Graph(vertices, std::move(e));
}

Graph Graph::complete(std::size_t vertices) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < vertices; ++i) {
    for (std::size_t j = i + 1; j < vertices; ++j) e.emplace_back(i, j);
  }
  return Graph(vertices, std::move(e));
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  auto e = a.edges();
  for (auto [u, v] : b.edges()) e.emplace_back(u + a.vertex_count(), v + a.vertex_count());
  return Graph(a.vertex_count() + b.vertex_count(), std::move(e));
}

ConfigSystem line_config(const Graph& H) {
  if (H.edges().empty()) throw ValidationError("L_H needs at least one edge");
  return edge_config(H.vertex_count(), H.edges(), "graph");
}

Kernel::Kernel(GroupSpec group, std::vector<Complex> matrix) : group_(std::move(group)), n_(group_.order()), w_(std::move(matrix)) {
  if (w_.size() != n_ * n_) throw ValidationError("kernel matrix must be order x order");
  for (std::size_t x = 0; x < n_; ++x) {
    for (std::size_t y = x + 1; y < n_; ++y) {
      if (w_[x * n_ + y] != w_[y * n_ + x]) throw ValidationError("kernel matrix is not symmetric");
    }
  }
}

Kernel cayley_kernel(const DenseFn& f, std::size_t max_order) {
  const std::size_t n = f.size();
  if (n > max_order) {
    throw BudgetError("kernel of order " + std::to_string(n) + " exceeds the dense limit " +
                      std::to_string(max_order) + "; use the fourier density of L_H");
  }
  const FiniteIndexer ix(f.group());
  std::vector<Complex> w(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) w[x * n + y] = f[ix.add(x, y)];
  }
  return Kernel(f.group(), std::move(w));
}

Complex hom_density(const Graph& H, const Kernel& W, std::uint64_t budget) {
  const std::size_t n = H.vertex_count();
  const std::size_t N = W.order();
  if (n == 0) return 1.0;
  double maps = 1.0;
  for (std::size_t i = 0; i < n; ++i) maps *= static_cast<double>(N);
  if (maps > static_cast<double>(budget)) {
    throw BudgetError("hom density needs " + std::to_string(maps) + " vertex maps, above the budget");
  }
  // back[v]: neighbours u < v, so vertex v's factor is known once x_0..x_v are set.
  std::vector<std::vector<std::size_t>> back(n);
  for (auto [u, v] : H.edges()) back[v].push_back(u);

  auto term = [&](std::size_t x0) -> Complex {
    std::vector<std::size_t> x(n, 0);
    std::vector<Complex> partial(n + 1, 1.0);
    x[0] = x0;
    partial[1] = 1.0;
    auto factor = [&](std::size_t v) {
      Complex p = 1.0;
      for (std::size_t u : back[v]) p *= W(x[u], x[v]);
      return p;
    };
    for (std::size_t v = 1; v < n; ++v) partial[v + 1] = partial[v] * factor(v);
    Complex acc = 0.0;
    for (;;) {
      acc += partial[n];
      std::size_t d = n - 1;
      while (d >= 1) {
        if (++x[d] < N) break;
        x[d] = 0;
        --d;
      }
      if (d == 0) break;
      for (std::size_t v = d; v < n; ++v) partial[v + 1] = partial[v] * factor(v);
    }
    return acc;
  };
  const Complex total = deterministic_sum<Complex>(N, term, Complex{});
  return total / maps;
}

BridgeReport verify_bridge(const Graph& H, const DenseFn& f, double tol) {
  BridgeReport rep;
  rep.hom = hom_density(H, cayley_kernel(f));
  rep.config = density_brute(line_config(H), f);
  rep.difference = std::abs(rep.hom - rep.config);
  rep.ok = rep.difference <= tol;
  if (!rep.ok) {
    std::ostringstream os;
    os << "bridge identity failed on " << to_string(f.group()) << " with " << H.vertex_count() << " vertices and "
       << H.edges().size() << " edges: |t(H,W_f) - t(L_H,f)| = " << rep.difference;
    rep.detail = os.str();
  }
  return rep;
}

}  // namespace grouplim
