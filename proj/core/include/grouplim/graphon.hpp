#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "grouplim/config_density.hpp"
#include "grouplim/spectral.hpp"

namespace grouplim {

/// Simple undirected graph on vertices 0..n-1.
class Graph {
 public:
  /// Throws ValidationError on loops, repeated edges or endpoints >= n.
  Graph(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges);

  std::size_t vertex_count() const noexcept { return n_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }

  static Graph edge();
  static Graph path(std::size_t vertices);
  static Graph cycle(std::size_t vertices);
  static Graph complete(std::size_t vertices);

 private:
  std::size_t n_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;  // (u, v) with u < v, sorted
};

Graph disjoint_union(const Graph& a, const Graph& b);

/// L_H = {x_i + x_j : (i,j) in E(H)}.
ConfigSystem line_config(const Graph& H);

/// Symmetric kernel on a finite group, stored as a dense order x order matrix.
class Kernel {
 public:
  Kernel(GroupSpec group, std::vector<Complex> matrix);

  const GroupSpec& group() const noexcept { return group_; }
  std::size_t order() const noexcept { return n_; }
  Complex operator()(std::size_t x, std::size_t y) const { return w_[x * n_ + y]; }

 private:
  GroupSpec group_;
  std::size_t n_;
  std::vector<Complex> w_;
};

inline constexpr std::size_t kKernelOrderLimit = 256;

/// W_f(x, y) = f(x + y).
Kernel cayley_kernel(const DenseFn& f, std::size_t max_order = kKernelOrderLimit);

/// t(H, W) = E over vertex maps of prod_{(i,j) in E(H)} W(x_i, x_j).
Complex hom_density(const Graph& H, const Kernel& W, std::uint64_t budget = 100'000'000);

struct BridgeReport {
  Complex hom;     // t(H, W_f)
  Complex config;  // t(L_H, f)
  double difference = 0.0;
  bool ok = false;
  std::string detail;
};

/// Computes both sides of t(H, W_f) = t(L_H, f) by direct summation.
BridgeReport verify_bridge(const Graph& H, const DenseFn& f, double tol = 1e-9);

}  // namespace grouplim
