#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grouplim/spectral.hpp"

namespace grouplim {

/// lambda_1 x_1 + ... + lambda_n x_n with integer coefficients.
struct LinearForm {
  std::vector<Int> coeffs;
};

/// A linear configuration: k forms of common arity n.
class ConfigSystem {
 public:
  /// Throws ValidationError on an empty system, mixed arities or a zero form.
  ConfigSystem(std::vector<LinearForm> forms, std::string name = {});

  const std::vector<LinearForm>& forms() const noexcept { return forms_; }
  const LinearForm& form(std::size_t i) const { return forms_[i]; }
  std::size_t size() const noexcept { return forms_.size(); }
  std::size_t arity() const noexcept { return forms_.front().coeffs.size(); }
  const std::string& name() const noexcept { return name_; }

 private:
  std::vector<LinearForm> forms_;
  std::string name_;
};

ConfigSystem make_config(const std::vector<std::vector<Int>>& forms, std::string name = {});

/// One form x_i + x_j per edge, arity n.
ConfigSystem edge_config(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges,
                         std::string name = {});

/// "ap3", "ap4", "parallelogram", or "graph:<u>-<v>,..." (e.g. "graph:0-1,1-2,2-0").
ConfigSystem builtin_config(std::string_view name);

struct DensityOptions {
  std::uint64_t budget = 100'000'000;  // evaluations (brute) or enumerated dual tuples (fourier)
};

/// t(L, F) = E_{x in A^n} prod_i f_i(L_i(x)), by summation over all tuples.
Complex density_brute(const ConfigSystem& L, std::span<const DenseFn> fs, const DensityOptions& opts = {});
Complex density_brute(const ConfigSystem& L, const DenseFn& f, const DensityOptions& opts = {});

/// Same value via character orthogonality: the sum over dual tuples
/// (r_1..r_k) with sum_j lambda_{j,m} r_j = 0 for every variable m of
/// prod_j fhat_j(r_j).
Complex density_fourier(const ConfigSystem& L, std::span<const DenseFn> fs, const DensityOptions& opts = {});
Complex density_fourier(const ConfigSystem& L, const DenseFn& f, const DensityOptions& opts = {});

/// Number of dual tuples satisfying the constraints of L over the dual of G.
std::uint64_t dual_solution_count(const ConfigSystem& L, const GroupSpec& G);

struct MonteCarloEstimate {
  Complex mean;
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  std::uint64_t samples = 0;
};

/// Sampled estimate of t(L, F) from uniformly random tuples.
MonteCarloEstimate density_monte_carlo(const ConfigSystem& L, std::span<const DenseFn> fs, std::uint64_t samples,
                                       std::uint64_t seed);

/// Real-valued t(L, f) for a value table on G; the optimizer's objective.
double density_real(const ConfigSystem& L, const GroupSpec& G, std::span<const double> f,
                    const DensityOptions& opts = {});

struct CsComplexityReport {
  std::vector<bool> per_form;
  bool overall = false;
};

/// Cauchy-Schwarz complexity at most 1: for every i the other forms split
/// into two classes, neither of whose rational span contains L_i.
CsComplexityReport cs_complexity_at_most_1(const ConfigSystem& L);

/// Rank over Q of a list of integer vectors.
std::size_t rational_rank(std::vector<std::vector<Int>> rows);

}  // namespace grouplim
