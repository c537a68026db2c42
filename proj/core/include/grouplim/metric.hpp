#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "grouplim/group.hpp"
#include "grouplim/spectral.hpp"

namespace grouplim {

/// Bijection S1 -> S2 between finite subsets of two groups that preserves
/// every relation sum_i c_i g_i = 0 with sum_i |c_i| <= weight, in both
/// directions.
struct PartialIso {
  std::vector<std::pair<Elem, Elem>> pairs;
  int weight = 1;
};

/// Certified interval for a distance value.
///
/// When neither weight_capped nor budget_exceeded is set, lo <= dhat <= hi.
/// weight_capped means hi was only verified at the capped relation weight;
/// budget_exceeded means some probe between lo and hi ran out of nodes.
/// In both cases lo is still a valid lower bound.
struct DistBracket {
  double lo = 0.0;
  double hi = 0.0;
  std::optional<PartialIso> witness;
  bool exact = false;
  bool weight_capped = false;
  bool budget_exceeded = false;
  std::size_t probes = 0;
  std::uint64_t nodes = 0;
};

struct DhatOptions {
  int weight_cap = 12;
  std::uint64_t node_budget = 10'000'000;  // per epsilon probe
};

/// ceil(1/eps), robust to eps being a rounded 1/m.
int iso_weight(double eps);

/// {g : |f(g)| > eps}, sorted. Throws PrecisionError when eps is not above
/// the truncation threshold of f.
std::vector<Elem> supp_eps(const SparseFn& f, double eps);

/// Full two-sided relation check of phi at its weight. Also rejects
/// non-injective pair lists and elements outside their groups.
bool check_partial_iso(const PartialIso& phi, const GroupSpec& G1, const GroupSpec& G2);

enum class SearchStatus { found, none, budget_exceeded };

struct IsoSearch {
  SearchStatus status = SearchStatus::none;
  std::optional<PartialIso> iso;
  std::uint64_t nodes = 0;
  int weight = 1;              // weight actually enforced
  bool weight_capped = false;  // ceil(1/eps) exceeded the cap
};

/// Backtracking search for an eps-isomorphism between f1 and f2.
IsoSearch search_eps_iso(const SparseFn& f1, const SparseFn& f2, double eps, const DhatOptions& opts = {});

/// As search_eps_iso, but throws BudgetError when the node budget runs out.
std::optional<PartialIso> exists_eps_iso(const SparseFn& f1, const SparseFn& f2, double eps,
                                         const DhatOptions& opts = {});

/// Searches for a value-preserving bijection supp(f1) -> supp(f2) (values
/// equal to within 1e-12) that extends to an injective homomorphism of the
/// generated subgroups. Such a map certifies dhat(f1, f2) = 0.
std::optional<PartialIso> find_isomorphism(const SparseFn& f1, const SparseFn& f2, const DhatOptions& opts = {});

/// dhat infimum bracketed between adjacent critical values of eps.
DistBracket dhat(const SparseFn& f1, const SparseFn& f2, const DhatOptions& opts = {});

/// dhat of the Fourier transforms.
DistBracket d_metric(const DenseFn& f1, const DenseFn& f2, const DhatOptions& opts = {});

/// d plus the gap between the L2 norms.
DistBracket dprime(const DenseFn& f1, const DenseFn& f2, const DhatOptions& opts = {});

}  // namespace grouplim
