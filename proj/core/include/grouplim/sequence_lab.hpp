#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "grouplim/config_density.hpp"
#include "grouplim/metric.hpp"
#include "grouplim/spectral.hpp"

namespace grouplim {

enum class Metric { d, dprime };

struct TableCell {
  DistBracket bracket;
  std::optional<std::string> error;  // set when the cell's computation failed (e.g. budget)
};

using BracketTable = std::vector<std::vector<TableCell>>;

/// Symmetric table of metric brackets. Diagonal cells are exact zeros; the rest run in parallel.
BracketTable pairwise_table(const std::vector<DenseFn>& fs, Metric metric, const DhatOptions& opts = {});

/// Same, for spectra given directly (d-hat between them).
BracketTable pairwise_table(const std::vector<SparseFn>& spectra, const DhatOptions& opts = {});

struct CauchyResult {
  bool cauchy = false;
  std::size_t tail_index = 0;
};

/// True iff there is a tail index t with every cell (i, j), i, j >= t, i != j, having hi <= tol.
/// Failed cells count as infinite. A tail of fewer than two entries is not accepted unless n <= 1.
CauchyResult cauchy_detect(const BracketTable& table, double tol);

struct Histogram {
  double re_min = 0.0, re_max = 0.0;
  double im_min = 0.0, im_max = 0.0;
  std::size_t re_bins = 1, im_bins = 1;  // im_bins == 1 for real data
  std::vector<double> masses;            // row-major: re bin fastest within each im row

  std::size_t bin_of(Complex z) const;
};

/// Histogram over an explicit box.
Histogram value_histogram(const DenseFn& f, std::size_t bins, double re_min, double re_max, double im_min = 0.0,
                          double im_max = 0.0);

/// Histogram over the bounding box of f's values (widened to width 1 when degenerate).
Histogram value_histogram(const DenseFn& f, std::size_t bins);

/// L1 distance between two histograms sharing one layout.
double histogram_distance(const Histogram& a, const Histogram& b);

struct ContinuityPoint {
  double d_hi = 0.0;
  double d_lo = 0.0;
  double density_gap = 0.0;
  bool bracket_exact = false;
};

struct ContinuityScatter {
  std::vector<ContinuityPoint> points;
  bool cs1 = true;
  std::optional<std::string> warning;
};

ContinuityScatter continuity_probe(const ConfigSystem& L, const std::vector<std::pair<DenseFn, DenseFn>>& pairs,
                                   const DhatOptions& opts = {});

std::string continuity_csv(const ContinuityScatter& s);
std::string table_csv(const BracketTable& table);

/// Norm drift check: d-Cauchy but L2 norms not converging (so weak convergence of values may fail).
struct TightnessReport {
  bool d_cauchy = false;
  bool norms_converge = false;
  double norm_spread = 0.0;  // max - min over the detected tail
  bool drift_flag = false;
};

TightnessReport tightness_check(const BracketTable& d_table, std::span<const double> l2_norms, double tol);

/// Analytic spectra of the circle example: f_n = chi_1 + chi_n on the circle, seen on Z.
SparseFn circle_spectrum(Int n);

/// Limit object on the torus: chi_(1,0) + chi_(0,1), seen on Z^2.
SparseFn torus_spectrum();

}  // namespace grouplim
