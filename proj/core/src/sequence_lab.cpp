#include "grouplim/sequence_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "grouplim/error.hpp"
#include "grouplim/parallel.hpp"

namespace grouplim {

namespace {

template <class Fn>
BracketTable fill_table(std::size_t n, Fn&& cell) {
  BracketTable table(n, std::vector<TableCell>(n));
  for (std::size_t i = 0; i < n; ++i) {
    table[i][i].bracket.exact = true;
  }
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) jobs.emplace_back(i, j);
  }
  parallel_for(jobs.size(), [&](std::size_t t) {
    auto [i, j] = jobs[t];
    TableCell c;
    try {
      c.bracket = cell(i, j);
    } catch (const Error& e) {
      c.error = e.what();
      c.bracket.lo = 0.0;
      c.bracket.hi = std::numeric_limits<double>::infinity();
      c.bracket.budget_exceeded = e.kind() == ErrorKind::budget;
    }
    table[i][j] = c;
    table[j][i] = c;
  });
  return table;
}

double cell_hi(const TableCell& c) {
  return c.error ? std::numeric_limits<double>::infinity() : c.bracket.hi;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

BracketTable pairwise_table(const std::vector<DenseFn>& fs, Metric metric, const DhatOptions& opts) {
  for (const auto& f : fs) {
    if (!f.group().is_finite()) throw ValidationError("pairwise_table needs finite groups");
  }
  // Spectra once per function, not once per cell.
  std::vector<SparseFn> spectra;
  spectra.reserve(fs.size());
  for (const auto& f : fs) spectra.push_back(dft(f));
  return fill_table(fs.size(), [&](std::size_t i, std::size_t j) {
    DistBracket b = dhat(spectra[i], spectra[j], opts);
    if (metric == Metric::dprime) {
      const double gap = std::abs(fs[i].l2_norm() - fs[j].l2_norm());
      b.lo += gap;
      b.hi += gap;
    }
    return b;
  });
}

BracketTable pairwise_table(const std::vector<SparseFn>& spectra, const DhatOptions& opts) {
  return fill_table(spectra.size(), [&](std::size_t i, std::size_t j) { return dhat(spectra[i], spectra[j], opts); });
}

CauchyResult cauchy_detect(const BracketTable& table, double tol) {
  const std::size_t n = table.size();
  for (const auto& row : table) {
    if (row.size() != n) throw ValidationError("bracket table must be square");
  }
  if (n <= 1) return {true, 0};
  // worst[t] = max hi over the tail square starting at t.
  std::vector<double> worst(n, 0.0);
  for (std::size_t t = n - 1; t-- > 0;) {
    double w = worst[t + 1];
    for (std::size_t j = t + 1; j < n; ++j) w = std::max(w, cell_hi(table[t][j]));
    worst[t] = w;
  }
  for (std::size_t t = 0; t + 1 < n; ++t) {
    if (worst[t] <= tol) return {true, t};
  }
  return {false, n};
}

std::size_t Histogram::bin_of(Complex z) const {
  auto axis = [](double v, double lo, double hi, std::size_t bins) -> std::size_t {
    if (bins == 1 || !(hi > lo)) return 0;
    const double t = (v - lo) / (hi - lo) * static_cast<double>(bins);
    if (!(t > 0.0)) return 0;
    return std::min(bins - 1, static_cast<std::size_t>(t));
  };
  return axis(z.imag(), im_min, im_max, im_bins) * re_bins + axis(z.real(), re_min, re_max, re_bins);
}

Histogram value_histogram(const DenseFn& f, std::size_t bins, double re_min, double re_max, double im_min,
                          double im_max) {
  if (bins < 1) throw ValidationError("histogram needs at least one bin");
  if (!(re_max >= re_min) || !(im_max >= im_min)) throw ValidationError("histogram box is empty");
  Histogram h;
  h.re_min = re_min;
  h.re_max = re_max;
  h.im_min = im_min;
  h.im_max = im_max;
  h.re_bins = bins;
  h.im_bins = im_max > im_min ? bins : 1;
  std::vector<std::uint64_t> counts(h.re_bins * h.im_bins, 0);
  for (Complex z : f.values()) ++counts[h.bin_of(z)];
  h.masses.resize(counts.size());
  const double n = static_cast<double>(f.size());
  for (std::size_t b = 0; b < counts.size(); ++b) h.masses[b] = static_cast<double>(counts[b]) / n;
  return h;
}

Histogram value_histogram(const DenseFn& f, std::size_t bins) {
  double rlo = std::numeric_limits<double>::infinity(), rhi = -rlo, ilo = rlo, ihi = -rlo;
  for (Complex z : f.values()) {
    rlo = std::min(rlo, z.real());
    rhi = std::max(rhi, z.real());
    ilo = std::min(ilo, z.imag());
    ihi = std::max(ihi, z.imag());
  }
  if (!(rhi > rlo)) {
    rlo -= 0.5;
    rhi += 0.5;
  }
  if (!(ihi - ilo > 1e-12)) ilo = ihi = 0.0;
  return value_histogram(f, bins, rlo, rhi, ilo, ihi);
}

double histogram_distance(const Histogram& a, const Histogram& b) {
  if (a.re_bins != b.re_bins || a.im_bins != b.im_bins || a.re_min != b.re_min || a.re_max != b.re_max ||
      a.im_min != b.im_min || a.im_max != b.im_max) {
    throw ValidationError("histograms must share one bin layout");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.masses.size(); ++i) s += std::abs(a.masses[i] - b.masses[i]);
  return s;
}

ContinuityScatter continuity_probe(const ConfigSystem& L, const std::vector<std::pair<DenseFn, DenseFn>>& pairs,
                                   const DhatOptions& opts) {
  ContinuityScatter out;
  out.cs1 = cs_complexity_at_most_1(L).overall;
  if (!out.cs1) {
    out.warning = "configuration is not of Cauchy-Schwarz complexity <= 1; d need not control its density";
  }
  out.points.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [f, g] = pairs[i];
    const DistBracket b = d_metric(f, g, opts);
    ContinuityPoint& p = out.points[i];
    p.d_lo = b.lo;
    p.d_hi = b.hi;
    p.bracket_exact = b.exact;
    p.density_gap = std::abs(density_fourier(L, f) - density_fourier(L, g));
  }
  return out;
}

std::string continuity_csv(const ContinuityScatter& s) {
  std::ostringstream os;
  os << "d_lo,d_hi,density_gap,exact\n";
  for (const auto& p : s.points) {
    os << fmt(p.d_lo) << ',' << fmt(p.d_hi) << ',' << fmt(p.density_gap) << ',' << (p.bracket_exact ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string table_csv(const BracketTable& table) {
  std::ostringstream os;
  os << "i,j,lo,hi,exact,error\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = 0; j < table[i].size(); ++j) {
      const auto& c = table[i][j];
      os << i << ',' << j << ',' << fmt(c.bracket.lo) << ',' << fmt(cell_hi(c)) << ',' << (c.bracket.exact ? 1 : 0)
         << ',';
      if (c.error) {
        std::string e = *c.error;
        std::replace(e.begin(), e.end(), ',', ';');
        std::replace(e.begin(), e.end(), '\n', ' ');
        os << e;
      }
      os << '\n';
    }
  }
  return os.str();
}

TightnessReport tightness_check(const BracketTable& d_table, std::span<const double> l2_norms, double tol) {
  if (l2_norms.size() != d_table.size()) throw ValidationError("one norm per table row is required");
  TightnessReport r;
  const CauchyResult c = cauchy_detect(d_table, tol);
  r.d_cauchy = c.cauchy;
  const std::size_t from = c.cauchy ? c.tail_index : 0;
  if (from < l2_norms.size()) {
    const auto [lo, hi] = std::minmax_element(l2_norms.begin() + static_cast<std::ptrdiff_t>(from), l2_norms.end());
    r.norm_spread = *hi - *lo;
  }
  r.norms_converge = r.norm_spread <= tol;
  r.drift_flag = r.d_cauchy && !r.norms_converge;
  return r;
}

SparseFn circle_spectrum(Int n) {
  if (n == 1) throw ValidationError("circle example needs n != 1");
  const GroupSpec Z({0});
  SparseFn f(Z);
  f.set(Elem{1}, 1.0);
  f.set(Elem{n}, 1.0);
  return f;
}

SparseFn torus_spectrum() {
  const GroupSpec Z2({0, 0});
  SparseFn f(Z2);
  f.set(Elem{1, 0}, 1.0);
  f.set(Elem{0, 1}, 1.0);
  return f;
}

}  // namespace grouplim
