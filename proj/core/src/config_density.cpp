#include "grouplim/config_density.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>

#include "grouplim/error.hpp"
#include "grouplim/parallel.hpp"
#include "grouplim/random.hpp"

namespace grouplim {
namespace {

Int floor_mod(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

std::uint64_t checked_power(std::size_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && v > cap / base) return std::numeric_limits<std::uint64_t>::max();
    v *= base;
  }
  return v;
}

const GroupSpec& common_group(const ConfigSystem& L, std::span<const DenseFn> fs) {
  if (fs.size() != L.size()) {
    throw ValidationError("configuration has " + std::to_string(L.size()) + " forms but " + std::to_string(fs.size()) +
                          " functions were given");
  }
  for (const auto& f : fs) {
    if (!(f.group() == fs.front().group())) throw ValidationError("all functions must live on the same group");
  }
  return fs.front().group();
}

// Sum over all tuples x in A^n of prod_i value(i, L_i(x)), reduced per value
// of x_0 in the fixed deterministic_sum tree.
template <class T, class Value>
T tuple_sum(const ConfigSystem& L, const GroupSpec& G, const DensityOptions& opts, Value&& value, bool parallel) {
  const std::size_t N = G.order();
  const std::size_t n = L.arity();
  const std::size_t k = L.size();
  const std::uint64_t evals = checked_power(N, n, opts.budget);
  if (evals > opts.budget) {
    throw BudgetError("direct density needs |A|^n = " + std::to_string(N) + "^" + std::to_string(n) +
                      " evaluations, above the budget of " + std::to_string(opts.budget) +
                      "; use the fourier method");
  }
  const FiniteIndexer ix(G);
  std::vector<std::vector<std::uint32_t>> scaled(n * k);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t i = 0; i < k; ++i) scaled[m * k + i] = ix.scale_table(L.form(i).coeffs[m]);
  }
  auto term = [&](std::size_t x0) -> T {
    std::vector<std::size_t> part((n + 1) * k, 0);
    for (std::size_t i = 0; i < k; ++i) part[k + i] = scaled[i][x0];
    for (std::size_t d = 1; d < n; ++d) {
      for (std::size_t i = 0; i < k; ++i) part[(d + 1) * k + i] = ix.add(part[d * k + i], scaled[d * k + i][0]);
    }
    std::vector<std::size_t> x(n, 0);
    T acc{};
    for (;;) {
      T prod = T(1);
      for (std::size_t i = 0; i < k; ++i) prod *= value(i, part[n * k + i]);
      acc += prod;
      std::size_t d = n - 1;
      while (d >= 1) {
        if (++x[d] < N) break;
        x[d] = 0;
        --d;
      }
      if (d == 0) break;
      for (std::size_t dd = d; dd < n; ++dd) {
        for (std::size_t i = 0; i < k; ++i) {
          part[(dd + 1) * k + i] = ix.add(part[dd * k + i], scaled[dd * k + i][x[dd]]);
        }
      }
    }
    return acc;
  };
  const T total = deterministic_sum<T>(N, term, T{}, parallel);
  return total / static_cast<double>(evals);
}

Int gcd_int(Int a, Int b) { return std::gcd(a, b); }

// Inverse of a modulo m, gcd(a, m) = 1.
Int mod_inverse(Int a, Int m) {
  Int g = m, x = 0, x1 = 1, r = a;
  while (r != 0) {
    Int q = g / r;
    std::tie(g, r) = std::make_pair(r, g - q * r);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  return floor_mod(x, m);
}

// All solutions in Z_m^cols of rows * x = 0 (mod m). Elimination uses only
// unimodular row operations, so the solution set is unchanged; pivot
// equations a t = v (mod m) are solved with their gcd(a, m) branches.
std::vector<std::vector<Int>> solve_homogeneous(std::vector<std::vector<Int>> a, Int m, std::uint64_t& work,
                                                std::uint64_t budget) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a.front().size() : 0;
  if (m == 1) return {std::vector<Int>(cols, 0)};
  for (auto& row : a) {
    for (auto& v : row) v = floor_mod(v, m);
  }
  std::vector<std::ptrdiff_t> pivot_row(cols, -1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    for (;;) {
      std::ptrdiff_t best = -1;
      for (std::size_t rr = r; rr < rows; ++rr) {
        if (a[rr][c] != 0 && (best < 0 || a[rr][c] < a[static_cast<std::size_t>(best)][c])) {
          best = static_cast<std::ptrdiff_t>(rr);
        }
      }
      if (best < 0) break;
      std::swap(a[r], a[static_cast<std::size_t>(best)]);
      bool clean = true;
      for (std::size_t rr = r + 1; rr < rows; ++rr) {
        if (a[rr][c] == 0) continue;
        const Int q = a[rr][c] / a[r][c];
        for (std::size_t cc = c; cc < cols; ++cc) a[rr][cc] = floor_mod(a[rr][cc] - q * a[r][cc], m);
        if (a[rr][c] != 0) clean = false;
      }
      if (clean) {
        pivot_row[c] = static_cast<std::ptrdiff_t>(r);
        ++r;
        break;
      }
    }
  }

  std::vector<std::vector<Int>> out;
  std::vector<Int> x(cols, 0);
  auto tick = [&] {
    if (++work > budget) {
      throw BudgetError("dual constraint enumeration exceeded the budget of " + std::to_string(budget));
    }
  };
  auto rec = [&](auto&& self, std::ptrdiff_t c) -> void {
    if (c < 0) {
      tick();
      out.push_back(x);
      return;
    }
    const auto cu = static_cast<std::size_t>(c);
    if (pivot_row[cu] < 0) {
      for (Int t = 0; t < m; ++t) {
        tick();
        x[cu] = t;
        self(self, c - 1);
      }
      return;
    }
    const auto& row = a[static_cast<std::size_t>(pivot_row[cu])];
    Int v = 0;
    for (std::size_t cc = cu + 1; cc < cols; ++cc) v = floor_mod(v - row[cc] * x[cc], m);
    const Int coef = row[cu];
    const Int g = gcd_int(coef, m);
    if (v % g != 0) return;
    const Int mr = m / g;
    const Int t0 = mr == 1 ? 0 : floor_mod((v / g) % mr * mod_inverse((coef / g) % mr, mr), mr);
    for (Int s = 0; s < g; ++s) {
      tick();
      x[cu] = t0 + s * mr;
      self(self, c - 1);
    }
  };
  rec(rec, static_cast<std::ptrdiff_t>(cols) - 1);
  return out;
}

// Per cyclic factor, the admissible dual coordinates of (r_1..r_k).
std::vector<std::vector<std::vector<Int>>> dual_solutions(const ConfigSystem& L, const GroupSpec& G,
                                                          std::uint64_t budget) {
  std::vector<std::vector<std::vector<Int>>> per;
  std::uint64_t work = 0;
  for (std::size_t j = 0; j < G.rank(); ++j) {
    std::vector<std::vector<Int>> a(L.arity(), std::vector<Int>(L.size()));
    for (std::size_t m = 0; m < L.arity(); ++m) {
      for (std::size_t i = 0; i < L.size(); ++i) a[m][i] = L.form(i).coeffs[m];
    }
    per.push_back(solve_homogeneous(std::move(a), G.modulus(j), work, budget));
  }
  return per;
}

__extension__ typedef __int128 Wide;

Wide gcd128(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

ConfigSystem::ConfigSystem(std::vector<LinearForm> forms, std::string name)
    : forms_(std::move(forms)), name_(std::move(name)) {
  if (forms_.empty()) throw ValidationError("configuration needs at least one linear form");
  const std::size_t n = forms_.front().coeffs.size();
  if (n == 0) throw ValidationError("linear forms need at least one variable");
  for (const auto& f : forms_) {
    if (f.coeffs.size() != n) throw ValidationError("all linear forms must have the same arity");
    if (std::all_of(f.coeffs.begin(), f.coeffs.end(), [](Int c) { return c == 0; })) {
      throw ValidationError("linear form with all coefficients zero");
    }
  }
}

ConfigSystem make_config(const std::vector<std::vector<Int>>& forms, std::string name) {
  std::vector<LinearForm> lf;
  lf.reserve(forms.size());
  for (const auto& c : forms) lf.push_back({c});
  return ConfigSystem(std::move(lf), std::move(name));
}

ConfigSystem edge_config(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges, std::string name) {
  std::vector<LinearForm> forms;
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw ValidationError("edge endpoint out of range");
    if (u == v) throw ValidationError("loops are not allowed in graph configurations");
    LinearForm f{std::vector<Int>(n, 0)};
    f.coeffs[u] = 1;
    f.coeffs[v] = 1;
    forms.push_back(std::move(f));
  }
  return ConfigSystem(std::move(forms), std::move(name));
}

ConfigSystem builtin_config(std::string_view name) {
  if (name == "ap3") return make_config({{1, 0}, {1, 1}, {1, 2}}, "ap3");
  if (name == "ap4") return make_config({{1, 0}, {1, 1}, {1, 2}, {1, 3}}, "ap4");
  if (name == "parallelogram") return make_config({{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}}, "parallelogram");
  constexpr std::string_view prefix = "graph:";
  if (name.substr(0, prefix.size()) == prefix) {
    std::string_view rest = name.substr(prefix.size());
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::size_t n = 0;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view tok = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto dash = tok.find('-');
      std::size_t u = 0, v = 0;
      if (dash == std::string_view::npos) throw ValidationError("bad edge '" + std::string(tok) + "'");
      auto r1 = std::from_chars(tok.data(), tok.data() + dash, u);
      auto r2 = std::from_chars(tok.data() + dash + 1, tok.data() + tok.size(), v);
      if (r1.ec != std::errc{} || r1.ptr != tok.data() + dash || r2.ec != std::errc{} ||
          r2.ptr != tok.data() + tok.size()) {
        throw ValidationError("bad edge '" + std::string(tok) + "'");
      }
      if (!seen.insert({std::min(u, v), std::max(u, v)}).second) {
        throw ValidationError("repeated edge '" + std::string(tok) + "'");
      }
      edges.emplace_back(u, v);
      n = std::max({n, u + 1, v + 1});
    }
    if (edges.empty()) throw ValidationError("graph configuration without edges");
    return edge_config(n, edges, std::string(name));
  }
  throw ValidationError("unknown configuration '" + std::string(name) + "'");
}

Complex density_brute(const ConfigSystem& L, std::span<const DenseFn> fs, const DensityOptions& opts) {
  const GroupSpec& G = common_group(L, fs);
  return tuple_sum<Complex>(
      L, G, opts, [&](std::size_t i, std::size_t idx) { return fs[i][idx]; }, true);
}

Complex density_brute(const ConfigSystem& L, const DenseFn& f, const DensityOptions& opts) {
  return tuple_sum<Complex>(
      L, f.group(), opts, [&](std::size_t, std::size_t idx) { return f[idx]; }, true);
}

double density_real(const ConfigSystem& L, const GroupSpec& G, std::span<const double> f, const DensityOptions& opts) {
  if (f.size() != G.order()) throw ValidationError("value table does not match group order");
  return tuple_sum<double>(
      L, G, opts, [&](std::size_t, std::size_t idx) { return f[idx]; }, false);
}

Complex density_fourier(const ConfigSystem& L, std::span<const DenseFn> fs, const DensityOptions& opts) {
  const GroupSpec& G = common_group(L, fs);
  const std::size_t k = L.size();
  std::vector<std::vector<Complex>> spectra;
  spectra.reserve(k);
  for (const auto& f : fs) spectra.push_back(dft_table(f));

  const auto per = dual_solutions(L, G, opts.budget);
  std::uint64_t total = 1;
  for (const auto& s : per) {
    if (s.empty()) return Complex{};
    if (total > opts.budget / s.size()) {
      throw BudgetError("fourier density needs more than " + std::to_string(opts.budget) + " dual tuples");
    }
    total *= s.size();
  }
  std::vector<std::size_t> strides(G.rank());
  std::size_t st = 1;
  for (std::size_t j = G.rank(); j-- > 0;) {
    strides[j] = st;
    st *= static_cast<std::size_t>(G.modulus(j));
  }
  // Odometer over one solution per cyclic factor.
  std::vector<std::size_t> pick(G.rank(), 0);
  Complex acc = 0.0;
  for (;;) {
    Complex prod = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t idx = 0;
      for (std::size_t j = 0; j < G.rank(); ++j) idx += static_cast<std::size_t>(per[j][pick[j]][i]) * strides[j];
      prod *= spectra[i][idx];
    }
    acc += prod;
    std::size_t j = G.rank();
    while (j-- > 0) {
      if (++pick[j] < per[j].size()) break;
      pick[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return acc;
}

Complex density_fourier(const ConfigSystem& L, const DenseFn& f, const DensityOptions& opts) {
  std::vector<DenseFn> fs(L.size(), f);
  return density_fourier(L, fs, opts);
}

std::uint64_t dual_solution_count(const ConfigSystem& L, const GroupSpec& G) {
  std::uint64_t total = 1;
  for (const auto& s : dual_solutions(L, G, std::numeric_limits<std::uint64_t>::max())) total *= s.size();
  return total;
}

MonteCarloEstimate density_monte_carlo(const ConfigSystem& L, std::span<const DenseFn> fs, std::uint64_t samples,
                                       std::uint64_t seed) {
  const GroupSpec& G = common_group(L, fs);
  if (samples < 2) throw ValidationError("monte carlo needs at least two samples");
  const std::size_t N = G.order();
  const std::size_t n = L.arity();
  const std::size_t k = L.size();
  const FiniteIndexer ix(G);
  std::vector<std::size_t> x(n);
  double sr = 0, si = 0, sr2 = 0, si2 = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (std::size_t m = 0; m < n; ++m) {
      x[m] = std::min(N - 1, static_cast<std::size_t>(counter_uniform(seed, m, s) * static_cast<double>(N)));
    }
    Complex prod = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t idx = 0;
      for (std::size_t m = 0; m < n; ++m) idx = ix.add(idx, ix.scale(L.form(i).coeffs[m], x[m]));
      prod *= fs[i][idx];
    }
    sr += prod.real();
    si += prod.imag();
    sr2 += prod.real() * prod.real();
    si2 += prod.imag() * prod.imag();
  }
  const double ns = static_cast<double>(samples);
  MonteCarloEstimate est;
  est.samples = samples;
  est.mean = {sr / ns, si / ns};
  auto se = [ns](double s1, double s2) {
    const double var = std::max(0.0, (s2 - s1 * s1 / ns) / (ns - 1.0));
    return std::sqrt(var / ns);
  };
  est.stderr_re = se(sr, sr2);
  est.stderr_im = se(si, si2);
  return est;
}

std::size_t rational_rank(std::vector<std::vector<Int>> rows_in) {
  std::vector<std::vector<Wide>> a;
  for (const auto& r : rows_in) a.emplace_back(r.begin(), r.end());
  if (a.empty()) return 0;
  const std::size_t cols = a.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[r], a[p]);
    for (std::size_t rr = r + 1; rr < a.size(); ++rr) {
      if (a[rr][c] == 0) continue;
      const Wide x = a[r][c], y = a[rr][c];
      Wide g = 0;
      for (std::size_t cc = 0; cc < cols; ++cc) {
        a[rr][cc] = a[rr][cc] * x - a[r][cc] * y;
        g = gcd128(g, a[rr][cc]);
      }
      if (g > 1) {
        for (auto& v : a[rr]) v /= g;
      }
    }
    ++r;
  }
  return r;
}

CsComplexityReport cs_complexity_at_most_1(const ConfigSystem& L) {
  const std::size_t k = L.size();
  if (k < 2) throw ValidationError("Cauchy-Schwarz complexity needs at least two forms");
  if (k > 16) throw ValidationError("Cauchy-Schwarz check is limited to 16 forms");
  CsComplexityReport rep;
  rep.per_form.assign(k, false);
  auto avoids = [&](const std::vector<std::size_t>& cls, std::size_t i) {
    std::vector<std::vector<Int>> rows;
    for (std::size_t j : cls) rows.push_back(L.form(j).coeffs);
    const std::size_t base = rational_rank(rows);
    rows.push_back(L.form(i).coeffs);
    return rational_rank(rows) > base;
  };
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) others.push_back(j);
    }
    const std::size_t masks = std::size_t{1} << others.size();
    for (std::size_t mask = 0; mask < masks && !rep.per_form[i]; ++mask) {
      std::vector<std::size_t> c0, c1;
      for (std::size_t b = 0; b < others.size(); ++b) ((mask >> b) & 1 ? c1 : c0).push_back(others[b]);
      if (avoids(c0, i) && avoids(c1, i)) rep.per_form[i] = true;
    }
  }
  rep.overall = std::all_of(rep.per_form.begin(), rep.per_form.end(), [](bool b) { return b; });
  return rep;
}

}  // namespace grouplim
