#include "grouplim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "grouplim/error.hpp"
#include "grouplim/parallel.hpp"

namespace grouplim {
namespace {

std::size_t smallest_prime_factor(std::size_t n) {
  for (std::size_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return p;
  }
  return n;
}

std::size_t largest_prime_factor(std::size_t n) {
  std::size_t best = 1;
  for (std::size_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      best = p;
      n /= p;
    }
  }
  return n > 1 ? std::max(best, n) : best;
}

std::vector<Complex> unit_roots(std::size_t m, double sign) {
  std::vector<Complex> roots(m);
  for (std::size_t t = 0; t < m; ++t) {
    roots[t] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(m));
  }
  return roots;
}

// out[k] = sum_{t<n} in[t*stride] * roots[(t*k*step) % total]
void naive_transform(const Complex* in, std::size_t stride, Complex* out, std::size_t n, std::size_t step,
                     const std::vector<Complex>& roots) {
  const std::size_t total = roots.size();
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    std::size_t phase = 0;
    const std::size_t inc = (k * step) % total;
    for (std::size_t t = 0; t < n; ++t) {
      acc += in[t * stride] * roots[phase];
      phase += inc;
      if (phase >= total) phase -= total;
    }
    out[k] = acc;
  }
}

// Mixed-radix decimation in time; prime lengths fall back to the direct sum.
void fft_transform(const Complex* in, std::size_t stride, Complex* out, std::size_t n, std::size_t step,
                   const std::vector<Complex>& roots, Complex* scratch) {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const std::size_t p = smallest_prime_factor(n);
  if (p == n) {
    naive_transform(in, stride, out, n, step, roots);
    return;
  }
  const std::size_t q = n / p;
  const std::size_t total = roots.size();
  // scratch[0, n) holds the p sub-transforms; scratch[n, ...) is for recursion.
  for (std::size_t r = 0; r < p; ++r) {
    fft_transform(in + r * stride, stride * p, scratch + r * q, q, step * p, roots, scratch + n);
  }
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t r = 0; r < p; ++r) acc += roots[(r * k * step) % total] * scratch[r * q + (k % q)];
    out[k] = acc;
  }
}

void transform_axes(const GroupSpec& G, std::vector<Complex>& data, double sign, bool normalize, DftMethod method) {
  const std::size_t n = data.size();
  std::size_t stride = 1;
  std::vector<Complex> fiber, result, scratch;
  for (std::size_t j = G.rank(); j-- > 0;) {
    const auto m = static_cast<std::size_t>(G.modulus(j));
    if (m > 1) {
      const bool fast = method == DftMethod::fft || (method == DftMethod::automatic && uses_fft(G.modulus(j)));
      const auto roots = unit_roots(m, sign);
      fiber.resize(m);
      result.resize(m);
      scratch.assign(4 * m + 8, Complex{});
      const double scale = normalize ? 1.0 / static_cast<double>(m) : 1.0;
      const std::size_t span = m * stride;
      for (std::size_t outer = 0; outer < n; outer += span) {
        for (std::size_t inner = 0; inner < stride; ++inner) {
          const std::size_t base = outer + inner;
          for (std::size_t t = 0; t < m; ++t) fiber[t] = data[base + t * stride];
          if (fast) {
            fft_transform(fiber.data(), 1, result.data(), m, 1, roots, scratch.data());
          } else {
            naive_transform(fiber.data(), 1, result.data(), m, 1, roots);
          }
          for (std::size_t t = 0; t < m; ++t) data[base + t * stride] = result[t] * scale;
        }
      }
    }
    stride *= m;
  }
}

void require_finite(const GroupSpec& G, const char* what) {
  if (!G.is_finite()) throw UnsupportedError(std::string(what) + " requires a finite group, got " + to_string(G));
}

}  // namespace

DenseFn::DenseFn(GroupSpec group, std::vector<Complex> values) : group_(std::move(group)), values_(std::move(values)) {
  require_finite(group_, "dense function");
  if (values_.size() != group_.order()) {
    throw ValidationError("dense function on " + to_string(group_) + " needs " + std::to_string(group_.order()) +
                          " values, got " + std::to_string(values_.size()));
  }
}

DenseFn DenseFn::from_real(GroupSpec group, std::span<const double> values) {
  return DenseFn(std::move(group), std::vector<Complex>(values.begin(), values.end()));
}

DenseFn DenseFn::constant(GroupSpec group, Complex c) {
  const std::size_t n = group.order();
  return DenseFn(std::move(group), std::vector<Complex>(n, c));
}

Complex DenseFn::mean() const {
  Complex s = 0.0;
  for (auto v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double DenseFn::l2_norm() const {
  double s = 0.0;
  for (auto v : values_) s += std::norm(v);
  return std::sqrt(s / static_cast<double>(values_.size()));
}

bool DenseFn::is_real(double tol) const {
  return std::all_of(values_.begin(), values_.end(), [tol](Complex v) { return std::abs(v.imag()) <= tol; });
}

std::vector<double> DenseFn::real_values() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](Complex v) { return v.real(); });
  return out;
}

SparseFn::SparseFn(GroupSpec group) : group_(std::move(group)) {}

SparseFn::SparseFn(GroupSpec group, std::map<Elem, Complex> entries, std::optional<double> declared_l2)
    : group_(std::move(group)) {
  for (auto& [g, v] : entries) set(g, v);
  set_declared_l2(declared_l2);
}

Complex SparseFn::value(const Elem& g) const {
  auto it = entries_.find(g);
  return it == entries_.end() ? Complex{} : it->second;
}

void SparseFn::set(const Elem& g, Complex v) {
  if (!group_.contains(g)) {
    throw ValidationError("element " + to_string(g) + " is not reduced in " + to_string(group_));
  }
  if (v == Complex{}) {
    entries_.erase(g);
  } else {
    entries_[g] = v;
  }
}

void SparseFn::set_declared_l2(std::optional<double> l2) {
  if (l2) {
    if (!(*l2 >= 0.0)) throw ValidationError("declared l2 norm must be nonnegative");
    // Stored mass may exceed the declared norm only by rounding.
    if (stored_l2() > *l2 * (1.0 + 1e-9) + 1e-12) {
      throw ValidationError("stored entries exceed the declared l2 norm");
    }
  }
  declared_l2_ = l2;
}

double SparseFn::stored_l2() const {
  double s = 0.0;
  for (const auto& [g, v] : entries_) s += std::norm(v);
  return std::sqrt(s);
}

double SparseFn::l2_norm() const { return declared_l2_ ? *declared_l2_ : stored_l2(); }

bool uses_fft(Int modulus) {
  if (modulus < 4) return false;
  const auto m = static_cast<std::size_t>(modulus);
  return smallest_prime_factor(m) != m && largest_prime_factor(m) <= 13;
}

std::vector<Complex> dft_table(const DenseFn& f, DftMethod method) {
  std::vector<Complex> data(f.values().begin(), f.values().end());
  transform_axes(f.group(), data, -1.0, true, method);
  return data;
}

std::vector<Complex> idft_table(const GroupSpec& dual, std::span<const Complex> spectrum, DftMethod method) {
  require_finite(dual, "inverse transform");
  if (spectrum.size() != dual.order()) throw ValidationError("spectrum table size does not match group order");
  std::vector<Complex> data(spectrum.begin(), spectrum.end());
  transform_axes(dual, data, 1.0, false, method);
  return data;
}

SparseFn dft(const DenseFn& f, DftMethod method) {
  const auto table = dft_table(f, method);
  SparseFn out(f.group());
  for (std::size_t r = 0; r < table.size(); ++r) {
    if (std::abs(table[r]) >= kSpectrumThreshold) out.set(f.group().element_at(r), table[r]);
  }
  out.set_declared_l2(f.l2_norm());
  return out;
}

DenseFn idft(const SparseFn& fhat, DftMethod method) {
  const GroupSpec& G = fhat.group();
  require_finite(G, "idft");
  std::vector<Complex> table(G.order());
  for (const auto& [r, v] : fhat.entries()) table[G.index_of(r)] = v;
  return DenseFn(G, idft_table(G, table, method));
}

double u2_direct(const DenseFn& f, std::size_t max_order) {
  const std::size_t n = f.size();
  if (n > max_order) {
    throw BudgetError("u2_direct: group order " + std::to_string(n) + " exceeds the direct limit " +
                      std::to_string(max_order) + "; use u2_fourier");
  }
  const FiniteIndexer ix(f.group());
  const auto v = f.values();
  const Complex total = deterministic_sum<Complex>(
      n,
      [&](std::size_t x) {
        Complex acc = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
          const std::size_t xa = ix.add(x, a);
          const Complex head = v[x] * std::conj(v[xa]);
          Complex inner = 0.0;
          for (std::size_t b = 0; b < n; ++b) inner += std::conj(v[ix.add(x, b)]) * v[ix.add(xa, b)];
          acc += head * inner;
        }
        return acc;
      },
      Complex{});
  const double nn = static_cast<double>(n);
  const Complex avg = total / (nn * nn * nn);
  if (std::abs(avg.imag()) > 1e-9 * std::max(1.0, std::abs(avg.real()))) {
    throw InternalError("u2_direct: triple average has imaginary residue " + std::to_string(avg.imag()));
  }
  return std::pow(std::max(avg.real(), 0.0), 0.25);
}

double u2_fourier(const DenseFn& f) {
  double s = 0.0;
  for (Complex c : dft_table(f)) {
    const double a = std::norm(c);
    s += a * a;
  }
  return std::pow(s, 0.25);
}

DenseFn translate(const DenseFn& f, const Elem& shift) {
  const GroupSpec& G = f.group();
  const FiniteIndexer ix(G);
  const std::size_t c = G.index_of(G.reduce(shift.coords));
  std::vector<Complex> out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) out[x] = f[ix.add(x, c)];
  return DenseFn(G, std::move(out));
}

DenseFn pullback_mod(const DenseFn& f, const GroupSpec& source) {
  const GroupSpec& target = f.group();
  require_finite(source, "pullback");
  if (source.rank() != target.rank()) throw ValidationError("pullback: rank mismatch");
  for (std::size_t j = 0; j < source.rank(); ++j) {
    if (source.modulus(j) % target.modulus(j) != 0) {
      throw ValidationError("pullback: Z_" + std::to_string(target.modulus(j)) + " is not a quotient of Z_" +
                            std::to_string(source.modulus(j)));
    }
  }
  std::vector<Complex> out(source.order());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = f.at(target.reduce(source.element_at(i).coords));
  }
  return DenseFn(source, std::move(out));
}

}  // namespace grouplim
