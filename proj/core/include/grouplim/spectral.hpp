#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "grouplim/group.hpp"

namespace grouplim {

using Complex = std::complex<double>;

/// Spectrum entries with magnitude below this are not stored.
inline constexpr double kSpectrumThreshold = 1e-14;

/// A function on a finite abelian group stored as its full value table,
/// indexed in enumerate() order.
class DenseFn {
 public:
  DenseFn(GroupSpec group, std::vector<Complex> values);
  static DenseFn from_real(GroupSpec group, std::span<const double> values);
  static DenseFn constant(GroupSpec group, Complex c);

  const GroupSpec& group() const noexcept { return group_; }
  std::span<const Complex> values() const noexcept { return values_; }
  std::vector<Complex>& mutable_values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  Complex operator[](std::size_t i) const { return values_[i]; }
  Complex at(const Elem& x) const { return values_[group_.index_of(x)]; }

  /// Uniform average of f.
  Complex mean() const;
  /// sqrt(E_x |f(x)|^2) under the normalized counting measure.
  double l2_norm() const;
  /// True when every imaginary part is within tol of zero.
  bool is_real(double tol = 1e-12) const;
  std::vector<double> real_values() const;

 private:
  GroupSpec group_;
  std::vector<Complex> values_;
};

/// Finitely supported function on a discrete finitely generated abelian
/// group. Used for l^2 functions and for spectra.
class SparseFn {
 public:
  explicit SparseFn(GroupSpec group);
  SparseFn(GroupSpec group, std::map<Elem, Complex> entries, std::optional<double> declared_l2 = std::nullopt);

  const GroupSpec& group() const noexcept { return group_; }
  const std::map<Elem, Complex>& entries() const noexcept { return entries_; }
  std::optional<double> declared_l2() const noexcept { return declared_l2_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Value at g (zero if not stored).
  Complex value(const Elem& g) const;
  /// Stores v at g; zero values are erased.
  void set(const Elem& g, Complex v);
  void set_declared_l2(std::optional<double> l2);

  /// sqrt of the sum of stored |f(g)|^2.
  double stored_l2() const;
  /// declared_l2 when present, otherwise stored_l2().
  double l2_norm() const;
  /// Magnitude below which entries may have been dropped: kSpectrumThreshold
  /// for truncated spectra (declared_l2 present), zero for exact functions.
  double truncation_threshold() const noexcept { return declared_l2_ ? kSpectrumThreshold : 0.0; }

  friend bool operator==(const SparseFn& a, const SparseFn& b) {
    return a.group_ == b.group_ && a.entries_ == b.entries_;
  }

 private:
  GroupSpec group_;
  std::map<Elem, Complex> entries_;
  std::optional<double> declared_l2_;
};

enum class DftMethod {
  automatic,  // FFT on highly composite factors, direct character sums otherwise
  naive,
  fft,
};

/// Spectrum table on the dual group (same moduli), in enumerate() order:
/// fhat(r) = E_x f(x) conj(chi_r(x)), chi_r(x) = exp(2 pi i sum_j r_j x_j / m_j).
std::vector<Complex> dft_table(const DenseFn& f, DftMethod method = DftMethod::automatic);
/// Inverse of dft_table: f(x) = sum_r fhat(r) chi_r(x).
std::vector<Complex> idft_table(const GroupSpec& dual, std::span<const Complex> spectrum,
                                DftMethod method = DftMethod::automatic);

/// Fourier transform as a sparse spectrum with entries below
/// kSpectrumThreshold dropped and declared_l2 = ||f||_2.
SparseFn dft(const DenseFn& f, DftMethod method = DftMethod::automatic);
DenseFn idft(const SparseFn& fhat, DftMethod method = DftMethod::automatic);

/// True when the fast path is used for a factor of this modulus.
bool uses_fft(Int modulus);

/// Gowers U2 norm from its defining triple average. O(|A|^3).
double u2_direct(const DenseFn& f, std::size_t max_order = 4096);
/// Gowers U2 norm as the l^4 norm of the spectrum.
double u2_fourier(const DenseFn& f);

/// x -> f(x + shift).
DenseFn translate(const DenseFn& f, const Elem& shift);
/// Pullback along the coordinatewise reduction Z_{n_j} -> Z_{m_j}; every
/// target modulus must divide the corresponding source modulus.
DenseFn pullback_mod(const DenseFn& f, const GroupSpec& source);

}  // namespace grouplim
