#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "grouplim/error.hpp"
#include "grouplim/spectral.hpp"
#include "oracles.hpp"

namespace gl = grouplim;
using gl::Complex;
using gl::DenseFn;
using gl::Elem;
using gl::GroupSpec;

namespace {

DenseFn character(const GroupSpec& G, const Elem& r) {
  std::vector<Complex> v(G.order());
  for (std::size_t x = 0; x < v.size(); ++x) {
    const Elem e = G.element_at(x);
    double ph = 0.0;
    for (std::size_t j = 0; j < G.rank(); ++j) ph += static_cast<double>(r[j] * e[j]) / static_cast<double>(G.modulus(j));
    v[x] = std::polar(1.0, 2.0 * std::numbers::pi * ph);
  }
  return DenseFn(G, std::move(v));
}

double max_gap(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST(Dft, ConstantMapsToDc) {
  const GroupSpec G({8});
  const auto fh = gl::dft(DenseFn::constant(G, 0.7));
  ASSERT_EQ(fh.size(), 1u);
  EXPECT_NEAR(std::abs(fh.value(Elem{0}) - 0.7), 0.0, 1e-15);
  EXPECT_NEAR(*fh.declared_l2(), 0.7, 1e-15);
}

TEST(Dft, CharacterIsDelta) {
  const GroupSpec G({5});
  const auto fh = gl::dft(character(G, Elem{1}));
  ASSERT_EQ(fh.size(), 1u);
  EXPECT_NEAR(std::abs(fh.value(Elem{1}) - 1.0), 0.0, 1e-14);
}

TEST(Dft, RejectsInfiniteGroups) {
  EXPECT_THROW(DenseFn::constant(GroupSpec({0}), 1.0), gl::Error);
}

class DftGroups : public ::testing::TestWithParam<std::vector<gl::Int>> {};

TEST_P(DftGroups, AgreesWithCharacterSums) {
  const GroupSpec G(GetParam());
  std::mt19937_64 rng(G.order());
  const DenseFn f = oracle::random_complex(G, rng);
  const auto want = oracle::character_sum_dft(f);
  EXPECT_LE(max_gap(gl::dft_table(f), want), 1e-12);
  EXPECT_LE(max_gap(gl::dft_table(f, gl::DftMethod::naive), want), 1e-12);
  EXPECT_LE(max_gap(gl::dft_table(f, gl::DftMethod::fft), want), 1e-12);
}

TEST_P(DftGroups, ParsevalAndRoundTrip) {
  const GroupSpec G(GetParam());
  std::mt19937_64 rng(G.order() + 1);
  const DenseFn f = oracle::random_complex(G, rng);
  const auto fh = gl::dft_table(f);
  double s = 0.0;
  for (auto z : fh) s += std::norm(z);
  EXPECT_NEAR(s, f.l2_norm() * f.l2_norm(), 1e-12);
  EXPECT_LE(max_gap(gl::idft(gl::dft(f)).values(), f.values()), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Groups, DftGroups,
                         ::testing::Values(std::vector<gl::Int>{1}, std::vector<gl::Int>{2},
                                           std::vector<gl::Int>{13}, std::vector<gl::Int>{17},
                                           std::vector<gl::Int>{24}, std::vector<gl::Int>{64},
                                           std::vector<gl::Int>{5, 8}, std::vector<gl::Int>{2, 3, 4},
                                           std::vector<gl::Int>{26}, std::vector<gl::Int>{1, 9, 1}));

TEST(Dft, LinearityAndTranslationModulus) {
  const GroupSpec G({6, 4});
  std::mt19937_64 rng(5);
  const DenseFn f = oracle::random_complex(G, rng), g = oracle::random_complex(G, rng);
  const Complex a{0.3, -1.2};
  std::vector<Complex> comb(G.order());
  for (std::size_t i = 0; i < comb.size(); ++i) comb[i] = a * f[i] + g[i];
  const auto lhs = gl::dft_table(DenseFn(G, comb));
  const auto ff = gl::dft_table(f), gg = gl::dft_table(g);
  const auto tf = gl::dft_table(gl::translate(f, Elem{5, 3}));
  for (std::size_t r = 0; r < lhs.size(); ++r) {
    EXPECT_NEAR(std::abs(lhs[r] - (a * ff[r] + gg[r])), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(tf[r]), std::abs(ff[r]), 1e-12);
  }
}

TEST(Idft, Examples) {
  const GroupSpec G({7});
  gl::SparseFn fh(G);
  fh.set(Elem{0}, 0.3);
  const DenseFn c = gl::idft(fh);
  for (auto z : c.values()) EXPECT_NEAR(std::abs(z - 0.3), 0.0, 1e-15);
  const DenseFn zero = gl::idft(gl::SparseFn(G));
  for (auto z : zero.values()) EXPECT_EQ(z, Complex{});
}

TEST(Idft, DftRoundTripOnRandomSpectra) {
  const GroupSpec G({3, 8});
  std::mt19937_64 rng(9);
  const DenseFn coeffs = oracle::random_complex(G, rng);
  gl::SparseFn fh(G);
  for (std::size_t r = 0; r < G.order(); ++r) fh.set(G.element_at(r), coeffs[r]);
  const auto back = gl::dft_table(gl::idft(fh));
  EXPECT_LE(max_gap(back, coeffs.values()), 1e-12);
}

TEST(SparseFn, Invariants) {
  const GroupSpec G({5});
  gl::SparseFn f(G);
  f.set(Elem{1}, 0.0);
  EXPECT_EQ(f.size(), 0u);
  f.set(Elem{2}, 3.0);
  EXPECT_THROW(f.set_declared_l2(1.0), gl::ValidationError);
  EXPECT_THROW(f.set(Elem{7}, 1.0), gl::ValidationError);
  f.set_declared_l2(5.0);
  EXPECT_DOUBLE_EQ(f.l2_norm(), 5.0);
}

TEST(U2, Examples) {
  const GroupSpec G5({5});
  EXPECT_NEAR(gl::u2_direct(DenseFn::constant(G5, Complex{0.6, 0.8})), 1.0, 1e-12);
  EXPECT_NEAR(gl::u2_direct(character(G5, Elem{1})), 1.0, 1e-12);
  EXPECT_NEAR(gl::u2_fourier(DenseFn::constant(GroupSpec({9}), 0.35)), 0.35, 1e-14);
  for (gl::Int n : {2, 7, 16, 33}) {
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    v[0] = 1.0;
    const auto f = DenseFn::from_real(GroupSpec({n}), v);
    EXPECT_NEAR(gl::u2_fourier(f), std::pow(static_cast<double>(n), -0.75), 1e-14);
    EXPECT_NEAR(gl::u2_direct(f), std::pow(static_cast<double>(n), -0.75), 1e-12);
  }
}

TEST(U2, DirectGuard) {
  EXPECT_THROW(gl::u2_direct(DenseFn::constant(GroupSpec({4097}), 1.0)), gl::BudgetError);
  EXPECT_NO_THROW(gl::u2_direct(DenseFn::constant(GroupSpec({20}), 1.0), 20));
}

TEST(U2, DirectEqualsFourierUpTo512) {
  std::mt19937_64 rng(21);
  for (const auto& m : std::vector<std::vector<gl::Int>>{
           {16}, {2, 2, 2, 2}, {31}, {3, 3, 3}, {6, 10}, {128}, {97}, {8, 8, 8}, {2, 256}}) {
    const GroupSpec G(m);
    DenseFn f = oracle::random_complex(G, rng);
    for (auto& z : f.mutable_values()) z = z / std::max(1.0, std::abs(z) / 2.0);  // |f| <= 2
    EXPECT_NEAR(gl::u2_direct(f), gl::u2_fourier(f), 1e-10) << gl::to_string(G);
  }
}

TEST(U2, SandwichInequality) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const GroupSpec G({static_cast<gl::Int>(2 + t % 30)});
    const DenseFn f = t % 2 ? oracle::random_complex(G, rng) : oracle::random_real(G, rng);
    double sup = 0.0;
    for (auto z : gl::dft_table(f)) sup = std::max(sup, std::abs(z));
    const double u2 = gl::u2_fourier(f);
    EXPECT_LE(sup, u2 + 1e-12);
    EXPECT_LE(u2, std::sqrt(f.l2_norm() * sup) + 1e-12);
  }
}

TEST(Dft, DeterministicAcrossCalls) {
  const GroupSpec G({720});
  std::mt19937_64 rng(8);
  const DenseFn f = oracle::random_real(G, rng);
  const auto a = gl::dft_table(f), b = gl::dft_table(f);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  EXPECT_EQ(gl::u2_fourier(f), gl::u2_fourier(f));
}

TEST(Pullback, SpectrumIsRelabelled) {
  const GroupSpec Z4({4}), Z8({8});
  const DenseFn f = DenseFn::from_real(Z4, std::vector<double>{0.1, 0.9, 0.4, 0.0});
  const auto g = gl::pullback_mod(f, Z8);
  EXPECT_EQ(g.size(), 8u);
  for (std::size_t x = 0; x < 8; ++x) EXPECT_EQ(g[x], f[x % 4]);
  const auto sf = gl::dft(f), sg = gl::dft(g);
  ASSERT_EQ(sf.size(), sg.size());
  for (const auto& [r, z] : sf.entries()) EXPECT_NEAR(std::abs(sg.value(Elem{2 * r[0]}) - z), 0.0, 1e-14);
}
