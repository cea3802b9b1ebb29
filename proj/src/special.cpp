#include "diracsea/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace diracsea::special {
namespace {

// Weideman's rational expansion in (L + iz)/(L - iz), upper half plane.
constexpr int kTerms = 40;

struct WeidemanTable {
  double scale;
  std::array<double, kTerms> coeff;  // highest power first

  WeidemanTable() {
    constexpr int m = 2 * kTerms;
    constexpr int m2 = 2 * m;
    scale = std::sqrt(kTerms / std::numbers::sqrt2);
    // f(k) sampled at k = -m+1 .. m-1, prefixed with a zero, then fftshift and
    // take the real part of the DFT.
    std::array<double, m2> f{};
    f[0] = 0.0;
    for (int k = -m + 1; k <= m - 1; ++k) {
      const double theta = k * std::numbers::pi / m;
      const double t = scale * std::tan(theta / 2.0);
      f[k + m] = std::exp(-t * t) * (scale * scale + t * t);
    }
    std::array<double, m2> shifted{};
    for (int i = 0; i < m2; ++i) shifted[i] = f[(i + m) % m2];
    std::array<double, kTerms + 1> a{};
    for (int j = 0; j <= kTerms; ++j) {
      double re = 0.0;
      for (int n = 0; n < m2; ++n)
        re += shifted[n] * std::cos(2.0 * std::numbers::pi * j * n / m2);
      a[j] = re / m2;
    }
    for (int j = 0; j < kTerms; ++j) coeff[j] = a[kTerms - j];
  }
};

const WeidemanTable& table() {
  static const WeidemanTable t;
  return t;
}

std::complex<double> faddeeva_upper(std::complex<double> z) {
  const std::complex<double> i{0.0, 1.0};
  if (std::abs(z) > 12.0) {
    // Laplace continued fraction, converges fast for large |z|.
    std::complex<double> frac = z;
    for (int k = 30; k >= 1; --k) frac = z - (0.5 * k) / frac;
    return i / (std::sqrt(std::numbers::pi) * frac);
  }
  const auto& tab = table();
  const std::complex<double> denom = tab.scale - i * z;
  const std::complex<double> zz = (tab.scale + i * z) / denom;
  std::complex<double> p = 0.0;
  for (double c : tab.coeff) p = p * zz + c;
  return 2.0 * p / (denom * denom) + (1.0 / std::sqrt(std::numbers::pi)) / denom;
}

}  // namespace

std::complex<double> faddeeva(std::complex<double> z) {
  if (z.imag() >= 0.0) return faddeeva_upper(z);
  return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

}  // namespace diracsea::special
