#include <cmath>
#include <complex>
#include <numbers>

#include "diracsea/special.hpp"
#include "doctest.h"

using diracsea::special::faddeeva;
using cd = std::complex<double>;

namespace {

// w(z) = i/pi int exp(-t^2)/(z - t) dt for Im z > 0, by trapezoid on a wide grid.
cd faddeeva_quadrature(cd z) {
  const double h = 1e-3;
  cd sum = 0.0;
  for (double t = -12.0; t <= 12.0; t += h) sum += std::exp(-t * t) / (z - t);
  return cd(0.0, 1.0) / std::numbers::pi * sum * h;
}

}  // namespace

TEST_CASE("faddeeva reference values") {
  // w(0) = 1, w(i y) = exp(y^2) erfc(y)
  CHECK(std::abs(faddeeva(0.0) - cd(1.0, 0.0)) < 1e-14);
  for (double y : {0.1, 1.0, 3.0, 20.0}) {
    const double ref = std::exp(y * y) * std::erfc(y);
    CHECK(std::abs(faddeeva(cd(0.0, y)) - ref) < 1e-13 * ref);
  }
  // real axis: Re w(x) = exp(-x^2)
  for (double x : {0.5, 2.0, 5.0})
    CHECK(std::abs(faddeeva(cd(x, 0.0)).real() - std::exp(-x * x)) < 1e-14);
}

TEST_CASE("faddeeva matches quadrature in the upper half plane") {
  for (cd z : {cd(1.0, 0.5), cd(-2.0, 1.5), cd(4.0, 0.3), cd(0.3, 2.0)}) {
    const cd ref = faddeeva_quadrature(z);
    CHECK(std::abs(faddeeva(z) - ref) < 1e-8 * std::abs(ref));
  }
}

TEST_CASE("faddeeva reflection and symmetry") {
  for (cd z : {cd(1.0, -0.5), cd(-0.7, -1.2), cd(3.0, -0.1)}) {
    const cd reflected = 2.0 * std::exp(-z * z) - faddeeva(-z);
    CHECK(std::abs(faddeeva(z) - reflected) < 1e-12 * std::abs(reflected));
  }
  // w(-conj z) = conj w(z)
  const cd z(1.3, 0.8);
  CHECK(std::abs(faddeeva(-std::conj(z)) - std::conj(faddeeva(z))) < 1e-14);
}
