#pragma once

#include <complex>

namespace diracsea::special {

/// Faddeeva function w(z) = exp(-z^2) erfc(-i z), valid in the whole complex
/// plane. Relative accuracy about 1e-13 for the arguments used here.
std::complex<double> faddeeva(std::complex<double> z);

}  // namespace diracsea::special
