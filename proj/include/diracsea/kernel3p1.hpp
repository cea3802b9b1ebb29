#pragma once

// First-order pair-creation kernel of the 3+1-dimensional Dirac equation in a
// Gaussian external potential, and Monte-Carlo estimates of its squared
// Hilbert-Schmidt norm under a momentum cutoff.
//
// The amplitude for a negative-energy plane wave (p', s') to end up in the
// positive-energy wave (p, s) on the equal-time surface t = t_s is
//
//   M = -i e sum_mu T_mu(E + E', p - p') <u+(p,s), Gamma_mu u-(p',s')>,
//
// with Gamma_0 = 1, Gamma_k = -alpha^k (contravariant A^k), and T_mu the
// space-time transform of A_mu truncated at t_s:
//
//   T(w, q) = int_{-inf}^{t_s} dt int d^3x exp(i w t - i q.x) A(t, x).
//
// For t_s = +inf this is the full transform. The divergence in the cutoff for
// spatial components only shows while the field is on at t_s; the default
// surface is therefore the temporal center of the pulses.
//
// Dirac representation, helicity basis. Momenta in units where m is the
// mass; cutoffs are given in units of m by the callers.

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "diracsea/operators.hpp"

namespace diracsea::kernel3p1 {

using Vec3 = std::array<double, 3>;

struct Pulse4 {
  double amplitude = 0.0;
  double t_center = 0.0;
  Vec3 x_center{0.0, 0.0, 0.0};
  double sigma_t = 1.0;
  double sigma_x = 1.0;
};

struct Potential3p1 {
  std::array<Pulse4, 4> components{};  // contravariant A^0, A^1, A^2, A^3
  double mass = 1.0;
  double coupling = 1.0;
  double surface_time = 0.0;  // +infinity selects the full transform

  void validate() const;
  bool is_zero() const;
};

/// Full space-time transform of each component, closed form.
std::array<cplx, 4> fourier_potential(const Potential3p1& pot, double omega, const Vec3& q);

/// Transform truncated at the surface time t_s.
std::array<cplx, 4> fourier_potential_until(const Potential3p1& pot, double omega, const Vec3& q,
                                            double t_surface);

enum class Helicity { up = 0, down = 1 };

using Spinor4 = Eigen::Vector4cd;

/// Normalized free positive/negative energy spinors of given helicity.
Spinor4 positive_spinor(const Vec3& p, Helicity s, double mass);
Spinor4 negative_spinor(const Vec3& p, Helicity s, double mass);

cplx pair_kernel_element(const Potential3p1& pot, const Vec3& p, Helicity s, const Vec3& p_prime,
                         Helicity s_prime);

struct SamplerSpec {
  std::uint64_t samples = 200000;
  std::uint64_t seed = 1;
  int threads = 1;
  double stderr_budget = 0.05;  // relative
};

struct HsEstimate {
  double value = 0.0;
  double stderr = 0.0;
  std::uint64_t samples = 0;
  bool over_budget = false;  // stderr / value above the sampler budget
};

/// Estimate of int_{|p|,|p'| <= cutoff} sum_{s,s'} |M|^2 d^3p d^3p' / (2 pi)^6.
/// Deterministic for a fixed seed regardless of the thread count.
HsEstimate hs_norm_squared(const Potential3p1& pot, double cutoff, const SamplerSpec& spec);

/// Same for the difference kernel M(a) - M(b).
HsEstimate hs_norm_squared_difference(const Potential3p1& a, const Potential3p1& b, double cutoff,
                                      const SamplerSpec& spec);

enum class Verdict { convergent, divergent, inconclusive };
const char* to_string(Verdict v);

struct ProbeThresholds {
  double divergent_slope = 0.5;
  double convergent_growth = 0.05;
};

struct CutoffProbeResult {
  std::vector<double> cutoffs;
  std::vector<double> hs2;
  std::vector<double> stderr;
  double slope = 0.0;                 // d log hs2 / d log cutoff, upper half
  double last_doubling_growth = 0.0;  // relative increase per doubling, last pair
  bool monotone = true;               // within error bars
  bool any_over_budget = false;
  Verdict verdict = Verdict::inconclusive;
  ProbeThresholds thresholds;
};

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Applies the verdict rules to a finished cutoff series.
CutoffProbeResult classify(std::vector<double> cutoffs, std::vector<double> hs2,
                           std::vector<double> stderr, bool any_over_budget,
                           const ProbeThresholds& thresholds);

/// `cutoffs` ascending, at least four, spanning a factor of 8 or more.
CutoffProbeResult cutoff_probe(const Potential3p1& pot, const std::vector<double>& cutoffs,
                               const SamplerSpec& spec, const ProbeThresholds& thresholds = {});

/// Probe of the difference kernel M(a) - M(b). Both potentials must share mass
/// and coupling.
CutoffProbeResult tangential_probe(const Potential3p1& a, const Potential3p1& b,
                                   const std::vector<double>& cutoffs, const SamplerSpec& spec,
                                   const ProbeThresholds& thresholds = {});

}  // namespace diracsea::kernel3p1
