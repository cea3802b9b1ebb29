#pragma once

// Pair-creation observables of a lifted evolution: pair number, vacuum
// persistence, one- and two-pair spectra, the sector-sum audit, the
// Bogolyubov current under a declared phase convention, and the pure-gauge
// covariance probe.

#include <array>
#include <vector>

#include "diracsea/lattice.hpp"
#include "diracsea/wedge.hpp"

namespace diracsea::observables {

/// ||P+_out U P-_in||_HS^2, the summed first-order pair probability.
double pair_number(const CMatrix& u, const CMatrix& in_minus, const CMatrix& out_plus);

/// Same quantity as sum_{ij} |<chi_i, U phi_j>|^2 over orthonormal bases.
double pair_number_double_sum(const CMatrix& u, const CMatrix& in_sea,
                              const CMatrix& out_complement);

/// |<out vacuum, lifted in vacuum>|^2 = |det U_--|^2.
double vacuum_persistence(const wedge::LiftedEvolution& lifted);

/// det(I - U_+-^dagger U_+-), the right-hand side of the persistence identity.
double persistence_from_blocks(const wedge::LiftedEvolution& lifted);

struct PairChannel {
  int electron = 0;  // out complement column
  int hole = 0;      // in/out sea column
  cplx amplitude;
  double probability = 0.0;
};

struct TwoPairChannel {
  int electron1 = 0, electron2 = 0;
  int hole1 = 0, hole2 = 0;
  cplx amplitude;
  double probability = 0.0;
};

struct PairSpectrum {
  double persistence = 0.0;
  std::vector<PairChannel> one_pair;  // every channel, row-major in (electron, hole)
  std::vector<TwoPairChannel> two_pair;
  double one_pair_total = 0.0;
  double two_pair_total = 0.0;
  int max_pairs = 1;
  int channel_cap = 0;        // one-pair channels used to seed the two-pair sector
  bool truncated = false;     // more channels existed than the cap
};

inline constexpr int kTwoPairChannelCap = 64;

/// max_pairs in {1, 2}. Two-pair states are built from the `channel_cap`
/// most probable one-pair channels.
PairSpectrum pair_spectrum(const wedge::LiftedEvolution& lifted, int max_pairs,
                           int channel_cap = kTwoPairChannelCap);

/// persistence + all reported sector probabilities.
double total_probability_check(const wedge::LiftedEvolution& lifted, int max_pairs);
double total_probability(const PairSpectrum& spectrum);

/// theta(A) = c * sum_mu int A_mu(t, x) j^mu(t, x) dt dx with Gaussian
/// profiles j^mu. Gamma pulses are not included.
struct PhaseFunctional {
  double c = 0.0;
  std::array<lattice::GaussianPulse, 2> profile{};  // j^0, j^1

  double evaluate(const lattice::Potential1p1& pot) const;
  /// theta(A + pulse in component mu) - theta(A)
  double response(int mu, const lattice::GaussianPulse& pulse) const;
  /// c j^mu(t, x)
  double summand(int mu, double t, double x) const;
};

struct CurrentOptions {
  double epsilon = 1e-3;
  double bump_sigma_t = 0.0;  // 0 selects 3 dt
  double bump_sigma_x = 0.0;  // 0 selects 3 dx
  double rel_tol = 0.05;
  double abs_floor = 1e-9;
};

struct CurrentSample {
  double t = 0.0, x = 0.0;
  int mu = 0;
  double value = 0.0;       // Richardson-extrapolated
  double imag = 0.0;        // imaginary part left over, a consistency diagnostic
  double value_eps = 0.0;   // central difference at epsilon
  double value_half = 0.0;  // central difference at epsilon / 2
  double epsilon = 0.0;
  double bump_sigma_t = 0.0, bump_sigma_x = 0.0;
  double residual = 0.0;    // |value - value_half|
  bool resolved = true;
};

/// Vacuum expectation of the current at (t, x) in component mu, from the
/// vacuum-vacuum amplitude of U~(A + eps b) U~(A)^{-1} with the construction's
/// phase modified to exp(-i theta(A)) U~.
CurrentSample bogolyubov_current(const lattice::LatticeConfig& config,
                                 const lattice::Potential1p1& pot, double t, double x, int mu,
                                 const PhaseFunctional& theta = {},
                                 const CurrentOptions& options = {});

struct GaugeProbeReport {
  double fixed_pair_number = 0.0;        // against the free out-polarization
  double transformed_pair_number = 0.0;  // against exp(-ie Gamma(t1)) P- exp(ie Gamma(t1))
  double gamma_t1_max = 0.0;             // max_x |Gamma(t1, x)|
  double unitarity_defect = 0.0;
};

/// `pot` must be pure gauge (gamma pulses only).
GaugeProbeReport gauge_covariance_probe(const lattice::LatticeConfig& config,
                                        const lattice::Potential1p1& pot);

/// Free in/out polarization of the lattice model in plane-wave bases.
wedge::Polarization free_polarization(const lattice::LatticeConfig& config);

}  // namespace diracsea::observables
