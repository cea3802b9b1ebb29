#pragma once

// One-particle Dirac dynamics on a periodic 1+1-dimensional lattice.
//
// State layout: a vector of the 2N-dimensional one-particle space stores the
// upper spinor component at rows [0, N) and the lower one at rows [N, 2N),
// site k at x_k = -L/2 + k dx. Operators are represented in the orthonormal
// site basis, so the weighted inner product sum_k phi^dagger psi dx and the
// plain Euclidean one give the same adjoints.
//
// Conventions (hbar = c = 1): alpha = sigma^1, beta = sigma^3,
//   H(t) = sigma^1 (p - e A1) + sigma^3 m + e A0,
// with A1 the contravariant spatial component. A gauge function Gamma acts as
// A0 -> A0 + d_t Gamma, A1 -> A1 - d_x Gamma, psi -> exp(-i e Gamma) psi.

#include <span>
#include <vector>

#include "diracsea/operators.hpp"

namespace diracsea::lattice {

struct LatticeConfig {
  int n = 256;            // grid points, power of two
  double length = 20.0;   // box length L
  double mass = 1.0;
  double coupling = 0.05; // e
  double t0 = -4.0;
  double t1 = 4.0;
  int nsteps = 200;
  double tol_unitarity = 1e-10;

  /// Throws InvalidInput naming the first bad field.
  void validate() const;

  int dim() const { return 2 * n; }
  double dx() const { return length / n; }
  double dt() const { return (t1 - t0) / nsteps; }
  double position(int k) const { return -0.5 * length + k * dx(); }
  /// Momentum of FFT bin j (bins j >= N/2 carry negative momenta). The
  /// Nyquist bin is assigned 0, the usual convention for odd derivatives.
  double momentum(int j) const;
  /// Signed minimal periodic displacement x_l - x_k in (-L/2, L/2]; the
  /// antipodal tie resolves to +L/2.
  double displacement(int k, int l) const;
};

/// Space-time Gaussian amplitude * exp(-(t-tc)^2/2st^2 - (x-xc)^2/2sx^2).
struct GaussianPulse {
  double amplitude = 0.0;
  double t_center = 0.0;
  double x_center = 0.0;
  double sigma_t = 1.0;
  double sigma_x = 1.0;

  double value(double t, double x) const;
  double d_t(double t, double x) const;
  double d_x(double t, double x) const;
  double temporal(double t) const;
  /// Antiderivative in x of the spatial profile, normalized so that it runs
  /// from -I/2 to +I/2 across the pulse (I = integral over the real line).
  double spatial_antiderivative(double x) const;
  double spatial_integral() const;
};

/// Relative level below which a pulse counts as switched off.
inline constexpr double kSupportThreshold = 1e-12;

class Potential1p1 {
public:
  Potential1p1() = default;

  /// Validates finiteness, widths, and effective compact support of every
  /// pulse against the box and the window [t0, t1]. Gamma pulses are checked
  /// at the box boundary and at t0 only.
  Potential1p1(const LatticeConfig& config, std::vector<GaussianPulse> a0,
               std::vector<GaussianPulse> a1, std::vector<GaussianPulse> gamma = {});

  const std::vector<GaussianPulse>& a0_pulses() const { return a0_; }
  const std::vector<GaussianPulse>& a1_pulses() const { return a1_; }
  const std::vector<GaussianPulse>& gamma_pulses() const { return gamma_; }

  bool is_zero() const;

  /// Fields including the gauge contribution.
  double a0(double t, double x) const;
  double a1(double t, double x) const;
  double gamma(double t, double x) const;

  /// Spatial mean of A1 over the box.
  double a1_mean(double t, double length) const;
  /// chi with -d_x chi = A1 - mean(A1), periodic on the box, fixed up to a
  /// constant by chi = Gamma + (contribution of the A1 pulses).
  double chi(double t, double x, const LatticeConfig& config) const;

  /// Copy with one extra pulse added to component mu (0: A0, 1: A1). Not
  /// re-validated against a config; callers construct through the ctor when
  /// they need validation.
  Potential1p1 with_pulse(int mu, const GaussianPulse& pulse) const;

private:
  std::vector<GaussianPulse> a0_;
  std::vector<GaussianPulse> a1_;
  std::vector<GaussianPulse> gamma_;
};

struct SpinorField {
  CVector values;   // 2N entries, component-major
  double dx = 1.0;

  cplx inner(const SpinorField& other) const;  // <this, other> with weight dx
  double norm() const;
};

/// Dense Hermitian Hamiltonian at time t.
CMatrix hamiltonian(const LatticeConfig& config, const Potential1p1& pot, double t);

/// Free Hamiltonian per momentum mode: sigma^1 p + sigma^3 m.
Eigen::Matrix2cd mode_hamiltonian(double p, double mass);

/// Strang split-step evolution of the whole one-particle space from t_a to
/// t_b. The step count is nsteps scaled to the sub-window (at least 1).
UnitaryMap evolve(const LatticeConfig& config, const Potential1p1& pot, double t_a, double t_b);

/// Same stepping applied to the columns of `states` with an explicit step
/// count; no unitarity check.
CMatrix propagate(const LatticeConfig& config, const Potential1p1& pot, double t_a,
                  double t_b, int steps, CMatrix states);

struct SpectralSplit {
  Projector plus;
  Projector minus;
  RVector eigenvalues;  // ascending
  int rank_minus = 0;
};

/// Projectors onto the positive and negative spectral subspaces of a
/// Hermitian matrix. Throws NumericalFailure("spectral_gap") if an eigenvalue
/// lies within `gap` of zero.
SpectralSplit spectral_projectors(const CMatrix& h, double gap = 1e-8);

/// Exact free projectors assembled per momentum mode.
SpectralSplit free_projectors(const LatticeConfig& config);

/// Orthonormal plane-wave bases of the free negative (sea) and positive
/// subspaces; column j of either carries the momentum of FFT bin j.
struct FreeModes {
  CMatrix negative;
  CMatrix positive;
  std::vector<double> momenta;
};
FreeModes free_modes(const LatticeConfig& config);

/// Diagonal entries exp(-i e Gamma(t, x_k)) on both components.
CVector gauge_phase_diagonal(const LatticeConfig& config, const Potential1p1& pot, double t);
UnitaryMap gauge_phase(const LatticeConfig& config, const Potential1p1& pot, double t);

/// C psi = sigma^1 psi^*. Anti-unitary, C^2 = +1 in this representation.
SpinorField charge_conjugation(const SpinorField& psi);

/// Conjugates an operator by C: C A C^{-1} = sigma^1 A^* sigma^1.
CMatrix charge_conjugate_operator(const CMatrix& op);

}  // namespace diracsea::lattice
