#include "diracsea/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

namespace diracsea::lattice {
namespace {

// exp(-z^2/2) < kSupportThreshold for z beyond this
const double kSupportSigmas = std::sqrt(-2.0 * std::log(kSupportThreshold));

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// Batched in-place 1-D transforms over both spinor blocks of every column.
class ColumnFft {
public:
  ColumnFft(CMatrix& states, int n) {
    auto* data = reinterpret_cast<fftw_complex*>(states.data());
    const int howmany = static_cast<int>(states.cols()) * 2;
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_many_dft(1, &n, howmany, data, nullptr, 1, n, data, nullptr, 1, n,
                                  FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_many_dft(1, &n, howmany, data, nullptr, 1, n, data, nullptr, 1, n,
                                   FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~ColumnFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  ColumnFft(const ColumnFft&) = delete;
  ColumnFft& operator=(const ColumnFft&) = delete;

  void forward() const { fftw_execute(forward_); }
  void backward() const { fftw_execute(backward_); }

private:
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

void scale_rows(CMatrix& states, const CVector& diag) {
  for (Eigen::Index c = 0; c < states.cols(); ++c) states.col(c).array() *= diag.array();
}

/// Applies a 2x2 matrix per momentum bin to states already in momentum space.
void apply_modes(CMatrix& states, int n, const std::vector<Eigen::Matrix2cd>& modes) {
  for (Eigen::Index c = 0; c < states.cols(); ++c) {
    cplx* up = states.col(c).data();
    cplx* dn = up + n;
    for (int j = 0; j < n; ++j) {
      const Eigen::Matrix2cd& m = modes[j];
      const cplx u = up[j];
      const cplx d = dn[j];
      up[j] = m(0, 0) * u + m(0, 1) * d;
      dn[j] = m(1, 0) * u + m(1, 1) * d;
    }
  }
}

Eigen::Matrix2cd mode_propagator(double p, double mass, double tau) {
  const double e = std::hypot(p, mass);
  const Eigen::Matrix2cd h = mode_hamiltonian(p, mass);
  const double s = e > 0.0 ? std::sin(e * tau) / e : tau;
  return std::cos(e * tau) * Eigen::Matrix2cd::Identity() - kI * s * h;
}

/// Site-wise fields at time t.
struct Profiles {
  std::vector<double> a0;
  std::vector<double> chi;
  double a1_mean = 0.0;
};

Profiles sample(const LatticeConfig& config, const Potential1p1& pot, double t) {
  Profiles pr;
  pr.a0.resize(config.n);
  pr.chi.resize(config.n);
  pr.a1_mean = pot.a1_mean(t, config.length);
  for (int k = 0; k < config.n; ++k) {
    const double x = config.position(k);
    pr.a0[k] = pot.a0(t, x);
    pr.chi[k] = pot.chi(t, x, config);
    if (!std::isfinite(pr.a0[k]) || !std::isfinite(pr.chi[k]))
      throw InvalidInput("potential", "non-finite potential sample");
  }
  return pr;
}

/// G(t) = diag(exp(-i e chi)) on both spinor blocks, times `extra`.
CVector site_phases(const LatticeConfig& config, const std::vector<double>& chi, double sign,
                    const std::vector<double>* a0, double tau) {
  const int n = config.n;
  CVector d(2 * n);
  for (int k = 0; k < n; ++k) {
    double phase = -sign * config.coupling * chi[k];
    if (a0) phase -= config.coupling * (*a0)[k] * tau;
    d(k) = d(k + n) = std::exp(kI * phase);
  }
  return d;
}

void check_window(const LatticeConfig& config, double t_a, double t_b) {
  constexpr double slack = 1e-12;
  if (!(t_a <= t_b)) throw InvalidInput("t_b", "inverted time window");
  if (t_a < config.t0 - slack || t_b > config.t1 + slack)
    throw InvalidInput("t_a", "evolution window outside [t0, t1]");
}

}  // namespace

// ---------------------------------------------------------------------------
// LatticeConfig

void LatticeConfig::validate() const {
  if (n < 4 || !is_power_of_two(n)) throw InvalidInput("N", "must be a power of two >= 4");
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidInput("L", "must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidInput("m", "must be positive");
  if (!std::isfinite(coupling)) throw InvalidInput("e", "must be finite");
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 >= t0))
    throw InvalidInput("t1", "requires t0 <= t1");
  if (nsteps < 1) throw InvalidInput("nsteps", "must be >= 1");
  if (!(tol_unitarity > 0.0)) throw InvalidInput("tol_unitarity", "must be positive");
}

double LatticeConfig::momentum(int j) const {
  const int signed_j = j < n / 2 ? j : j - n;
  if (signed_j == -n / 2) return 0.0;
  return 2.0 * std::numbers::pi * signed_j / length;
}

double LatticeConfig::displacement(int k, int l) const {
  double d = (l - k) * dx();
  const double half = 0.5 * length;
  d = std::fmod(d, length);
  if (d > half) d -= length;
  if (d <= -half) d += length;
  return d;
}

// ---------------------------------------------------------------------------
// GaussianPulse

double GaussianPulse::temporal(double t) const {
  const double z = (t - t_center) / sigma_t;
  return std::exp(-0.5 * z * z);
}

double GaussianPulse::value(double t, double x) const {
  const double z = (x - x_center) / sigma_x;
  return amplitude * temporal(t) * std::exp(-0.5 * z * z);
}

double GaussianPulse::d_t(double t, double x) const {
  return -value(t, x) * (t - t_center) / (sigma_t * sigma_t);
}

double GaussianPulse::d_x(double t, double x) const {
  return -value(t, x) * (x - x_center) / (sigma_x * sigma_x);
}

double GaussianPulse::spatial_antiderivative(double x) const {
  return sigma_x * std::sqrt(std::numbers::pi / 2.0) *
         std::erf((x - x_center) / (std::numbers::sqrt2 * sigma_x));
}

double GaussianPulse::spatial_integral() const {
  return sigma_x * std::sqrt(2.0 * std::numbers::pi);
}

// ---------------------------------------------------------------------------
// Potential1p1

namespace {

void validate_pulse(const GaussianPulse& p, const LatticeConfig& config, const std::string& name,
                    bool check_t1) {
  if (!std::isfinite(p.amplitude) || !std::isfinite(p.t_center) || !std::isfinite(p.x_center))
    throw InvalidInput(name, "non-finite pulse parameter");
  if (!(p.sigma_t > 0.0) || !(p.sigma_x > 0.0) || !std::isfinite(p.sigma_t) ||
      !std::isfinite(p.sigma_x))
    throw InvalidInput(name, "pulse widths must be positive");
  if (p.amplitude == 0.0) return;
  const double half = 0.5 * config.length;
  if ((half - std::abs(p.x_center)) / p.sigma_x < kSupportSigmas)
    throw InvalidInput(name, "pulse not negligible at the box boundary");
  if ((p.t_center - config.t0) / p.sigma_t < kSupportSigmas)
    throw InvalidInput(name, "pulse not negligible at t0");
  if (check_t1 && (config.t1 - p.t_center) / p.sigma_t < kSupportSigmas)
    throw InvalidInput(name, "pulse not negligible at t1");
}

}  // namespace

Potential1p1::Potential1p1(const LatticeConfig& config, std::vector<GaussianPulse> a0,
                           std::vector<GaussianPulse> a1, std::vector<GaussianPulse> gamma)
    : a0_(std::move(a0)), a1_(std::move(a1)), gamma_(std::move(gamma)) {
  config.validate();
  for (const auto& p : a0_) validate_pulse(p, config, "potential.a0_pulses", true);
  for (const auto& p : a1_) validate_pulse(p, config, "potential.a1_pulses", true);
  for (const auto& p : gamma_) validate_pulse(p, config, "potential.gamma_pulses", false);
}

bool Potential1p1::is_zero() const {
  auto zero = [](const std::vector<GaussianPulse>& v) {
    return std::all_of(v.begin(), v.end(), [](const auto& p) { return p.amplitude == 0.0; });
  };
  return zero(a0_) && zero(a1_) && zero(gamma_);
}

double Potential1p1::a0(double t, double x) const {
  double v = 0.0;
  for (const auto& p : a0_) v += p.value(t, x);
  for (const auto& g : gamma_) v += g.d_t(t, x);
  return v;
}

double Potential1p1::a1(double t, double x) const {
  double v = 0.0;
  for (const auto& p : a1_) v += p.value(t, x);
  for (const auto& g : gamma_) v -= g.d_x(t, x);
  return v;
}

double Potential1p1::gamma(double t, double x) const {
  double v = 0.0;
  for (const auto& g : gamma_) v += g.value(t, x);
  return v;
}

double Potential1p1::a1_mean(double t, double length) const {
  const double half = 0.5 * length;
  double integral = 0.0;
  for (const auto& p : a1_)
    integral += p.amplitude * p.temporal(t) *
                (p.spatial_antiderivative(half) - p.spatial_antiderivative(-half));
  integral -= gamma(t, half) - gamma(t, -half);
  return integral / length;
}

double Potential1p1::chi(double t, double x, const LatticeConfig& config) const {
  double v = a1_mean(t, config.length) * x + gamma(t, x);
  for (const auto& p : a1_) v -= p.amplitude * p.temporal(t) * p.spatial_antiderivative(x);
  return v;
}

Potential1p1 Potential1p1::with_pulse(int mu, const GaussianPulse& pulse) const {
  Potential1p1 out = *this;
  if (mu == 0) {
    out.a0_.push_back(pulse);
  } else if (mu == 1) {
    out.a1_.push_back(pulse);
  } else {
    throw InvalidInput("component", "must be 0 or 1");
  }
  return out;
}

// ---------------------------------------------------------------------------
// SpinorField

cplx SpinorField::inner(const SpinorField& other) const {
  if (values.size() != other.values.size()) throw InvalidInput("spinor", "size mismatch");
  return values.dot(other.values) * dx;
}

double SpinorField::norm() const { return std::sqrt(values.squaredNorm() * dx); }

// ---------------------------------------------------------------------------
// Operators

Eigen::Matrix2cd mode_hamiltonian(double p, double mass) {
  Eigen::Matrix2cd h;
  h << mass, p, p, -mass;
  return h;
}

CMatrix hamiltonian(const LatticeConfig& config, const Potential1p1& pot, double t) {
  config.validate();
  check_window(config, t, t);
  const int n = config.n;
  const Profiles pr = sample(config, pot, t);

  std::vector<Eigen::Matrix2cd> modes(n);
  for (int j = 0; j < n; ++j)
    modes[j] = mode_hamiltonian(config.momentum(j) - config.coupling * pr.a1_mean, config.mass) /
               static_cast<double>(n);

  CMatrix h = CMatrix::Identity(2 * n, 2 * n);
  scale_rows(h, site_phases(config, pr.chi, -1.0, nullptr, 0.0));  // G^dagger
  {
    ColumnFft fft(h, n);
    fft.forward();
    apply_modes(h, n, modes);
    fft.backward();
  }
  scale_rows(h, site_phases(config, pr.chi, 1.0, nullptr, 0.0));  // G
  for (int k = 0; k < n; ++k) {
    h(k, k) += config.coupling * pr.a0[k];
    h(k + n, k + n) += config.coupling * pr.a0[k];
  }
  return h;
}

CMatrix propagate(const LatticeConfig& config, const Potential1p1& pot, double t_a, double t_b,
                  int steps, CMatrix states) {
  config.validate();
  if (steps < 1) throw InvalidInput("nsteps", "step count must be >= 1");
  check_window(config, t_a, t_b);
  const int n = config.n;
  if (states.rows() != 2 * n) throw InvalidInput("states", "row count must be 2N");

  const double dt = (t_b - t_a) / steps;
  const bool free_field = pot.is_zero();
  std::vector<Eigen::Matrix2cd> modes(n);
  auto fill_modes = [&](double shift) {
    for (int j = 0; j < n; ++j)
      modes[j] = mode_propagator(config.momentum(j) - config.coupling * shift, config.mass, dt) /
                 static_cast<double>(n);
  };
  if (free_field) fill_modes(0.0);

  ColumnFft fft(states, n);
  for (int s = 0; s < steps; ++s) {
    const double tm = t_a + (s + 0.5) * dt;
    if (free_field) {
      fft.forward();
      apply_modes(states, n, modes);
      fft.backward();
      continue;
    }
    const Profiles pr = sample(config, pot, tm);
    fill_modes(pr.a1_mean);
    // exp(-i V dt/2) G^dagger, kinetic, G exp(-i V dt/2)
    scale_rows(states, site_phases(config, pr.chi, -1.0, &pr.a0, 0.5 * dt));
    fft.forward();
    apply_modes(states, n, modes);
    fft.backward();
    scale_rows(states, site_phases(config, pr.chi, 1.0, &pr.a0, 0.5 * dt));
  }
  return states;
}

UnitaryMap evolve(const LatticeConfig& config, const Potential1p1& pot, double t_a, double t_b) {
  config.validate();
  check_window(config, t_a, t_b);
  const double window = config.t1 - config.t0;
  int steps = 1;
  if (window > 0.0)
    steps = std::max(1, static_cast<int>(std::lround(config.nsteps * (t_b - t_a) / window)));
  CMatrix u = propagate(config, pot, t_a, t_b, steps,
                        CMatrix::Identity(config.dim(), config.dim()));
  UnitaryMap map = make_unitary_map(std::move(u), t_a, t_b);
  if (!(map.unitarity_defect <= config.tol_unitarity))
    throw NumericalFailure("unitarity", "evolution defect " +
                                            std::to_string(map.unitarity_defect) +
                                            " exceeds tol_unitarity");
  return map;
}

SpectralSplit spectral_projectors(const CMatrix& h, double gap) {
  if (h.rows() != h.cols()) throw InvalidInput("hamiltonian", "must be square");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h));
  const RVector& w = es.eigenvalues();
  Eigen::Index neg = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (std::abs(w(i)) < gap)
      throw NumericalFailure("spectral_gap",
                             "eigenvalue " + std::to_string(w(i)) + " within gap of zero");
    if (w(i) < 0.0) ++neg;
  }
  const CMatrix& v = es.eigenvectors();
  SpectralSplit out;
  out.minus = make_projector(v.leftCols(neg) * v.leftCols(neg).adjoint());
  out.plus = make_projector(v.rightCols(w.size() - neg) * v.rightCols(w.size() - neg).adjoint());
  out.eigenvalues = w;
  out.rank_minus = static_cast<int>(neg);
  return out;
}

FreeModes free_modes(const LatticeConfig& config) {
  config.validate();
  const int n = config.n;
  FreeModes fm;
  fm.negative = CMatrix::Zero(2 * n, n);
  fm.positive = CMatrix::Zero(2 * n, n);
  fm.momenta.resize(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j) {
    const double p = config.momentum(j);
    const double e = std::hypot(p, config.mass);
    const double c = 1.0 / std::sqrt(2.0 * e * (e + config.mass));
    const cplx up_plus = c * (e + config.mass), dn_plus = c * p;
    const cplx up_minus = -c * p, dn_minus = c * (e + config.mass);
    fm.momenta[j] = p;
    for (int k = 0; k < n; ++k) {
      // exp(2 pi i j k / N), the FFT bin-j plane wave
      const double arg = 2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(j) * k) % n) / n;
      const cplx w = norm * std::exp(kI * arg);
      fm.positive(k, j) = w * up_plus;
      fm.positive(k + n, j) = w * dn_plus;
      fm.negative(k, j) = w * up_minus;
      fm.negative(k + n, j) = w * dn_minus;
    }
  }
  return fm;
}

SpectralSplit free_projectors(const LatticeConfig& config) {
  config.validate();
  const int n = config.n;
  std::vector<Eigen::Matrix2cd> minus(n);
  std::vector<double> energies;
  energies.reserve(2 * n);
  for (int j = 0; j < n; ++j) {
    const double p = config.momentum(j);
    const double e = std::hypot(p, config.mass);
    minus[j] = 0.5 * (Eigen::Matrix2cd::Identity() - mode_hamiltonian(p, config.mass) / e) /
               static_cast<double>(n);
    energies.push_back(-e);
    energies.push_back(e);
  }
  CMatrix pm = CMatrix::Identity(2 * n, 2 * n);
  {
    ColumnFft fft(pm, n);
    fft.forward();
    apply_modes(pm, n, minus);
    fft.backward();
  }
  pm = hermitian_part(pm);
  CMatrix pp = CMatrix::Identity(2 * n, 2 * n) - pm;
  std::sort(energies.begin(), energies.end());
  SpectralSplit out;
  out.minus = make_projector(std::move(pm));
  out.plus = make_projector(std::move(pp));
  out.eigenvalues = Eigen::Map<const RVector>(energies.data(), static_cast<Eigen::Index>(energies.size()));
  out.rank_minus = n;
  return out;
}

CVector gauge_phase_diagonal(const LatticeConfig& config, const Potential1p1& pot, double t) {
  config.validate();
  const int n = config.n;
  CVector d(2 * n);
  for (int k = 0; k < n; ++k) {
    const double g = pot.gamma(t, config.position(k));
    if (!std::isfinite(g)) throw InvalidInput("potential.gamma_pulses", "non-finite sample");
    d(k) = d(k + n) = std::exp(-kI * config.coupling * g);
  }
  return d;
}

UnitaryMap gauge_phase(const LatticeConfig& config, const Potential1p1& pot, double t) {
  CMatrix m = gauge_phase_diagonal(config, pot, t).asDiagonal();
  return make_unitary_map(std::move(m), t, t);
}

SpinorField charge_conjugation(const SpinorField& psi) {
  const Eigen::Index n = psi.values.size() / 2;
  SpinorField out;
  out.dx = psi.dx;
  out.values.resize(psi.values.size());
  out.values.head(n) = psi.values.tail(n).conjugate();
  out.values.tail(n) = psi.values.head(n).conjugate();
  return out;
}

CMatrix charge_conjugate_operator(const CMatrix& op) {
  const Eigen::Index n = op.rows() / 2;
  CMatrix out(op.rows(), op.cols());
  const CMatrix c = op.conjugate();
  out.topLeftCorner(n, n) = c.bottomRightCorner(n, n);
  out.topRightCorner(n, n) = c.bottomLeftCorner(n, n);
  out.bottomLeftCorner(n, n) = c.topRightCorner(n, n);
  out.bottomRightCorner(n, n) = c.topLeftCorner(n, n);
  return out;
}

}  // namespace diracsea::lattice
