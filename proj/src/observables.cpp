#include "diracsea/observables.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include "diracsea/polarization.hpp"

namespace diracsea::observables {
namespace {

using lattice::GaussianPulse;

// int exp(-(s-a)^2/2 s1^2 - (s-b)^2/2 s2^2) ds
double gaussian_overlap(double a, double s1, double b, double s2) {
  const double v = s1 * s1 + s2 * s2;
  return std::sqrt(2.0 * std::numbers::pi * s1 * s1 * s2 * s2 / v) *
         std::exp(-0.5 * (a - b) * (a - b) / v);
}

double pulse_overlap(const GaussianPulse& p, const GaussianPulse& q) {
  return p.amplitude * q.amplitude * gaussian_overlap(p.t_center, p.sigma_t, q.t_center, q.sigma_t) *
         gaussian_overlap(p.x_center, p.sigma_x, q.x_center, q.sigma_x);
}

void check_component(int mu) {
  if (mu != 0 && mu != 1) throw InvalidInput("mu", "component must be 0 or 1");
}

}  // namespace

double pair_number(const CMatrix& u, const CMatrix& in_minus, const CMatrix& out_plus) {
  return (out_plus * u * in_minus).squaredNorm();
}

double pair_number_double_sum(const CMatrix& u, const CMatrix& in_sea,
                              const CMatrix& out_complement) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < in_sea.cols(); ++j) {
    const CVector uphi = u * in_sea.col(j);
    for (Eigen::Index i = 0; i < out_complement.cols(); ++i)
      total += std::norm(out_complement.col(i).dot(uphi));
  }
  return total;
}

double vacuum_persistence(const wedge::LiftedEvolution& lifted) {
  return lifted.prefactor * lifted.prefactor;
}

double persistence_from_blocks(const wedge::LiftedEvolution& lifted) {
  const Eigen::Index m = lifted.pm.cols();
  const CMatrix g = CMatrix::Identity(m, m) - lifted.pm.adjoint() * lifted.pm;
  const LogDet d = log_determinant(g);
  return d.singular ? 0.0 : std::exp(d.log_abs);
}

PairSpectrum pair_spectrum(const wedge::LiftedEvolution& lifted, int max_pairs, int channel_cap) {
  if (max_pairs != 1 && max_pairs != 2) throw InvalidInput("max_pairs", "must be 1 or 2");
  if (channel_cap < 2) throw InvalidInput("channel_cap", "must be at least 2");
  PairSpectrum s;
  s.max_pairs = max_pairs;
  s.persistence = vacuum_persistence(lifted);
  const CMatrix b = wedge::one_pair_matrix(lifted);
  const double pref = lifted.prefactor;
  s.one_pair.reserve(static_cast<std::size_t>(b.size()));
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      PairChannel c;
      c.electron = static_cast<int>(i);
      c.hole = static_cast<int>(j);
      c.amplitude = pref * b(i, j);
      c.probability = std::norm(c.amplitude);
      s.one_pair_total += c.probability;
      s.one_pair.push_back(c);
    }
  if (max_pairs == 1) return s;

  std::vector<std::size_t> order(s.one_pair.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  const std::size_t cap = std::min<std::size_t>(order.size(), static_cast<std::size_t>(channel_cap));
  // ties broken by index so the selection is deterministic
  std::partial_sort(order.begin(), order.begin() + cap, order.end(),
                    [&](std::size_t a, std::size_t c) {
                      const double pa = s.one_pair[a].probability, pc = s.one_pair[c].probability;
                      return pa != pc ? pa > pc : a < c;
                    });
  s.channel_cap = static_cast<int>(cap);
  s.truncated = order.size() > cap;

  std::map<std::tuple<int, int, int, int>, bool> seen;
  for (std::size_t a = 0; a < cap; ++a)
    for (std::size_t c = a + 1; c < cap; ++c) {
      const PairChannel& x = s.one_pair[order[a]];
      const PairChannel& y = s.one_pair[order[c]];
      if (x.electron == y.electron || x.hole == y.hole) continue;
      const int e1 = std::min(x.electron, y.electron), e2 = std::max(x.electron, y.electron);
      const int h1 = std::min(x.hole, y.hole), h2 = std::max(x.hole, y.hole);
      if (!seen.emplace(std::make_tuple(e1, e2, h1, h2), true).second) continue;
      TwoPairChannel t;
      t.electron1 = e1;
      t.electron2 = e2;
      t.hole1 = h1;
      t.hole2 = h2;
      t.amplitude = pref * (b(e1, h1) * b(e2, h2) - b(e1, h2) * b(e2, h1));
      t.probability = std::norm(t.amplitude);
      s.two_pair_total += t.probability;
      s.two_pair.push_back(t);
    }
  return s;
}

double total_probability(const PairSpectrum& spectrum) {
  return spectrum.persistence + spectrum.one_pair_total + spectrum.two_pair_total;
}

double total_probability_check(const wedge::LiftedEvolution& lifted, int max_pairs) {
  return total_probability(pair_spectrum(lifted, max_pairs));
}

double PhaseFunctional::evaluate(const lattice::Potential1p1& pot) const {
  if (c == 0.0) return 0.0;
  double total = 0.0;
  for (const auto& p : pot.a0_pulses()) total += pulse_overlap(p, profile[0]);
  for (const auto& p : pot.a1_pulses()) total += pulse_overlap(p, profile[1]);
  return c * total;
}

double PhaseFunctional::response(int mu, const GaussianPulse& pulse) const {
  check_component(mu);
  if (c == 0.0) return 0.0;
  return c * pulse_overlap(pulse, profile[mu]);
}

double PhaseFunctional::summand(int mu, double t, double x) const {
  check_component(mu);
  return c * profile[mu].value(t, x);
}

CurrentSample bogolyubov_current(const lattice::LatticeConfig& config,
                                 const lattice::Potential1p1& pot, double t, double x, int mu,
                                 const PhaseFunctional& theta, const CurrentOptions& options) {
  config.validate();
  check_component(mu);
  if (!(options.epsilon > 0.0)) throw InvalidInput("epsilon", "must be positive");
  CurrentSample out;
  out.t = t;
  out.x = x;
  out.mu = mu;
  out.epsilon = options.epsilon;
  out.bump_sigma_t = options.bump_sigma_t > 0.0 ? options.bump_sigma_t : 3.0 * config.dt();
  out.bump_sigma_x = options.bump_sigma_x > 0.0 ? options.bump_sigma_x : 3.0 * config.dx();

  GaussianPulse bump;
  bump.amplitude = 1.0 / (2.0 * std::numbers::pi * out.bump_sigma_t * out.bump_sigma_x);
  bump.t_center = t;
  bump.x_center = x;
  bump.sigma_t = out.bump_sigma_t;
  bump.sigma_x = out.bump_sigma_x;
  // The bump must itself be a valid pulse of the model.
  try {
    std::vector<GaussianPulse> a0, a1;
    (mu == 0 ? a0 : a1).push_back(bump);
    lattice::Potential1p1 probe(config, a0, a1);
  } catch (const InvalidInput&) {
    throw InvalidInput("point", "bump around (t, x) leaves the window or the box");
  }

  const wedge::Polarization pol = free_polarization(config);
  const CMatrix& phi = pol.sea.map;
  const int steps = config.nsteps;
  const CMatrix u_phi = lattice::propagate(config, pot, config.t0, config.t1, steps, phi);

  auto sea_det = [&](const CMatrix& evolved) {
    const CMatrix mm = phi.adjoint() * evolved;
    Eigen::BDCSVD<CMatrix> svd(mm);
    const RVector& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || sv(0) / smin > wedge::kMaxCondition) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "smallest singular value of U_-- is %.3e", smin);
      throw NumericalFailure("ill_conditioned_U--", buf);
    }
    return log_determinant(mm);
  };
  const LogDet d_a = sea_det(u_phi);
  const double theta_a = 0.0;  // only differences enter

  auto amp = [&](double eps) {
    GaussianPulse b = bump;
    b.amplitude *= eps;
    const lattice::Potential1p1 pe = pot.with_pulse(mu, b);
    const CMatrix ue_phi = lattice::propagate(config, pe, config.t0, config.t1, steps, phi);
    const LogDet d_e = sea_det(ue_phi);
    const LogDet ov = log_determinant(u_phi.adjoint() * ue_phi);
    const double dtheta = theta.response(mu, b) - theta_a;
    // overlap of the two lifted vacua, both with the construction's phase
    return ov.value() * (d_a.phase / d_e.phase) * std::exp(-kI * dtheta);
  };
  auto central = [&](double eps) { return (amp(eps) - amp(-eps)) / (2.0 * eps); };

  const cplx d1 = central(options.epsilon);
  const cplx d2 = central(0.5 * options.epsilon);
  const cplx j1 = kI * d1, j2 = kI * d2;
  const cplx jr = (4.0 * j2 - j1) / 3.0;
  out.value_eps = j1.real();
  out.value_half = j2.real();
  out.value = jr.real();
  out.imag = jr.imag();
  out.residual = std::abs(jr - j2);
  out.resolved = out.residual <= options.rel_tol * std::abs(out.value) + options.abs_floor;
  return out;
}

wedge::Polarization free_polarization(const lattice::LatticeConfig& config) {
  lattice::FreeModes fm = lattice::free_modes(config);
  return wedge::Polarization::from_bases(std::move(fm.negative), std::move(fm.positive));
}

GaugeProbeReport gauge_covariance_probe(const lattice::LatticeConfig& config,
                                        const lattice::Potential1p1& pot) {
  if (!pot.a0_pulses().empty() || !pot.a1_pulses().empty())
    throw InvalidInput("potential", "gauge probe needs a pure-gauge potential (gamma pulses only)");
  GaugeProbeReport r;
  const UnitaryMap u = lattice::evolve(config, pot, config.t0, config.t1);
  r.unitarity_defect = u.unitarity_defect;
  const lattice::SpectralSplit free = lattice::free_projectors(config);
  r.fixed_pair_number = pair_number(u.matrix, free.minus.matrix, free.plus.matrix);
  const CVector g = lattice::gauge_phase_diagonal(config, pot, config.t1);
  const CMatrix plus_t = g.asDiagonal() * free.plus.matrix * g.conjugate().asDiagonal();
  r.transformed_pair_number = pair_number(u.matrix, free.minus.matrix, plus_t);
  for (int k = 0; k < config.n; ++k)
    r.gamma_t1_max = std::max(r.gamma_t1_max, std::abs(pot.gamma(config.t1, config.position(k))));
  return r;
}

}  // namespace diracsea::observables
