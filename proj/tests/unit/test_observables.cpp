#include <cmath>
#include <numbers>

#include "diracsea/observables.hpp"
#include "doctest.h"

using namespace diracsea;
using lattice::GaussianPulse;
using lattice::LatticeConfig;
using lattice::Potential1p1;

namespace {

LatticeConfig config(int n = 32) {
  LatticeConfig c;
  c.n = n;
  c.nsteps = 100;
  return c;
}

struct Weak {
  LatticeConfig c = config();
  Potential1p1 pot{c, {{1.0, 0.0, 0.0, 0.5, 1.0}}, {}};
  wedge::Polarization pol = observables::free_polarization(c);
  UnitaryMap u = lattice::evolve(c, pot, c.t0, c.t1);
  wedge::LiftedEvolution lifted = wedge::lift(u.matrix, pol, pol);
};

}  // namespace

TEST_CASE("pair number two ways, and zero without field") {
  const Weak w;
  const double a = observables::pair_number(w.u.matrix, w.pol.minus_projector(), w.pol.plus_projector());
  const double b = observables::pair_number_double_sum(w.u.matrix, w.pol.sea.map, w.pol.complement);
  CHECK(a > 1e-8);
  CHECK(a == doctest::Approx(b).epsilon(1e-10));
  CHECK(a == doctest::Approx(w.lifted.pm.squaredNorm()).epsilon(1e-10));

  const UnitaryMap free = lattice::evolve(w.c, Potential1p1(w.c, {}, {}), w.c.t0, w.c.t1);
  CHECK(observables::pair_number(free.matrix, w.pol.minus_projector(), w.pol.plus_projector()) < 1e-20);
}

TEST_CASE("vacuum persistence identity") {
  const Weak w;
  const double lhs = observables::vacuum_persistence(w.lifted);
  const double rhs = observables::persistence_from_blocks(w.lifted);
  CHECK(lhs < 1.0);
  CHECK(std::abs(lhs - rhs) < 1e-10 * rhs);
  // first order: 1 - persistence ~ pair number
  CHECK(1.0 - lhs == doctest::Approx(w.lifted.pm.squaredNorm()).epsilon(1e-3));
}

TEST_CASE("pair spectrum: channels, two-pair minors, sector sum") {
  const Weak w;
  const auto s1 = observables::pair_spectrum(w.lifted, 1);
  CHECK(s1.one_pair.size() == static_cast<std::size_t>(w.c.n * w.c.n));
  double sum = 0.0;
  for (const auto& ch : s1.one_pair) {
    CMatrix target = w.pol.sea.map;
    target.col(ch.hole) = w.pol.complement.col(ch.electron);
    CHECK(std::abs(wedge::amplitude(w.lifted, wedge::make_sea(target)) - ch.amplitude) < 1e-12);
    sum += ch.probability;
  }
  CHECK(sum == doctest::Approx(s1.one_pair_total));
  CHECK(s1.two_pair.empty());

  const auto s2 = observables::pair_spectrum(w.lifted, 2, 8);
  CHECK(s2.channel_cap == 8);
  CHECK(s2.truncated);
  CHECK(!s2.two_pair.empty());
  for (std::size_t k = 0; k < std::min<std::size_t>(s2.two_pair.size(), 10); ++k) {
    const auto& ch = s2.two_pair[k];
    CMatrix target = w.pol.sea.map;
    target.col(ch.hole1) = w.pol.complement.col(ch.electron1);
    target.col(ch.hole2) = w.pol.complement.col(ch.electron2);
    const double direct = std::norm(wedge::amplitude(w.lifted, wedge::make_sea(target)));
    CHECK(ch.probability == doctest::Approx(direct).epsilon(1e-10));
  }
  const double total = observables::total_probability(s2);
  CHECK(std::abs(1.0 - total) < 1e-6);
  CHECK(total == doctest::Approx(observables::total_probability_check(w.lifted, 2)));
  CHECK_THROWS_AS(observables::pair_spectrum(w.lifted, 3), InvalidInput);
}

TEST_CASE("phase functional response is a Gaussian overlap") {
  observables::PhaseFunctional f;
  f.c = 0.3;
  f.profile[0] = {2.0, 0.5, -1.0, 1.0, 2.0};
  const GaussianPulse p{1.5, 0.0, 0.0, 0.7, 0.4};
  // int exp(-(t-a)^2/2s^2) exp(-(t-b)^2/2r^2) dt
  auto overlap = [](double a, double s, double b, double r) {
    return std::sqrt(2 * std::numbers::pi) * s * r / std::hypot(s, r) *
           std::exp(-0.5 * (a - b) * (a - b) / (s * s + r * r));
  };
  const double expected = 0.3 * 2.0 * 1.5 * overlap(0.5, 1.0, 0.0, 0.7) * overlap(-1.0, 2.0, 0.0, 0.4);
  CHECK(f.response(0, p) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(f.response(1, p) == 0.0);
  CHECK(f.summand(0, 0.5, -1.0) == doctest::Approx(0.6));
}

TEST_CASE("current: zero without field, shifted by the phase functional") {
  const LatticeConfig c = config(64);
  const Potential1p1 zero(c, {}, {});
  const auto j0 = observables::bogolyubov_current(c, zero, 0.0, 0.5, 0);
  CHECK(std::abs(j0.value) < 1e-9);
  CHECK(j0.resolved);

  observables::PhaseFunctional f;
  f.c = 0.1;
  f.profile[0] = {1.0, 0.0, 0.0, 1.0, 2.0};
  const auto jt = observables::bogolyubov_current(c, zero, 0.0, 0.5, 0, f);
  // c int b j with b the normalized bump
  const double st = jt.bump_sigma_t, sx = jt.bump_sigma_x;
  const double expected = 0.1 * (1.0 / std::hypot(1.0, st)) * (2.0 / std::hypot(2.0, sx)) *
                          std::exp(-0.5 * 0.25 / (4.0 + sx * sx));
  CHECK(jt.value - j0.value == doctest::Approx(expected).epsilon(1e-6));
  CHECK_THROWS_AS(observables::bogolyubov_current(c, zero, 3.99, 0.0, 0), InvalidInput);
}

TEST_CASE("gauge probe: pure-gauge pairs vanish against the rotated sea") {
  const LatticeConfig c = config();
  const Potential1p1 g(c, {}, {}, {{2.0, 4.0, 0.0, 0.6, 1.0}});
  const auto r = observables::gauge_covariance_probe(c, g);
  CHECK(r.fixed_pair_number > 1e-4);
  CHECK(r.transformed_pair_number < 1e-4 * r.fixed_pair_number);
  const Potential1p1 a(c, {{1.0, 0.0, 0.0, 0.5, 1.0}}, {});
  CHECK_THROWS_AS(observables::gauge_covariance_probe(c, a), InvalidInput);
}
