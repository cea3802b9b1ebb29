#include <cmath>
#include <random>

#include "diracsea/polarization.hpp"
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

CMatrix random_unitary(int d, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  CMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ();
}

}  // namespace

TEST_CASE("hs norm of known operators") {
  CHECK(hs_norm(CMatrix::Identity(5, 5)) == doctest::Approx(std::sqrt(5.0)));
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = cplx(3.0, 4.0);
  CHECK(hs_norm(a) == doctest::Approx(5.0));
  CHECK(trace_norm(a) == doctest::Approx(5.0));
}

TEST_CASE("blocks of a unitary: reassembly and sum rule") {
  const LatticeConfig c = config();
  const auto free = lattice::free_projectors(c);
  const CMatrix u = random_unitary(c.dim(), 11);
  const auto b = polarization::blocks(u, free.minus.matrix, free.plus.matrix, free.minus.matrix,
                                      free.plus.matrix);
  CHECK(b.reassembly_defect < 1e-12);
  CHECK(polarization::block_identity_defect(b, free.minus.matrix) < 1e-12);
  CHECK(b.report.hs_plus_minus == doctest::Approx(hs_norm(b.pm)));
  // for U unitary and equal ranks both off-diagonal norms coincide
  CHECK(b.report.hs_plus_minus == doctest::Approx(b.report.hs_minus_plus).epsilon(1e-10));

  CMatrix broken = free.plus.matrix;
  broken(0, 0) += 0.1;
  CHECK_THROWS_AS(polarization::blocks(u, free.minus.matrix, broken, free.minus.matrix,
                                       free.plus.matrix),
                  InvalidInput);
}

TEST_CASE("free evolution has vanishing off-diagonal blocks") {
  const LatticeConfig c = config();
  const auto free = lattice::free_projectors(c);
  const UnitaryMap u = lattice::evolve(c, Potential1p1(c, {}, {}), c.t0, c.t1);
  const auto b = polarization::blocks(u.matrix, free.minus.matrix, free.plus.matrix,
                                      free.minus.matrix, free.plus.matrix);
  CHECK(b.report.hs_plus_minus < 1e-12);
  CHECK(b.report.hs_minus_plus < 1e-12);
}

TEST_CASE("local gauge projector: trivial without A1, elementwise phase otherwise") {
  const LatticeConfig c = config();
  const auto free = lattice::free_projectors(c);
  const Potential1p1 a0_only(c, {{1.0, 0.0, 0.0, 0.5, 1.0}}, {});
  const Projector p0 = polarization::local_gauge_projector(c, a0_only, 0.0, free.minus.matrix);
  CHECK((p0.matrix - free.minus.matrix).norm() == 0.0);

  const Potential1p1 pot(c, {}, {{1.5, 0.0, 0.3, 0.5, 1.0}});
  const double t = 0.1;
  for (int sign : {1, -1}) {
    const Projector pa = polarization::local_gauge_projector(c, pot, t, free.minus.matrix, sign);
    for (auto [k, l] : {std::pair{3, 17}, std::pair{20, 2}, std::pair{9, 9}}) {
      const double lambda = -pot.a1(t, c.position(k)) * c.displacement(k, l);
      const cplx ph = std::exp(kI * (sign * c.coupling * lambda));
      CHECK(std::abs(pa.matrix(k + c.n, l) - ph * free.minus.matrix(k + c.n, l)) < 1e-15);
      CHECK(std::abs(pa.matrix(k, l + c.n) - ph * free.minus.matrix(k, l + c.n)) < 1e-15);
    }
  }
  // flipping the sign is the same as flipping the coupling
  LatticeConfig flipped = c;
  flipped.coupling = -c.coupling;
  const Projector minus_sign = polarization::local_gauge_projector(c, pot, t, free.minus.matrix, -1);
  const Projector neg_e = polarization::local_gauge_projector(flipped, pot, t, free.minus.matrix, 1);
  CHECK((minus_sign.matrix - neg_e.matrix).norm() < 1e-15);
  CHECK_THROWS_AS(polarization::local_gauge_projector(c, pot, t, free.minus.matrix, 0), InvalidInput);
}

TEST_CASE("Q is anti-Hermitian and off-diagonal; representative is a rank-N projector") {
  const LatticeConfig c = config();
  const auto free = lattice::free_projectors(c);
  const Potential1p1 pot(c, {}, {{2.0, 0.0, 0.0, 0.5, 1.0}});
  const Projector pa = polarization::local_gauge_projector(c, pot, 0.0, free.minus.matrix);
  const CMatrix q = polarization::build_q(free.plus.matrix, free.minus.matrix, pa.matrix);
  CHECK((q + q.adjoint()).norm() < 1e-13);
  CHECK(q.norm() > 1e-4);
  CHECK((free.minus.matrix * q * free.minus.matrix).norm() < 1e-13);
  CHECK((free.plus.matrix * q * free.plus.matrix).norm() < 1e-13);

  const Projector rep = polarization::representative_projector(q, free.minus.matrix);
  CHECK(rep.idempotency_defect < 1e-10);
  CHECK(rep.hermiticity_defect < 1e-10);
  CHECK(rep.matrix.trace().real() == doctest::Approx(c.n).epsilon(1e-10));
  CHECK(polarization::class_distance(rep.matrix, free.minus.matrix) > 0.0);

  // trivial P^A reproduces P-
  const CMatrix q0 = polarization::build_q(free.plus.matrix, free.minus.matrix, free.minus.matrix);
  CHECK(q0.norm() < 1e-14);
  const Projector rep0 = polarization::representative_projector(q0, free.minus.matrix);
  CHECK(polarization::class_distance(rep0.matrix, free.minus.matrix) < 1e-12);
}

TEST_CASE("class distance is a metric") {
  const LatticeConfig c = config(16);
  const auto free = lattice::free_projectors(c);
  const CMatrix u1 = random_unitary(c.dim(), 1), u2 = random_unitary(c.dim(), 2);
  const CMatrix a = free.minus.matrix, b = u1 * a * u1.adjoint(), d = u2 * a * u2.adjoint();
  CHECK(polarization::class_distance(a, a) == 0.0);
  CHECK(polarization::class_distance(a, b) == doctest::Approx(polarization::class_distance(b, a)));
  CHECK(polarization::class_distance(a, d) <=
        polarization::class_distance(a, b) + polarization::class_distance(b, d) + 1e-12);
}

TEST_CASE("gauge-rotated sea differs from P-") {
  const LatticeConfig c = config();
  const auto free = lattice::free_projectors(c);
  const Potential1p1 pot(c, {}, {}, {{3.0, 0.0, 0.0, 0.5, 1.0}});
  const UnitaryMap g = lattice::gauge_phase(c, pot, 0.0);
  const CMatrix rotated = g.matrix * free.minus.matrix * g.matrix.adjoint();
  CHECK(polarization::class_distance(rotated, free.minus.matrix) > 1e-3);
}

TEST_CASE("doubling ratios") {
  const std::vector<double> r = polarization::doubling_ratios({1.0, 2.0, 2.2, 2.3});
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(2.0));
  CHECK(polarization::bounded_under_doubling({1.0, 2.0, 2.2, 2.3}));
  CHECK_FALSE(polarization::bounded_under_doubling({1.0, 1.1, 1.5}));
  CHECK_FALSE(polarization::bounded_under_doubling({1.0, 1.1, 0.5}));
}

TEST_CASE("gauge-projector defects vanish for a field-free evolution") {
  const LatticeConfig c = config();
  const auto d = polarization::gauge_projector_defects(c, Potential1p1(c, {}, {}), c.t0, 0.0);
  CHECK(d.delta1 < 1e-11);
  CHECK(d.delta2 < 1e-11);
}

TEST_CASE("gauge-projector orientation: sign +1 beats sign -1") {
  LatticeConfig c = config(128);
  const Potential1p1 pot(c, {{1.0, 0.0, 0.0, 0.5, 1.0}}, {{1.0, 0.0, 0.0, 0.5, 1.0}});
  const auto plus = polarization::gauge_projector_defects(c, pot, c.t0, 0.0, 1);
  const auto minus = polarization::gauge_projector_defects(c, pot, c.t0, 0.0, -1);
  CHECK(plus.delta1 < minus.delta1);
}
