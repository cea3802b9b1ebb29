#include <cmath>
#include <random>

#include "diracsea/wedge.hpp"
#include "doctest.h"

using namespace diracsea;
using namespace diracsea::wedge;

namespace {

CMatrix random_matrix(int r, int c, std::mt19937& rng) {
  std::normal_distribution<double> g;
  CMatrix a(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) a(i, j) = cplx(g(rng), g(rng));
  return a;
}

CMatrix random_unitary(int d, std::mt19937& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(d, d, rng));
  return qr.householderQ();
}

Polarization random_polarization(int d, int m, std::mt19937& rng) {
  const CMatrix q = random_unitary(d, rng);
  return Polarization::from_bases(q.leftCols(m), q.rightCols(d - m));
}

}  // namespace

TEST_CASE("wedge tensor inner product is the determinant pairing") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 1 + trial % 4;
    const CMatrix a = random_matrix(6, m, rng), b = random_matrix(6, m, rng);
    const cplx tensor = wedge_tensor(a).dot(wedge_tensor(b));
    const cplx det = (a.adjoint() * b).determinant();
    CHECK(std::abs(tensor - det) < 1e-11 * std::max(1.0, std::abs(det)));
  }
}

TEST_CASE("pairing: column swap antisymmetry and right-op scaling") {
  std::mt19937 rng(6);
  const SeaBasis psi{random_matrix(8, 3, rng)}, phi{random_matrix(8, 3, rng)};
  CMatrix swapped = phi.map;
  swapped.col(0).swap(swapped.col(1));
  CHECK(std::abs(pairing(psi, SeaBasis{swapped}) + pairing(psi, phi)) < 1e-12 * std::abs(pairing(psi, phi)));
  const CMatrix r = random_matrix(3, 3, rng);
  CHECK(std::abs(pairing(psi, right_op(phi, r)) - pairing(psi, phi) * r.determinant()) <
        1e-11 * std::abs(pairing(psi, phi) * r.determinant()));
  CHECK_THROWS_AS(right_op(phi, CMatrix::Zero(3, 3)), InvalidInput);
}

TEST_CASE("lift matches the exterior-power oracle on random instances") {
  std::mt19937 rng(20);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + 2 * (trial % 4);  // 2N in {2, 4, 6, 8}
    const int m = d / 2;
    const Polarization in = random_polarization(d, m, rng);
    const Polarization out = random_polarization(d, m, rng);
    const CMatrix u = random_unitary(d, rng);
    const LiftedEvolution l = lift(u, in, out);
    const CMatrix psi = random_unitary(d, rng).leftCols(m);
    const cplx amp = amplitude(l, make_sea(psi));
    // <wedge psi, Gamma(U) wedge phi> with the phase fixed by R = U_--^{-1}
    const cplx raw = oracle_lift(u, in.sea.map, psi);
    const cplx expected = raw * l.prefactor / l.mm.determinant();
    CHECK(std::abs(amp - expected) < 1e-10);
    CHECK(std::abs(oracle_lift(u, in.sea.map, psi) - pairing(make_sea(psi), left_op(u, in.sea))) < 1e-10);
    ++checked;
  }
  CHECK(checked == 20);
}

TEST_CASE("lift of the identity, canonical target amplitude, block identity") {
  std::mt19937 rng(7);
  const Polarization p = random_polarization(8, 4, rng);
  const LiftedEvolution id = lift(CMatrix::Identity(8, 8), p, p);
  CHECK(id.prefactor == doctest::Approx(1.0));
  CHECK(std::abs(amplitude(id, p.sea) - 1.0) < 1e-12);

  const CMatrix u = random_unitary(8, rng);
  const LiftedEvolution l = lift(u, p, p);
  // the out vacuum has amplitude |det U_--|
  CHECK(std::abs(amplitude(l, p.sea) - l.prefactor) < 1e-12);
  CHECK(block_identity_defect(l) < 1e-12);
  CHECK(l.condition >= 1.0);
}

TEST_CASE("one-pair amplitudes equal single column replacement") {
  std::mt19937 rng(8);
  const Polarization p = random_polarization(8, 4, rng);
  const CMatrix u = random_unitary(8, rng);
  const LiftedEvolution l = lift(u, p, p);
  const CMatrix b = one_pair_matrix(l);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CMatrix target = p.sea.map;
      target.col(j) = p.complement.col(i);
      const cplx direct = amplitude(l, make_sea(target));
      CHECK(std::abs(direct - l.prefactor * b(i, j)) < 1e-11);
    }
}

TEST_CASE("amplitude ratios do not depend on the sea basis choice") {
  std::mt19937 rng(9);
  const Polarization p = random_polarization(6, 3, rng);
  const CMatrix u = random_unitary(6, rng);
  const CMatrix v = random_unitary(3, rng);
  const Polarization rotated = Polarization::from_bases(p.sea.map * v, p.complement);
  const LiftedEvolution a = lift(u, p, p), b = lift(u, rotated, rotated);
  CMatrix t1 = p.sea.map, t2 = p.sea.map;
  t1.col(0) = p.complement.col(0);
  t2.col(1) = p.complement.col(2);
  const cplx ra = amplitude(a, make_sea(t1)) / amplitude(a, make_sea(t2));
  const cplx rb = amplitude(b, make_sea(t1)) / amplitude(b, make_sea(t2));
  CHECK(std::abs(ra - rb) < 1e-10 * std::abs(ra));
  CHECK(a.prefactor == doctest::Approx(b.prefactor));
}

TEST_CASE("ill-conditioned U-- is refused") {
  const int d = 4;
  const Polarization p = Polarization::from_bases(CMatrix::Identity(d, d).leftCols(2),
                                                  CMatrix::Identity(d, d).rightCols(2));
  CMatrix swap = CMatrix::Zero(d, d);
  swap(2, 0) = swap(0, 2) = swap(1, 1) = swap(3, 3) = 1.0;
  try {
    lift(swap, p, p);
    FAIL("expected NumericalFailure");
  } catch (const NumericalFailure& e) {
    CHECK(e.guard() == "ill_conditioned_U--");
  }
  CHECK_THROWS_AS(oracle_lift(CMatrix::Identity(10, 10), CMatrix::Identity(10, 2), CMatrix::Identity(10, 2)),
                  InvalidInput);
}

TEST_CASE("polarization from a projector") {
  std::mt19937 rng(10);
  const Polarization p = random_polarization(8, 3, rng);
  const Polarization q = Polarization::from_projector(p.minus_projector());
  CHECK(q.sea.rank() == 3);
  CHECK((q.minus_projector() - p.minus_projector()).norm() < 1e-12);
  CHECK((q.minus_projector() + q.plus_projector() - CMatrix::Identity(8, 8)).norm() < 1e-12);
}
