#include "diracsea/wedge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

namespace diracsea::wedge {

SeaBasis make_sea(CMatrix map) {
  if (map.cols() > map.rows()) throw InvalidInput("sea", "rank exceeds the space dimension");
  SeaBasis s;
  s.orthonormality_defect =
      trace_norm(map.adjoint() * map - CMatrix::Identity(map.cols(), map.cols()));
  s.map = std::move(map);
  return s;
}

Polarization Polarization::from_projector(const CMatrix& minus) {
  const Eigen::Index d = minus.rows();
  return from_bases(projector_range(minus),
                    projector_range(CMatrix::Identity(d, d) - hermitian_part(minus)));
}

Polarization Polarization::from_bases(CMatrix sea, CMatrix complement) {
  if (sea.rows() != complement.rows() || sea.cols() + complement.cols() != sea.rows())
    throw InvalidInput("polarization", "sea and complement do not span the space");
  Polarization p;
  p.sea = make_sea(std::move(sea));
  p.complement = std::move(complement);
  return p;
}

CMatrix Polarization::minus_projector() const { return sea.map * sea.map.adjoint(); }
CMatrix Polarization::plus_projector() const { return complement * complement.adjoint(); }

cplx pairing(const SeaBasis& psi, const SeaBasis& phi) {
  if (psi.map.rows() != phi.map.rows() || psi.map.cols() != phi.map.cols())
    throw InvalidInput("sea", "pairing needs equal dimensions");
  return log_determinant(psi.map.adjoint() * phi.map).value();
}

SeaBasis left_op(const CMatrix& u, const SeaBasis& phi) {
  if (u.cols() != phi.map.rows() || u.rows() != u.cols())
    throw InvalidInput("U", "dimension does not match the sea");
  return make_sea(u * phi.map);
}

SeaBasis right_op(const SeaBasis& phi, const CMatrix& r) {
  if (r.rows() != r.cols() || r.rows() != phi.map.cols())
    throw InvalidInput("R", "must be square with the sea rank");
  if (log_determinant(r).singular) throw InvalidInput("R", "singular right operation");
  return make_sea(phi.map * r);
}

LiftedEvolution lift(const CMatrix& u, const Polarization& in, const Polarization& out,
                     double max_condition) {
  if (u.rows() != u.cols() || u.rows() != in.sea.map.rows() || u.rows() != out.sea.map.rows())
    throw InvalidInput("U", "dimension does not match the polarizations");
  if (in.sea.rank() != out.sea.rank())
    throw InvalidInput("polarization", "in and out seas must have equal rank");
  LiftedEvolution l;
  l.u = u;
  l.in = in;
  l.out = out;
  const CMatrix u_phi = u * in.sea.map;
  const CMatrix u_x = u * in.complement;
  l.mm = out.sea.map.adjoint() * u_phi;
  l.pm = out.complement.adjoint() * u_phi;
  l.mp = out.sea.map.adjoint() * u_x;
  l.pp = out.complement.adjoint() * u_x;

  if (l.mm.size() == 0) {
    l.prefactor = 1.0;
    l.sigma_min = 1.0;
    l.condition = 1.0;
    return l;
  }
  Eigen::BDCSVD<CMatrix> svd(l.mm);
  const RVector& sv = svd.singularValues();
  l.sigma_min = sv(sv.size() - 1);
  l.condition = l.sigma_min > 0.0 ? sv(0) / l.sigma_min : std::numeric_limits<double>::infinity();
  if (!(l.condition <= max_condition)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "smallest singular value of U_-- is %.3e (condition %.3e)",
                  l.sigma_min, l.condition);
    throw NumericalFailure("ill_conditioned_U--", buf);
  }
  l.det_mm = log_determinant(l.mm);
  l.prefactor = l.det_mm.abs();
  l.r = l.mm.partialPivLu().inverse();
  return l;
}

cplx amplitude(const LiftedEvolution& lifted, const SeaBasis& target) {
  if (target.map.rows() != lifted.u.rows() || target.map.cols() != lifted.in.sea.rank())
    throw InvalidInput("target", "dimension does not match the lifted evolution");
  const CMatrix m = target.map.adjoint() * (lifted.u * (lifted.in.sea.map * lifted.r));
  return lifted.prefactor * log_determinant(m).value();
}

double block_identity_defect(const LiftedEvolution& lifted) {
  const Eigen::Index m = lifted.mm.cols();
  return hs_norm(lifted.mm.adjoint() * lifted.mm -
                 (CMatrix::Identity(m, m) - lifted.pm.adjoint() * lifted.pm));
}

CMatrix one_pair_matrix(const LiftedEvolution& lifted) { return lifted.pm * lifted.r; }

namespace {

int permutation_sign(const std::vector<int>& perm) {
  int sign = 1;
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

Eigen::Index ipow(Eigen::Index b, int e) {
  Eigen::Index r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

CVector wedge_tensor(const CMatrix& phi) {
  const Eigen::Index d = phi.rows();
  const int m = static_cast<int>(phi.cols());
  CVector t = CVector::Zero(ipow(d, m));
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  double factorial = 1.0;
  for (int i = 2; i <= m; ++i) factorial *= i;
  const double norm = 1.0 / std::sqrt(factorial);
  std::vector<Eigen::Index> idx(m);
  do {
    const double sign = permutation_sign(perm);
    // product state phi_perm[0] x phi_perm[1] x ...
    for (Eigen::Index flat = 0; flat < t.size(); ++flat) {
      Eigen::Index rest = flat;
      cplx prod = sign * norm;
      for (int slot = m - 1; slot >= 0; --slot) {
        idx[slot] = rest % d;
        rest /= d;
      }
      for (int slot = 0; slot < m && prod != 0.0; ++slot) prod *= phi(idx[slot], perm[slot]);
      t(flat) += prod;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return t;
}

cplx oracle_lift(const CMatrix& u, const CMatrix& phi, const CMatrix& psi) {
  const Eigen::Index d = u.rows();
  const int m = static_cast<int>(phi.cols());
  if (d > 8 || m > 4) throw InvalidInput("oracle", "limited to 2N <= 8 and M <= 4");
  if (u.cols() != d || phi.rows() != d || psi.rows() != d || psi.cols() != m)
    throw InvalidInput("oracle", "dimension mismatch");
  CVector t = wedge_tensor(phi);
  // apply U to one slot at a time
  const Eigen::Index total = t.size();
  for (int slot = 0; slot < m; ++slot) {
    const Eigen::Index stride = ipow(d, m - 1 - slot);
    CVector next = CVector::Zero(total);
    for (Eigen::Index flat = 0; flat < total; ++flat) {
      const Eigen::Index digit = (flat / stride) % d;
      const Eigen::Index base = flat - digit * stride;
      for (Eigen::Index a = 0; a < d; ++a) next(base + a * stride) += u(a, digit) * t(flat);
    }
    t = std::move(next);
  }
  return wedge_tensor(psi).dot(t);
}

}  // namespace diracsea::wedge
