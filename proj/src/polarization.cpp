#include "diracsea/polarization.hpp"

#include <cmath>

namespace diracsea::polarization {
namespace {

void check_resolution(const CMatrix& minus, const CMatrix& plus, const char* side) {
  if (minus.rows() != minus.cols() || plus.rows() != plus.cols() || minus.rows() != plus.rows())
    throw InvalidInput(side, "projector dimensions differ");
  const CMatrix id = CMatrix::Identity(minus.rows(), minus.cols());
  if (hs_norm(minus + plus - id) > 1e-8)
    throw InvalidInput(side, "projectors do not resolve the identity");
}

}  // namespace

BlockDecomposition blocks(const CMatrix& u, const CMatrix& in_minus, const CMatrix& in_plus,
                          const CMatrix& out_minus, const CMatrix& out_plus) {
  check_resolution(in_minus, in_plus, "in_polarization");
  check_resolution(out_minus, out_plus, "out_polarization");
  if (u.rows() != u.cols() || u.rows() != in_minus.rows())
    throw InvalidInput("U", "dimension does not match the polarizations");
  BlockDecomposition b;
  const CMatrix u_in_minus = u * in_minus;
  const CMatrix u_in_plus = u * in_plus;
  b.pp = out_plus * u_in_plus;
  b.pm = out_plus * u_in_minus;
  b.mp = out_minus * u_in_plus;
  b.mm = out_minus * u_in_minus;
  b.report.hs_plus_minus = hs_norm(b.pm);
  b.report.hs_minus_plus = hs_norm(b.mp);
  b.reassembly_defect = hs_norm(b.pp + b.pm + b.mp + b.mm - u);
  return b;
}

double block_identity_defect(const BlockDecomposition& b, const CMatrix& in_minus) {
  return hs_norm(b.mm.adjoint() * b.mm - (in_minus - b.pm.adjoint() * b.pm));
}

Projector local_gauge_projector(const lattice::LatticeConfig& config,
                                const lattice::Potential1p1& pot, double t,
                                const CMatrix& minus, int lambda_sign) {
  config.validate();
  const int n = config.n;
  if (minus.rows() != 2 * n || minus.cols() != 2 * n)
    throw InvalidInput("projector", "must be 2N x 2N");
  if (lambda_sign != 1 && lambda_sign != -1) throw InvalidInput("lambda_sign", "must be +1 or -1");
  std::vector<double> a1(n);
  for (int k = 0; k < n; ++k) {
    a1[k] = pot.a1(t, config.position(k));
    if (!std::isfinite(a1[k])) throw InvalidInput("potential.a1_pulses", "non-finite sample");
  }
  CMatrix pa = minus;
  const double s = lambda_sign * config.coupling;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) {
      const double lambda = -a1[k] * config.displacement(k, l);
      if (lambda == 0.0) continue;
      const cplx ph = std::exp(kI * (s * lambda));
      pa(k, l) *= ph;
      pa(k + n, l) *= ph;
      pa(k, l + n) *= ph;
      pa(k + n, l + n) *= ph;
    }
  return make_projector(std::move(pa));
}

GaugeProjectorDefects gauge_projector_defects(const CMatrix& u, const CMatrix& minus, const Projector& pa) {
  GaugeProjectorDefects d;
  d.delta1 = hs_norm(u * minus * u.adjoint() - pa.matrix);
  d.delta2 = pa.idempotency_defect;
  d.hermiticity = pa.hermiticity_defect;
  return d;
}

GaugeProjectorDefects gauge_projector_defects(const lattice::LatticeConfig& config,
                                const lattice::Potential1p1& pot, double t_a, double t_b,
                                int lambda_sign) {
  const UnitaryMap u = lattice::evolve(config, pot, t_a, t_b);
  const lattice::SpectralSplit free = lattice::free_projectors(config);
  const Projector pa = local_gauge_projector(config, pot, t_b, free.minus.matrix, lambda_sign);
  return gauge_projector_defects(u.matrix, free.minus.matrix, pa);
}

CMatrix build_q(const CMatrix& plus, const CMatrix& minus, const CMatrix& pa) {
  const CMatrix d = hermitian_part(pa) - minus;
  return plus * d * minus - minus * d * plus;
}

Projector representative_projector(const CMatrix& q, const CMatrix& minus) {
  // Q = -i H with H = iQ Hermitian, so exp(Q) = exp(-iH).
  const CMatrix h = kI * q;
  const CMatrix eq = unitary_exponential(h);
  return make_projector(eq * minus * eq.adjoint());
}

double class_distance(const CMatrix& pv, const CMatrix& pw) {
  if (pv.rows() != pw.rows() || pv.cols() != pw.cols())
    throw InvalidInput("projector", "dimension mismatch");
  return hs_norm(pv - pw);
}

std::vector<double> doubling_ratios(const std::vector<double>& values) {
  std::vector<double> r;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) r.push_back(values[i + 1] / values[i]);
  return r;
}

bool bounded_under_doubling(const std::vector<double>& values, double max_ratio) {
  const std::vector<double> r = doubling_ratios(values);
  if (r.empty()) return false;
  const std::size_t first = r.size() >= 2 ? r.size() - 2 : 0;
  for (std::size_t i = first; i < r.size(); ++i)
    if (!(r[i] <= max_ratio && r[i] >= 1.0 / max_ratio)) return false;
  return true;
}

}  // namespace diracsea::polarization
