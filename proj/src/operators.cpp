#include "diracsea/operators.hpp"

#include <cmath>
#include <limits>

namespace diracsea {

double hs_norm(const CMatrix& op) { return op.norm(); }

double trace_norm(const CMatrix& op) {
  if (op.size() == 0) return 0.0;
  if (op.rows() == op.cols() && (op - op.adjoint()).norm() <= 1e-14 * (1.0 + op.norm())) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(op), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::BDCSVD<CMatrix> svd(op);
  return svd.singularValues().sum();
}

double unitarity_defect(const CMatrix& u) {
  const CMatrix g = u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

UnitaryMap make_unitary_map(CMatrix matrix, double t_from, double t_to) {
  UnitaryMap m;
  m.unitarity_defect = unitarity_defect(matrix);
  m.matrix = std::move(matrix);
  m.t_from = t_from;
  m.t_to = t_to;
  return m;
}

Projector make_projector(CMatrix matrix) {
  Projector p;
  p.idempotency_defect = (matrix * matrix - matrix).norm();
  p.hermiticity_defect = (matrix - matrix.adjoint()).norm();
  p.matrix = std::move(matrix);
  return p;
}

cplx LogDet::value() const {
  if (singular) return {0.0, 0.0};
  return std::exp(log_abs) * phase;
}

double LogDet::abs() const { return singular ? 0.0 : std::exp(log_abs); }

LogDet log_determinant(const CMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("matrix", "determinant of a non-square matrix");
  LogDet d;
  if (a.rows() == 0) return d;
  Eigen::PartialPivLU<CMatrix> lu(a);
  const CMatrix& f = lu.matrixLU();
  double log_abs = 0.0;
  cplx phase{1.0, 0.0};
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    const double r = std::abs(f(i, i));
    if (r == 0.0) {
      d.singular = true;
      d.log_abs = -std::numeric_limits<double>::infinity();
      d.phase = 0.0;
      return d;
    }
    log_abs += std::log(r);
    phase *= f(i, i) / r;
  }
  // sign of the row permutation
  phase *= static_cast<double>(lu.permutationP().determinant());
  d.log_abs = log_abs;
  d.phase = phase / std::abs(phase);
  return d;
}

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

CMatrix unitary_exponential(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(hermitian));
  const RVector& w = es.eigenvalues();
  CVector phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phases(i) = std::exp(-kI * w(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix projector_range(const CMatrix& projector) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(projector));
  const RVector& w = es.eigenvalues();
  Eigen::Index first = 0;
  while (first < w.size() && w(first) <= 0.5) ++first;
  return es.eigenvectors().rightCols(w.size() - first);
}

}  // namespace diracsea
