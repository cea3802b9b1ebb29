#pragma once

// Dense operator types shared by every module: complex matrices on the
// truncated one-particle space, unitary maps and projectors with their
// measured defects, and the error types the harness maps to exit codes.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace diracsea {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Rejected input. `field()` names the offending parameter.
class InvalidInput : public std::invalid_argument {
public:
  InvalidInput(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// A numerical guard tripped (ill-conditioning, lost unitarity, closed gap).
class NumericalFailure : public std::runtime_error {
public:
  NumericalFailure(std::string guard, const std::string& what)
      : std::runtime_error(guard + ": " + what), guard_(std::move(guard)) {}
  const std::string& guard() const noexcept { return guard_; }

private:
  std::string guard_;
};

struct UnitaryMap {
  CMatrix matrix;
  double t_from = 0.0;
  double t_to = 0.0;
  double unitarity_defect = 0.0;  // max-norm of U^dagger U - I
};

struct Projector {
  CMatrix matrix;
  double idempotency_defect = 0.0;  // ||P^2 - P||_HS
  double hermiticity_defect = 0.0;  // ||P - P^dagger||_HS
};

/// Frobenius norm, the finite-dimensional Hilbert-Schmidt norm.
double hs_norm(const CMatrix& op);

/// Sum of singular values.
double trace_norm(const CMatrix& op);

/// max_ij |(U^dagger U - I)_ij|
double unitarity_defect(const CMatrix& u);

UnitaryMap make_unitary_map(CMatrix matrix, double t_from, double t_to);

/// Wraps a matrix and measures both projector defects.
Projector make_projector(CMatrix matrix);

/// Determinant kept as log-magnitude plus unit phase so that large
/// near-unitary blocks neither under- nor overflow.
struct LogDet {
  double log_abs = 0.0;
  cplx phase{1.0, 0.0};
  bool singular = false;

  cplx value() const;
  double abs() const;
};

/// Partial-pivoting LU determinant.
LogDet log_determinant(const CMatrix& a);

/// Hermitian part (A + A^dagger)/2.
CMatrix hermitian_part(const CMatrix& a);

/// exp(-i H) for Hermitian H via its eigendecomposition; exactly unitary up to
/// roundoff.
CMatrix unitary_exponential(const CMatrix& hermitian);

/// Orthonormal basis of the range of an orthogonal projector (eigenvalues
/// above 1/2), ordered by ascending eigenvalue.
CMatrix projector_range(const CMatrix& projector);

}  // namespace diracsea
