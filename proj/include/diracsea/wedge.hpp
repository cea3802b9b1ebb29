#pragma once

// Finite-rank wedge spaces. A Dirac sea is a 2N x M basis map Phi; the state
// it represents is the wedge of its columns, and the overlap of two such
// states is det(Psi^dagger Phi). Left operations act on the one-particle
// space, right operations on the index space.

#include <vector>

#include "diracsea/operators.hpp"

namespace diracsea::wedge {

struct SeaBasis {
  CMatrix map;                        // 2N x M
  double orthonormality_defect = 0.0; // trace norm of Phi^dagger Phi - I

  Eigen::Index rank() const { return map.cols(); }
};

SeaBasis make_sea(CMatrix map);

/// In/out polarization encoded by orthonormal bases of the sea (electron
/// holes live here) and of its complement.
struct Polarization {
  SeaBasis sea;
  CMatrix complement;  // 2N x (2N - M)

  /// Bases of the range of an orthogonal projector and of its complement.
  static Polarization from_projector(const CMatrix& minus);
  static Polarization from_bases(CMatrix sea, CMatrix complement);
  CMatrix minus_projector() const;
  CMatrix plus_projector() const;
};

/// det(Psi^dagger Phi)
cplx pairing(const SeaBasis& psi, const SeaBasis& phi);

/// U Phi
SeaBasis left_op(const CMatrix& u, const SeaBasis& phi);

/// Phi R; throws InvalidInput("R") if R is singular.
SeaBasis right_op(const SeaBasis& phi, const CMatrix& r);

/// Second-quantized evolution between the in and out seas, in basis
/// coordinates: U_-- = Phi'^dagger U Phi, U_+- = X'^dagger U Phi etc.
struct LiftedEvolution {
  CMatrix u;
  Polarization in;
  Polarization out;
  CMatrix pp, pm, mp, mm;
  CMatrix r;              // U_--^{-1}
  double prefactor = 0.0; // |det U_--|
  LogDet det_mm;
  double sigma_min = 0.0;
  double condition = 0.0;
};

inline constexpr double kMaxCondition = 1e6;

/// Throws NumericalFailure("ill_conditioned_U--") naming the smallest singular
/// value when U_-- is singular or kappa(U_--) exceeds max_condition.
LiftedEvolution lift(const CMatrix& u, const Polarization& in, const Polarization& out,
                     double max_condition = kMaxCondition);

/// prefactor * det(Psi^dagger U Phi R)
cplx amplitude(const LiftedEvolution& lifted, const SeaBasis& target);

/// ||U_--^dagger U_-- - (I - U_+-^dagger U_+-)||_HS in basis coordinates.
double block_identity_defect(const LiftedEvolution& lifted);

/// B = U_+- R. The one-pair amplitude for out-electron i and a hole in sea
/// column j is prefactor * B(i, j).
CMatrix one_pair_matrix(const LiftedEvolution& lifted);

/// Brute-force amplitude on the degree-M exterior power: builds the full
/// antisymmetric tensors of Phi and Psi by permutation sums, applies U to
/// every slot and contracts. Limited to 2N <= 8, M <= 4.
cplx oracle_lift(const CMatrix& u, const CMatrix& phi, const CMatrix& psi);

/// Antisymmetric tensor (1/sqrt(M!)) sum_sigma sgn(sigma) phi_sigma(1) x ...,
/// flattened with the first slot slowest.
CVector wedge_tensor(const CMatrix& phi);

}  // namespace diracsea::wedge
