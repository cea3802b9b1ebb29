#pragma once

// Projector algebra for polarization classes: block decompositions of a
// one-particle map, the local-gauge projector P^A, the operator Q and the
// class representative exp(Q) P- exp(-Q), and HS distances between
// projectors under cutoff doubling.

#include <vector>

#include "diracsea/lattice.hpp"
#include "diracsea/operators.hpp"

namespace diracsea::polarization {

using diracsea::hs_norm;

struct ShaleReport {
  double hs_plus_minus = 0.0;  // ||P+_out U P-_in||_HS
  double hs_minus_plus = 0.0;  // ||P-_out U P+_in||_HS
};

/// Blocks as operators on the full space, U_ab = P^a_out U P^b_in.
struct BlockDecomposition {
  CMatrix pp, pm, mp, mm;
  ShaleReport report;
  double reassembly_defect = 0.0;  // ||pp + pm + mp + mm - U||_HS
};

/// Both projector pairs must resolve the identity within 1e-8.
BlockDecomposition blocks(const CMatrix& u, const CMatrix& in_minus, const CMatrix& in_plus,
                          const CMatrix& out_minus, const CMatrix& out_plus);

/// ||U_--^dagger U_-- - (P-_in - U_+-^dagger U_+-)||_HS
double block_identity_defect(const BlockDecomposition& b, const CMatrix& in_minus);

/// Kernel exp(sign i e lambda(x_k, x_l)) P-(x_k, x_l) with
/// lambda = -A1(t, x_k) d(x_k, x_l). sign = +1 is the orientation under which
/// exp(-ie Gamma) P- exp(ie Gamma) is reproduced to first order; -1 flips it.
Projector local_gauge_projector(const lattice::LatticeConfig& config,
                                const lattice::Potential1p1& pot, double t,
                                const CMatrix& minus, int lambda_sign = 1);

struct GaugeProjectorDefects {
  double delta1 = 0.0;  // ||U P- U^dagger - P^A||_HS
  double delta2 = 0.0;  // ||P^A P^A - P^A||_HS
  double hermiticity = 0.0;
};

/// U evolved over [t_a, t_b] from a field-free t_a; P^A built at t_b from the
/// free P-.
GaugeProjectorDefects gauge_projector_defects(const lattice::LatticeConfig& config,
                                const lattice::Potential1p1& pot, double t_a, double t_b,
                                int lambda_sign = 1);
GaugeProjectorDefects gauge_projector_defects(const CMatrix& u, const CMatrix& minus, const Projector& pa);

/// Q = P+ (P^A_h - P-) P- - P- (P^A_h - P-) P+, P^A_h the Hermitian part of
/// P^A. Anti-Hermitian by construction.
CMatrix build_q(const CMatrix& plus, const CMatrix& minus, const CMatrix& pa);

/// exp(Q) P- exp(-Q).
Projector representative_projector(const CMatrix& q, const CMatrix& minus);

/// ||P_V - P_W||_HS
double class_distance(const CMatrix& pv, const CMatrix& pw);

/// v[i+1] / v[i] for a series recorded under successive cutoff doublings.
std::vector<double> doubling_ratios(const std::vector<double>& values);

/// Every ratio over the last two doublings lies within [1/max_ratio, max_ratio].
bool bounded_under_doubling(const std::vector<double>& values, double max_ratio = 1.2);

}  // namespace diracsea::polarization
