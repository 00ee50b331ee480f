#ifndef MISO_STRUCTURE_HPP
#define MISO_STRUCTURE_HPP

#include "hardy.hpp"
#include "model.hpp"

namespace miso {

/// The (E, U, P) data of a cnu bi-isometry: V1 = V_{U,P},
/// V2 = V_{U^H, U P-perp U^H}.
struct ModelTriple {
  Eigen::Index dim_E = 0;
  ComplexMatrix U;
  ComplexMatrix P;

  void check_well_formed(const Tolerances& tol = {}) const;

  /// The derived model 2-isometry.
  ModelTuple as_tuple() const;
};

/// A contraction with its defect operators and defect spaces.
struct ContractionData {
  ComplexMatrix T;
  ComplexMatrix D_T;      // (I - T^H T)^{1/2}
  ComplexMatrix D_Tstar;  // (I - T T^H)^{1/2}
  Subspace defect_space;       // closure of D_T range
  Subspace defect_space_star;  // closure of D_Tstar range
};

ContractionData defect(const ComplexMatrix& t, const Tolerances& tol = {});

/// The unitary [[T, D_T*],[D_T, -T^H]] written on F + defect_space_star ->
/// F + defect_space coordinates.
ComplexMatrix julia_halmos(const ComplexMatrix& t, const Tolerances& tol = {});

/// Builds the model triple on F + D_T + F' determined by a contraction T
/// and a unitary Z : D_T + F' -> D_T* + F' (Z given in defect-space
/// coordinates, size (q + Fp) x (q + Fp) with q = dim D_T).
ModelTriple triple_from_TZ(Eigen::Index f_dim, Eigen::Index fp_dim,
                           const ComplexMatrix& t, const ComplexMatrix& z,
                           const Tolerances& tol = {});

struct TZData {
  Eigen::Index f_dim = 0;
  Eigen::Index fp_dim = 0;
  ComplexMatrix T; // pivotal contraction on F
  ComplexMatrix Z; // unitary in defect coordinates, (q+Fp) x (q+Fp)
  double identification_residual = 0.0;
};

/// Recovers (F, F', T, Z) from a model triple; the roundtrip through
/// triple_from_TZ reproduces an equivalent triple.
TZData extract_TZ(const ModelTriple& triple, const Tolerances& tol = {});

/// Recovers the pivotal contraction as the compression of truncated V1 to
/// ker V2^* in the window, together with the unitary change of basis to
/// extract_TZ's coordinates.
ComplexMatrix pivotal_from_bi_isometry(const ModelTriple& triple,
                                       Eigen::Index n_blocks,
                                       const Tolerances& tol = {});

struct ContractionParts {
  ComplexMatrix T_u;    // unitary part (restriction)
  ComplexMatrix T_cnu;  // completely nonunitary part
  Subspace unitary_space;
  Subspace cnu_space;
  double reducing_residual = 0.0;
};

/// Canonical decomposition of a contraction into unitary and cnu parts via
/// the joint kernels of I - T^Hk T^k and I - T^k T^Hk, k <= dim.
ContractionParts contraction_parts(const ComplexMatrix& t,
                                   const Tolerances& tol = {});

/// True iff T^Hn -> 0 strongly; in finite dimensions, spectral radius
/// below 1 - tol_spec.
bool is_c_dot_zero(const ComplexMatrix& t, double tol_spec = 1e-9);

struct WoldReductionReport {
  bool hypothesis_met = false; // T_cnu in C_.0
  double invariance_residual = 0.0;       // V1, V2 and adjoints on window
  double constant_multiplier_residual = 0.0; // V1 acts as T_u
  double orthogonality_residual = 0.0;    // F ominus F_u against unitary part
  bool pass = false;
};

/// Verifies on the truncation window that H^2 of the unitary part of the
/// pivotal contraction reduces both model operators, with V1 acting there
/// as a constant multiplier.
WoldReductionReport wold_reduction_check(const ModelTriple& triple,
                                         Eigen::Index n_blocks,
                                         const Tolerances& tol = {});

/// The finer parametrization of Z: contractions T, T' plus gluing
/// subspaces/unitaries. R lives in D_T coordinates (ambient q = dim D_T),
/// R_star in D_T* coordinates. X, X_star are stored as q x Fp matrices that
/// vanish off the relevant defect spaces and act as partial isometries
/// D_T' -> D_T* ominus R_star and D_T'* -> D_T ominus R; Y is a q x q
/// partial isometry R -> R_star.
struct Nonet {
  Eigen::Index f_dim = 0;
  Eigen::Index fp_dim = 0;
  ComplexMatrix T;
  ComplexMatrix Tp;
  Subspace R;
  Subspace R_star;
  ComplexMatrix X;
  ComplexMatrix X_star;
  ComplexMatrix Y;

  /// Residuals of the partial-isometry invariants; throws on violation.
  void check_invariants(const Tolerances& tol = {}) const;
};

/// True iff T and T' fit in a nonet: dim D_T' <= dim D_T*,
/// dim D_T'* <= dim D_T, and dim D_T + dim D_T' = dim D_T* + dim D_T'*.
bool nonet_feasible(const ComplexMatrix& t, const ComplexMatrix& tp,
                    const Tolerances& tol = {});

/// Assembles Z from a nonet (verified unitary) and the associated triple.
std::pair<ComplexMatrix, ModelTriple> nonet_build(const Nonet& nonet,
                                                  const Tolerances& tol = {});

/// Recovers the nonet data of a unitary Z (in defect coordinates, with the
/// trailing fp_dim coordinates identified with F'); T supplies the ambient
/// defect-space context.
Nonet nonet_extract(const ComplexMatrix& z, Eigen::Index fp_dim,
                    const ComplexMatrix& t, const Tolerances& tol = {});

} // namespace miso

#endif
