#ifndef MISO_PIVOTAL_HPP
#define MISO_PIVOTAL_HPP

#include <optional>
#include <vector>

#include "model.hpp"

namespace miso {

/// Coordinates of the range of P1-perp, fixed once: all pivotal subspace
/// computations happen in this basis.
struct PivotalFrame {
  ComplexMatrix basis; // dim_E x r, orthonormal columns spanning P1-perp E
  ComplexMatrix t1;    // r x r compression of U1 (the pivotal operator)
};

PivotalFrame pivotal_frame(const ComplexMatrix& u1, const ComplexMatrix& p1,
                           const Tolerances& tol = {});

/// Compression of U1 to the range of P1-perp; always a contraction.
ComplexMatrix pivotal_operator(const ComplexMatrix& u1,
                               const ComplexMatrix& p1,
                               const Tolerances& tol = {});

/// Smallest T1-invariant subspace containing P1-perp U2^H (seed_projection) E,
/// in P1-perp-range coordinates. The seed projection defaults to P1.
Subspace q_min(const ComplexMatrix& u1, const ComplexMatrix& u2,
               const ComplexMatrix& p1, const Tolerances& tol = {},
               const std::optional<ComplexMatrix>& seed_projection = {});

/// Largest T1-invariant subspace inside P1-perp E ominus P1-perp U^H P1 E
/// (U = U1 U2), in P1-perp-range coordinates. Computed by two independent
/// formulas whose agreement is asserted.
Subspace q_max(const ComplexMatrix& u1, const ComplexMatrix& u2,
               const ComplexMatrix& p1, const Tolerances& tol = {});

struct ExistsP2Result {
  bool exists = false;
  Subspace q_min_space;
  Subspace q_max_space;
  std::optional<ComplexVector> witness; // q_min vector escaping q_max
};

/// Decides whether some projection P2 yields a 3-isometry: yes iff
/// q_min is contained in q_max.
ExistsP2Result exists_p2(const ComplexMatrix& u1, const ComplexMatrix& u2,
                         const ComplexMatrix& p1, const Tolerances& tol = {});

/// Both sides of the three equivalences relating (P2, Q2) order relations
/// to subspace conditions on the Q1-range, plus the vanishing products
/// P1 U [P1perp U1]^k P1perp U2^H P1 for k = 0..dim_E.
struct P2ConditionsReport {
  bool p2_below_sum = false, q1_invariant = false;       // equivalence (1)
  bool q2_below_sum = false, seed_contained = false;     // equivalence (2)
  bool p2q2_zero = false, q1_in_target = false;          // equivalence (3)
  std::vector<double> vanishing_products;
  double max_vanishing_product = 0.0;
};

P2ConditionsReport check_p2_conditions(const ComplexMatrix& u1,
                                       const ComplexMatrix& u2,
                                       const ComplexMatrix& p1,
                                       const ComplexMatrix& p2,
                                       const Tolerances& tol = {});

/// Builds the model 3-isometry determined by an admissible Q1 subspace
/// (given in P1-perp-range coordinates, sandwiched between q_min and q_max
/// and T1-invariant). Asserts the two balance projections are equal, with
/// rank = rank P1 + rank P2.
ModelTuple build_3isometry(const ComplexMatrix& u1, const ComplexMatrix& u2,
                           const ComplexMatrix& p1, const Subspace& q1,
                           const Tolerances& tol = {});

struct WIsometryResult {
  ComplexMatrix matrix;        // in an orthonormal basis of P1 E + q_max
  ComplexMatrix space_basis;   // dim_E x (rank P1 + dim q_max)
  double isometry_residual = 0.0;
  bool unitary = false;
};

/// The operator W(x1 + x2) = U2^H x1 + U1 x2 on P1 E + q_max; an isometry,
/// automatically unitary in finite dimensions.
WIsometryResult w_isometry(const ComplexMatrix& u1, const ComplexMatrix& u2,
                           const ComplexMatrix& p1, const Tolerances& tol = {});

struct LatticeResult {
  bool enumerable = false;
  std::string reason;
  std::vector<Subspace> admissible; // Q1 ranges, P1-perp coordinates
  bool meet_join_closed = false;
  bool all_w_unitary = false;
};

/// Enumerates admissible Q1 subspaces when the compression of T1 to
/// q_max ominus q_min is diagonalizable with distinct eigenvalues, and
/// verifies the lattice property of the admissible set.
LatticeResult p2_lattice(const ComplexMatrix& u1, const ComplexMatrix& u2,
                         const ComplexMatrix& p1, const Tolerances& tol = {});

} // namespace miso

#endif
