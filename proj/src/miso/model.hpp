#ifndef MISO_MODEL_HPP
#define MISO_MODEL_HPP

#include <optional>
#include <vector>

#include "numcore.hpp"

namespace miso {

/// One (U_j, P_j) pair of a model tuple: U unitary, P orthogonal projection.
struct ModelPair {
  ComplexMatrix U;
  ComplexMatrix P;
};

/// A candidate model n-isometry: n pairs (U_j, P_j) on a common space of
/// dimension dim_E. V_j acts on H^2 of that space as multiplication by
/// U_j (z P_j + P_j-perp).
struct ModelTuple {
  Eigen::Index dim_E = 0;
  std::vector<ModelPair> pairs;

  Eigen::Index n() const { return static_cast<Eigen::Index>(pairs.size()); }

  /// Throws PreconditionError if some U_j is not unitary or P_j not a
  /// projection, or dimensions disagree.
  void check_well_formed(const Tolerances& tol = {}) const;
};

/// Residuals for the four model conditions.
struct ValidationReport {
  double commutation = 0.0;      // (a) max ||U_i U_j - U_j U_i||
  double product_identity = 0.0; // (b) ||U_1...U_n - I||
  double balance = 0.0;          // (c) max pair residual
  double balance_projection = 0.0; // (c) common value projection residual
  double resolution = 0.0;       // (d) residual against I
  bool pass_a = false, pass_b = false, pass_c = false, pass_d = false;
  bool pass = false;
};

ValidationReport validate_model(const ModelTuple& t, const Tolerances& tol = {});

/// Lemma: V_{U1,P1} V_{U2,P2} = V_{U,P} with U = U1 U2 and
/// P = P2 + U2^H P1 U2, provided P1 U2 P2 = 0.
std::pair<ComplexMatrix, ComplexMatrix> compose(
    const ComplexMatrix& u1, const ComplexMatrix& p1, const ComplexMatrix& u2,
    const ComplexMatrix& p2, const Tolerances& tol = {});

/// Completes a valid (n-1)-prefix to a model n-isometry with
/// U_n = (U_1...U_{n-1})^H and P_n = I - U P U^H.
ModelTuple complete_tuple(const std::vector<ModelPair>& prefix,
                          const Tolerances& tol = {});

enum class EquivalenceStatus { equivalent, not_equivalent, undecided };

struct EquivalenceResult {
  EquivalenceStatus status = EquivalenceStatus::undecided;
  std::optional<ComplexMatrix> intertwiner; // W with W U_j = U'_j W etc.
  std::string reason;
};

/// Decides unitary equivalence of two model tuples by solving the joint
/// intertwining system. Complete for irreducible tuples; may report
/// undecided for reducible ones.
EquivalenceResult equivalent(const ModelTuple& a, const ModelTuple& b,
                             const Tolerances& tol = {},
                             unsigned long seed = 0);

/// True iff the model pair doubly commutes, i.e. ||P1 U1 (I - P1)|| small.
bool doubly_commuting(const ComplexMatrix& u1, const ComplexMatrix& p1,
                      const Tolerances& tol = {});

/// Dimension of the joint commutant {X : X U_j = U_j X, X P_j = P_j X}.
/// The tuple is irreducible iff this equals 1.
Eigen::Index commutant_dimension(const ModelTuple& t,
                                 const Tolerances& tol = {});

/// [rank P_1, ..., rank P_n]; their sum must equal dim_E on a valid tuple.
std::vector<Eigen::Index> rank_accounting(const ModelTuple& t,
                                          const Tolerances& tol = {});

} // namespace miso

#endif
