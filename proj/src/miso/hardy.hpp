#ifndef MISO_HARDY_HPP
#define MISO_HARDY_HPP

#include <vector>

#include "numcore.hpp"

namespace miso {

/// Degree-1 operator polynomial Theta(z) = A + z B acting as a multiplier
/// on H^2 of C^m. Model symbols (from a unitary/projection pair) satisfy
/// A^H A + B^H B = I and A^H B = 0.
struct LinearSymbol {
  ComplexMatrix A;
  ComplexMatrix B;

  Eigen::Index block_size() const { return A.rows(); }

  /// Residual of the isometric-multiplier coefficient identities.
  double isometry_defect() const {
    const auto id = ComplexMatrix::Identity(A.rows(), A.cols());
    return std::max(frob(A.adjoint() * A + B.adjoint() * B - id),
                    frob(A.adjoint() * B));
  }
};

/// Polynomial symbol as a coefficient list c[0] + z c[1] + ...
using PolySymbol = std::vector<ComplexMatrix>;

/// Finite window onto H^2: the compression of a multiplier to polynomials
/// of degree < N, stored dense. For a LinearSymbol this is block-Toeplitz
/// lower bidiagonal (diagonal blocks A, subdiagonal blocks B).
struct TruncatedOperator {
  Eigen::Index block_size = 0;
  Eigen::Index degree_count = 0;
  ComplexMatrix matrix; // (m*N) x (m*N)
};

/// Symbol of the divisor V_{U,P}: A = U(I-P), B = UP.
LinearSymbol symbol_of_model(const ComplexMatrix& u, const ComplexMatrix& p,
                             const Tolerances& tol = {});

/// Coefficient convolution of two degree-1 symbols (degree <= 2 result).
PolySymbol symbol_product(const LinearSymbol& theta, const LinearSymbol& omega);

/// True iff the polynomial symbol equals z I.
bool is_shift(const PolySymbol& s, const Tolerances& tol = {});

/// The pair (V, W) with V = U(zP + P-perp), W = (P + zP-perp)U^H, whose
/// products both equal z I.
std::pair<LinearSymbol, LinearSymbol> divisor_pair(const ComplexMatrix& u,
                                                   const ComplexMatrix& p,
                                                   const Tolerances& tol = {});

TruncatedOperator truncate(const LinearSymbol& theta, Eigen::Index n_blocks);
TruncatedOperator truncate(const PolySymbol& s, Eigen::Index n_blocks);

/// Conjugate transpose of the window matrix; agrees with the analytic
/// adjoint on inputs of degree < N-1.
TruncatedOperator adjoint(const TruncatedOperator& t);

/// Kernel of the adjoint of the truncation, as a subspace of the window.
/// For a model symbol its dimension equals rank P.
Subspace kernel_of_adjoint(const LinearSymbol& theta, Eigen::Index n_blocks,
                           const Tolerances& tol = {});

/// Joint unitary part within the window: intersection of the ranges of the
/// k-th powers of the product truncation, k = 1..N.
Subspace unitary_part_truncated(const std::vector<LinearSymbol>& symbols,
                                Eigen::Index n_blocks,
                                const Tolerances& tol = {});

/// U1 P1 U1 (I - P1); zero iff the model two-isometry doubly commutes, and
/// its norm is the norm of the commutator V2^* V1 - V1 V2^*.
ComplexMatrix commutator_defect(const ComplexMatrix& u1,
                                const ComplexMatrix& p1,
                                const Tolerances& tol = {});

} // namespace miso

#endif
