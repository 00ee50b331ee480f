#ifndef MISO_NUMCORE_HPP
#define MISO_NUMCORE_HPP

#include "types.hpp"

namespace miso {

/// A linear subspace of C^ambient, stored as an orthonormal column basis.
/// Zero-dimensional subspaces are first-class (basis with 0 columns).
class Subspace {
public:
  Subspace() : ambient_(0), basis_(0, 0) {}
  Subspace(Eigen::Index ambient, ComplexMatrix basis)
      : ambient_(ambient), basis_(std::move(basis)) {
    if (basis_.rows() != ambient_)
      throw DimensionError("subspace basis row count != ambient dimension");
  }

  static Subspace zero(Eigen::Index ambient) {
    return Subspace(ambient, ComplexMatrix(ambient, 0));
  }
  static Subspace full(Eigen::Index ambient) {
    return Subspace(ambient, ComplexMatrix::Identity(ambient, ambient));
  }

  Eigen::Index ambient_dim() const { return ambient_; }
  Eigen::Index dim() const { return basis_.cols(); }
  const ComplexMatrix& basis() const { return basis_; }

  /// Orthogonal projector onto the subspace (ambient x ambient).
  ComplexMatrix projector() const { return basis_ * basis_.adjoint(); }

  /// ||B^H B - I||_F, the orthonormality residual.
  double orth_residual() const {
    return frob(basis_.adjoint() * basis_ -
                ComplexMatrix::Identity(dim(), dim()));
  }

private:
  Eigen::Index ambient_;
  ComplexMatrix basis_;
};

bool is_unitary(const ComplexMatrix& m, const Tolerances& tol = {});
bool is_projection(const ComplexMatrix& m, const Tolerances& tol = {});

/// Orthonormal basis of the column span. Rank via singular values
/// > tol_rank * sigma_max (absolute cutoff when sigma_max < 1e-14).
Subspace span(const ComplexMatrix& m, const Tolerances& tol = {});

/// Orthonormal basis of the nullspace of m.
Subspace nullspace(const ComplexMatrix& m, const Tolerances& tol = {});

Subspace subspace_sum(const Subspace& a, const Subspace& b,
                      const Tolerances& tol = {});
Subspace subspace_intersect(const Subspace& a, const Subspace& b,
                            const Tolerances& tol = {});
/// Orthocomplement within the ambient space.
Subspace subspace_complement(const Subspace& a, const Tolerances& tol = {});
/// Orthocomplement of a within the superspace b (a need not be inside b:
/// the result is b ominus projection of a).
Subspace subspace_minus(const Subspace& b, const Subspace& a,
                        const Tolerances& tol = {});
bool subspace_contains(const Subspace& inner, const Subspace& outer,
                       const Tolerances& tol = {});
bool subspace_equal(const Subspace& a, const Subspace& b,
                    const Tolerances& tol = {});

/// Smallest T-invariant subspace containing seed.
Subspace invariant_closure(const ComplexMatrix& t, const Subspace& seed,
                           const Tolerances& tol = {});

/// Largest T-invariant subspace contained in container; computed as the
/// orthocomplement of invariant_closure(T^H, container-perp).
Subspace largest_invariant_inside(const ComplexMatrix& t,
                                  const Subspace& container,
                                  const Tolerances& tol = {});

} // namespace miso

#endif
