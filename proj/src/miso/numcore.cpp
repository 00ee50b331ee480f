#include "numcore.hpp"

#include <Eigen/SVD>

namespace miso {

double op_norm(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

bool is_unitary(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols())
    throw DimensionError("is_unitary: matrix must be square");
  const auto id = ComplexMatrix::Identity(m.rows(), m.cols());
  return frob(m.adjoint() * m - id) <= tol.tol_orth &&
         frob(m * m.adjoint() - id) <= tol.tol_orth;
}

bool is_projection(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols())
    throw DimensionError("is_projection: matrix must be square");
  return frob(m * m - m) <= tol.tol_orth &&
         frob(m.adjoint() - m) <= tol.tol_orth;
}

namespace {

// Full SVD; returns left singular vectors and rank under the cutoff rule.
std::pair<ComplexMatrix, Eigen::Index> left_vectors_and_rank(
    const ComplexMatrix& m, const Tolerances& tol) {
  const Eigen::Index rows = m.rows();
  if (m.cols() == 0 || rows == 0)
    return {ComplexMatrix::Identity(rows, rows), 0};
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double cutoff = smax < 1e-14 ? 1e-14 : tol.tol_rank * smax;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return {svd.matrixU(), rank};
}

} // namespace

Subspace span(const ComplexMatrix& m, const Tolerances& tol) {
  auto [u, rank] = left_vectors_and_rank(m, tol);
  return Subspace(m.rows(), u.leftCols(rank));
}

Subspace nullspace(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.cols() == 0) return Subspace::zero(m.cols());
  if (m.rows() == 0) return Subspace::full(m.cols());
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double cutoff = smax < 1e-14 ? 1e-14 : tol.tol_rank * smax;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return Subspace(m.cols(), svd.matrixV().rightCols(m.cols() - rank));
}

static void check_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw DimensionError("subspace ambient dimensions differ");
}

Subspace subspace_sum(const Subspace& a, const Subspace& b,
                      const Tolerances& tol) {
  check_same_ambient(a, b);
  ComplexMatrix cat(a.ambient_dim(), a.dim() + b.dim());
  cat << a.basis(), b.basis();
  return span(cat, tol);
}

Subspace subspace_complement(const Subspace& a, const Tolerances& tol) {
  auto [u, rank] = left_vectors_and_rank(a.basis(), tol);
  return Subspace(a.ambient_dim(), u.rightCols(a.ambient_dim() - rank));
}

// A cap B = (A-perp + B-perp)-perp
Subspace subspace_intersect(const Subspace& a, const Subspace& b,
                            const Tolerances& tol) {
  check_same_ambient(a, b);
  return subspace_complement(
      subspace_sum(subspace_complement(a, tol), subspace_complement(b, tol),
                   tol),
      tol);
}

Subspace subspace_minus(const Subspace& b, const Subspace& a,
                        const Tolerances& tol) {
  check_same_ambient(a, b);
  return subspace_intersect(b, subspace_complement(a, tol), tol);
}

bool subspace_contains(const Subspace& inner, const Subspace& outer,
                       const Tolerances& tol) {
  check_same_ambient(inner, outer);
  if (inner.dim() == 0) return true;
  const ComplexMatrix rem =
      inner.basis() - outer.projector() * inner.basis();
  // per-column containment residual
  for (Eigen::Index j = 0; j < rem.cols(); ++j)
    if (rem.col(j).norm() > tol.tol_orth) return false;
  return true;
}

bool subspace_equal(const Subspace& a, const Subspace& b,
                    const Tolerances& tol) {
  return a.dim() == b.dim() && subspace_contains(a, b, tol) &&
         subspace_contains(b, a, tol);
}

Subspace invariant_closure(const ComplexMatrix& t, const Subspace& seed,
                           const Tolerances& tol) {
  if (t.rows() != t.cols())
    throw DimensionError("invariant_closure: T must be square");
  if (t.rows() != seed.ambient_dim())
    throw DimensionError("invariant_closure: seed ambient mismatch");
  Subspace cur = span(seed.basis(), tol);
  for (Eigen::Index it = 0; it <= t.rows(); ++it) {
    ComplexMatrix cat(t.rows(), 2 * cur.dim());
    cat << cur.basis(), t * cur.basis();
    Subspace next = span(cat, tol);
    if (next.dim() == cur.dim()) return next;
    cur = std::move(next);
  }
  return cur;
}

Subspace largest_invariant_inside(const ComplexMatrix& t,
                                  const Subspace& container,
                                  const Tolerances& tol) {
  if (t.rows() != t.cols())
    throw DimensionError("largest_invariant_inside: T must be square");
  if (t.rows() != container.ambient_dim())
    throw DimensionError("largest_invariant_inside: ambient mismatch");
  return subspace_complement(
      invariant_closure(t.adjoint(), subspace_complement(container, tol), tol),
      tol);
}

} // namespace miso
