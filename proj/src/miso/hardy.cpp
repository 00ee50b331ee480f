#include "hardy.hpp"

namespace miso {

LinearSymbol symbol_of_model(const ComplexMatrix& u, const ComplexMatrix& p,
                             const Tolerances& tol) {
  if (!is_unitary(u, tol))
    throw PreconditionError("symbol_of_model: U is not unitary");
  if (!is_projection(p, tol))
    throw PreconditionError("symbol_of_model: P is not a projection");
  const auto id = ComplexMatrix::Identity(u.rows(), u.cols());
  return LinearSymbol{u * (id - p), u * p};
}

PolySymbol symbol_product(const LinearSymbol& theta, const LinearSymbol& omega) {
  if (theta.block_size() != omega.block_size())
    throw DimensionError("symbol_product: block sizes differ");
  return {theta.A * omega.A, theta.A * omega.B + theta.B * omega.A,
          theta.B * omega.B};
}

bool is_shift(const PolySymbol& s, const Tolerances& tol) {
  if (s.empty()) return false;
  const Eigen::Index m = s[0].rows();
  const auto id = ComplexMatrix::Identity(m, m);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const ComplexMatrix target = (k == 1) ? ComplexMatrix(id)
                                          : ComplexMatrix(ComplexMatrix::Zero(m, m));
    if (frob(s[k] - target) > tol.tol_eq) return false;
  }
  return s.size() >= 2;
}

std::pair<LinearSymbol, LinearSymbol> divisor_pair(const ComplexMatrix& u,
                                                   const ComplexMatrix& p,
                                                   const Tolerances& tol) {
  LinearSymbol v = symbol_of_model(u, p, tol);
  const auto id = ComplexMatrix::Identity(u.rows(), u.cols());
  // W = (P + z P-perp) U^H
  LinearSymbol w{p * u.adjoint(), (id - p) * u.adjoint()};
  return {v, w};
}

TruncatedOperator truncate(const PolySymbol& s, Eigen::Index n_blocks) {
  if (n_blocks < 1) throw PreconditionError("truncate: N must be >= 1");
  if (s.empty()) throw PreconditionError("truncate: empty symbol");
  const Eigen::Index m = s[0].rows();
  TruncatedOperator t;
  t.block_size = m;
  t.degree_count = n_blocks;
  t.matrix = ComplexMatrix::Zero(m * n_blocks, m * n_blocks);
  // block (i, j) = coefficient i - j
  for (Eigen::Index i = 0; i < n_blocks; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const auto k = static_cast<std::size_t>(i - j);
      if (k < s.size()) t.matrix.block(i * m, j * m, m, m) = s[k];
    }
  return t;
}

TruncatedOperator truncate(const LinearSymbol& theta, Eigen::Index n_blocks) {
  return truncate(PolySymbol{theta.A, theta.B}, n_blocks);
}

TruncatedOperator adjoint(const TruncatedOperator& t) {
  return {t.block_size, t.degree_count, t.matrix.adjoint()};
}

Subspace kernel_of_adjoint(const LinearSymbol& theta, Eigen::Index n_blocks,
                           const Tolerances& tol) {
  return nullspace(truncate(theta, n_blocks).matrix.adjoint(), tol);
}

Subspace unitary_part_truncated(const std::vector<LinearSymbol>& symbols,
                                Eigen::Index n_blocks, const Tolerances& tol) {
  if (symbols.empty())
    throw PreconditionError("unitary_part_truncated: no symbols");
  const Eigen::Index m = symbols[0].block_size();
  ComplexMatrix prod = ComplexMatrix::Identity(m * n_blocks, m * n_blocks);
  for (const auto& s : symbols) prod = prod * truncate(s, n_blocks).matrix;

  Subspace cur = Subspace::full(m * n_blocks);
  ComplexMatrix pw = prod;
  for (Eigen::Index k = 1; k <= n_blocks; ++k) {
    cur = subspace_intersect(cur, span(pw, tol), tol);
    if (cur.dim() == 0) break;
    pw = pw * prod;
  }
  return cur;
}

ComplexMatrix commutator_defect(const ComplexMatrix& u1,
                                const ComplexMatrix& p1,
                                const Tolerances& tol) {
  if (!is_unitary(u1, tol))
    throw PreconditionError("commutator_defect: U is not unitary");
  if (!is_projection(p1, tol))
    throw PreconditionError("commutator_defect: P is not a projection");
  const auto id = ComplexMatrix::Identity(u1.rows(), u1.cols());
  return u1 * p1 * u1 * (id - p1);
}

} // namespace miso
