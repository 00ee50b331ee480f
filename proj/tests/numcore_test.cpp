#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "miso/numcore.hpp"

using namespace miso;
using testutil::ginibre;
using testutil::random_unitary;

namespace {
ComplexMatrix e_basis(Eigen::Index n, std::initializer_list<int> cols) {
  ComplexMatrix b = ComplexMatrix::Zero(n, static_cast<Eigen::Index>(cols.size()));
  Eigen::Index j = 0;
  for (int c : cols) b(c, j++) = 1.0;
  return b;
}

// nilpotent with T e1 = e2, T e2 = e3, T e3 = 0
ComplexMatrix jordan_transposed() {
  ComplexMatrix t = ComplexMatrix::Zero(3, 3);
  t(1, 0) = 1.0;
  t(2, 1) = 1.0;
  return t;
}
} // namespace

TEST_CASE("is_unitary basic cases") {
  CHECK(is_unitary(ComplexMatrix::Identity(3, 3)));
  ComplexMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(is_unitary(swap));
  ComplexMatrix half = ComplexMatrix::Identity(2, 2);
  half(1, 1) = 0.5;
  CHECK_FALSE(is_unitary(half));
  CHECK_THROWS_AS(is_unitary(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("is_projection basic cases") {
  CHECK(is_projection(ComplexMatrix::Zero(3, 3)));
  ComplexMatrix p = ComplexMatrix::Zero(2, 2);
  p(1, 1) = 1.0;
  CHECK(is_projection(p));
  ComplexMatrix bad(2, 2);
  bad << 0, 1, 0, 1;
  CHECK_FALSE(is_projection(bad));
}

TEST_CASE("span handles dependent columns and full rank") {
  ComplexMatrix m = ComplexMatrix::Zero(3, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 2.0;
  Subspace s = span(m);
  CHECK(s.dim() == 1);
  CHECK(std::abs(std::abs(s.basis()(0, 0)) - 1.0) < 1e-12);

  CHECK(span(ComplexMatrix::Identity(4, 4)).dim() == 4);

  std::mt19937_64 rng(11);
  ComplexMatrix r = ginibre(4, 2, rng);
  Subspace sr = span(r);
  CHECK(sr.dim() == 2);
  CHECK(sr.orth_residual() < 1e-12);
}

TEST_CASE("subspace lattice operations") {
  Subspace s1(3, e_basis(3, {0}));
  Subspace s2(3, e_basis(3, {1}));
  CHECK(subspace_sum(s1, s2).dim() == 2);
  CHECK(subspace_equal(subspace_sum(s1, s2), Subspace(3, e_basis(3, {0, 1}))));

  Subspace a(3, e_basis(3, {0, 1}));
  Subspace b(3, e_basis(3, {1, 2}));
  Subspace inter = subspace_intersect(a, b);
  CHECK(inter.dim() == 1);
  CHECK(subspace_equal(inter, s2));

  CHECK(subspace_contains(s1, Subspace::full(3)));
  CHECK_FALSE(subspace_contains(a, b));
  CHECK(subspace_complement(a).dim() == 1);
  CHECK(subspace_minus(a, s1).dim() == 1);
  CHECK_THROWS_AS(subspace_sum(s1, Subspace::zero(4)), DimensionError);
}

TEST_CASE("invariant_closure on identity, Jordan block and full seed") {
  Subspace e1(3, e_basis(3, {0}));
  CHECK(invariant_closure(ComplexMatrix::Identity(3, 3), e1).dim() == 1);

  CHECK(invariant_closure(jordan_transposed(), e1).dim() == 3);

  CHECK(invariant_closure(jordan_transposed(), Subspace::full(3)).dim() == 3);
}

TEST_CASE("invariant_closure is idempotent and T-invariant") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix t = ginibre(5, 5, rng);
    Subspace seed = span(ginibre(5, 2, rng));
    Subspace s = invariant_closure(t, seed);
    CHECK(subspace_contains(seed, s));
    ComplexMatrix proj = s.projector();
    CHECK(frob((ComplexMatrix::Identity(5, 5) - proj) * t * proj) < 1e-9);
    CHECK(invariant_closure(t, s).dim() == s.dim());
  }
}

TEST_CASE("largest_invariant_inside trivial containers") {
  std::mt19937_64 rng(7);
  ComplexMatrix t = ginibre(3, 3, rng);
  CHECK(largest_invariant_inside(t, Subspace::full(3)).dim() == 3);
  CHECK(largest_invariant_inside(t, Subspace::zero(3)).dim() == 0);
}

TEST_CASE("largest_invariant_inside on the nilpotent block lattice") {
  // invariant subspaces of this block: 0, span{e3}, span{e2,e3}, full
  ComplexMatrix t = jordan_transposed();
  Subspace c23(3, e_basis(3, {1, 2}));
  CHECK(subspace_equal(largest_invariant_inside(t, c23), c23));
  Subspace c13(3, e_basis(3, {0, 2}));
  CHECK(subspace_equal(largest_invariant_inside(t, c13),
                       Subspace(3, e_basis(3, {2}))));
}

TEST_CASE("duality between closure and largest invariant") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix t = ginibre(4, 4, rng);
    Subspace c = span(ginibre(4, 2, rng));
    Subspace lhs = largest_invariant_inside(t, c);
    Subspace rhs =
        subspace_complement(invariant_closure(t.adjoint(), subspace_complement(c)));
    CHECK(subspace_equal(lhs, rhs));
  }
}

TEST_CASE("closure equals brute-force eigenvector span for diagonalizable T") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 4;
    ComplexMatrix q = random_unitary(n, rng);
    ComplexVector lam(n);
    for (Eigen::Index i = 0; i < n; ++i) lam(i) = Complex(0.2 * double(i) + 0.1, 0.3);
    ComplexMatrix t = q * lam.asDiagonal() * q.adjoint();
    ComplexVector v = ComplexVector::Zero(n);
    // seed touching eigenvectors 0 and 2 only
    v += q.col(0) + q.col(2);
    Subspace s = invariant_closure(t, span(v));
    CHECK(s.dim() == 2);
    CHECK(subspace_contains(span(q.col(0)), s));
    CHECK(subspace_contains(span(q.col(2)), s));
  }
}
