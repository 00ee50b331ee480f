#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "miso/classify.hpp"
#include "miso/hardy.hpp"
#include "miso/model.hpp"

using namespace miso;
using namespace testutil;

namespace {
bool poly_is(const PolySymbol& s, const std::vector<ComplexMatrix>& expect,
             double tol = 1e-12) {
  for (size_t k = 0; k < std::max(s.size(), expect.size()); ++k) {
    const Eigen::Index m = k < s.size() ? s[k].rows() : expect[k].rows();
    ComplexMatrix a = k < s.size() ? s[k] : ComplexMatrix::Zero(m, m).eval();
    ComplexMatrix b = k < expect.size() ? expect[k] : ComplexMatrix::Zero(m, m).eval();
    if (frob(a - b) > tol) return false;
  }
  return true;
}
} // namespace

TEST_CASE("symbol_of_model extremes and isometry law") {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  LinearSymbol s0 = symbol_of_model(id, ComplexMatrix::Zero(2, 2));
  CHECK(frob(s0.A - id) < 1e-14);
  CHECK(frob(s0.B) < 1e-14);

  LinearSymbol s1 = symbol_of_model(id, id);
  CHECK(frob(s1.A) < 1e-14);
  CHECK(frob(s1.B - id) < 1e-14);

  ModelTuple t = canonical2_build({0.5, 1.0});
  LinearSymbol sc = symbol_of_model(t.pairs[0].U, t.pairs[0].P);
  ComplexMatrix sel = ComplexMatrix::Zero(2, 2);
  sel(0, 0) = 1.0;
  CHECK(frob(sc.A - t.pairs[0].U * sel) < 1e-14);
  CHECK(sc.isometry_defect() < 1e-12);
}

TEST_CASE("symbol products and the shift test") {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  LinearSymbol shift{ComplexMatrix::Zero(2, 2), id};
  LinearSymbol one{id, ComplexMatrix::Zero(2, 2)};
  CHECK(is_shift(symbol_product(shift, one)));
  CHECK_FALSE(is_shift(symbol_product(shift, shift)));
  CHECK(poly_is(symbol_product(shift, shift),
                {ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2), id}));

  ModelTuple t = canonical2_build({0.5, 1.0});
  LinearSymbol v = symbol_of_model(t.pairs[0].U, t.pairs[0].P);
  LinearSymbol w = symbol_of_model(t.pairs[1].U, t.pairs[1].P);
  CHECK(is_shift(symbol_product(v, w)));
}

TEST_CASE("divisor law over random pairs, dims 2..6") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    ComplexMatrix u = random_unitary(n, rng);
    ComplexMatrix p = random_projection(n, trial % (n + 1), rng);
    auto [v, w] = divisor_pair(u, p);
    PolySymbol vw = symbol_product(v, w);
    PolySymbol wv = symbol_product(w, v);
    CHECK(is_shift(vw, {1e-9, 1e-10, 1e-12}));
    CHECK(is_shift(wv, {1e-9, 1e-10, 1e-12}));

    // the complementary divisor composes back to the full shift
    ComplexMatrix p2 = u * (ComplexMatrix::Identity(n, n) - p) * u.adjoint();
    auto [uc, pc] = compose(u, p, u.adjoint(), p2);
    CHECK(frob(uc - ComplexMatrix::Identity(n, n)) < 1e-12);
    CHECK(frob(pc - ComplexMatrix::Identity(n, n)) < 1e-12);
  }
}

TEST_CASE("truncate structure for shift and identity") {
  LinearSymbol shift{ComplexMatrix::Zero(1, 1), ComplexMatrix::Identity(1, 1)};
  TruncatedOperator ts = truncate(shift, 3);
  ComplexMatrix expect = ComplexMatrix::Zero(3, 3);
  expect(1, 0) = 1.0;
  expect(2, 1) = 1.0;
  CHECK(frob(ts.matrix - expect) < 1e-14);

  LinearSymbol one{ComplexMatrix::Identity(2, 2), ComplexMatrix::Zero(2, 2)};
  CHECK(frob(truncate(one, 4).matrix - ComplexMatrix::Identity(8, 8)) < 1e-14);
}

TEST_CASE("truncation consistency off the top block column") {
  std::mt19937_64 rng(103);
  const Eigen::Index m = 3, N = 6;
  ComplexMatrix u = random_unitary(m, rng);
  ComplexMatrix p = random_projection(m, 1, rng);
  auto [v, w] = divisor_pair(u, p);
  ComplexMatrix lhs = truncate(v, N).matrix * truncate(w, N).matrix;
  ComplexMatrix rhs = truncate(symbol_product(v, w), N).matrix;
  CHECK(frob(lhs.leftCols(m * (N - 1)) - rhs.leftCols(m * (N - 1))) < 1e-12);
}

TEST_CASE("adjoint of the truncation") {
  LinearSymbol shift{ComplexMatrix::Zero(1, 1), ComplexMatrix::Identity(1, 1)};
  TruncatedOperator ts = truncate(shift, 4);
  TruncatedOperator back = adjoint(ts);
  CHECK(frob(back.matrix - ts.matrix.adjoint()) < 1e-14);
  CHECK(frob(adjoint(back).matrix - ts.matrix) < 1e-14);

  // analytic adjoint formula on low-degree monomials
  ModelTuple t = canonical2_build({0.5, 1.0});
  const Eigen::Index N = 6, m = 2;
  const ComplexMatrix& u = t.pairs[0].U;
  const ComplexMatrix& p = t.pairs[0].P;
  TruncatedOperator tv = truncate(symbol_of_model(u, p), N);
  ComplexMatrix pperp = ComplexMatrix::Identity(m, m) - p;
  for (Eigen::Index deg = 0; deg + 1 < N - 1; ++deg) {
    for (Eigen::Index c = 0; c < m; ++c) {
      ComplexVector f = ComplexVector::Zero(m * N);
      f(deg * m + c) = 1.0;
      ComplexVector got = tv.matrix.adjoint() * f;
      // V* f = Pperp U^H f + z^{-1} P U^H (f - f(0))
      ComplexVector expect = ComplexVector::Zero(m * N);
      ComplexVector coeff = u.adjoint() * ComplexVector::Unit(m, c);
      expect.segment(deg * m, m) += pperp * coeff;
      if (deg >= 1) expect.segment((deg - 1) * m, m) += p * coeff;
      CHECK((got - expect).norm() < 1e-12);
    }
  }
}

TEST_CASE("kernel_of_adjoint dimension equals the projection rank") {
  LinearSymbol shift2{ComplexMatrix::Zero(2, 2), ComplexMatrix::Identity(2, 2)};
  CHECK(kernel_of_adjoint(shift2, 4).dim() == 2);

  LinearSymbol one{ComplexMatrix::Identity(2, 2), ComplexMatrix::Zero(2, 2)};
  CHECK(kernel_of_adjoint(one, 4).dim() == 0);

  ModelTuple t = canonical2_build({0.5, 1.0});
  for (Eigen::Index N : {3, 5, 8}) {
    Subspace k = kernel_of_adjoint(
        symbol_of_model(t.pairs[1].U, t.pairs[1].P), N);
    CHECK(k.dim() == 1);
    // constants: no component of degree >= 1
    CHECK(k.basis().bottomRows(2 * (N - 1)).norm() < 1e-10);
  }

  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    ComplexMatrix u = random_unitary(n, rng);
    const Eigen::Index r = trial % (n + 1);
    ComplexMatrix p = random_projection(n, r, rng);
    CHECK(kernel_of_adjoint(symbol_of_model(u, p), 5).dim() == r);
  }
}

TEST_CASE("unitary part of truncations") {
  LinearSymbol shift{ComplexMatrix::Zero(1, 1), ComplexMatrix::Identity(1, 1)};
  CHECK(unitary_part_truncated({shift}, 6).dim() == 0);

  LinearSymbol one{ComplexMatrix::Identity(1, 1), ComplexMatrix::Zero(1, 1)};
  CHECK(unitary_part_truncated({one}, 6).dim() == 6);

  ModelTuple t = canonical2_build({0.5, 1.0});
  std::vector<LinearSymbol> syms;
  for (const auto& pr : t.pairs) syms.push_back(symbol_of_model(pr.U, pr.P));
  CHECK(unitary_part_truncated(syms, 6).dim() == 0);
}

TEST_CASE("commutator defect matches the dense truncated commutator") {
  std::mt19937_64 rng(109);
  ComplexMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  ComplexMatrix psel = ComplexMatrix::Zero(2, 2);
  psel(1, 1) = 1.0;
  CHECK(frob(commutator_defect(swap, psel)) == doctest::Approx(1.0));
  ComplexMatrix diag = random_phases(3, rng).asDiagonal();
  CHECK(frob(commutator_defect(diag, random_projection(3, 1, rng) * 0)) < 1e-14);

  const Eigen::Index N = 8;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index m = 2 + trial % 3;
    ComplexMatrix u1 = random_unitary(m, rng);
    ComplexMatrix p1 = random_projection(m, 1 + trial % m, rng);
    ModelTuple t = complete_tuple({{u1, p1}});
    ComplexMatrix v1 = truncate(symbol_of_model(u1, p1), N).matrix;
    ComplexMatrix v2 =
        truncate(symbol_of_model(t.pairs[1].U, t.pairs[1].P), N).matrix;
    ComplexMatrix comm = v2.adjoint() * v1 - v1 * v2.adjoint();
    ComplexMatrix window = comm.topLeftCorner(m * (N - 1), m * (N - 1));
    ComplexMatrix expect = ComplexMatrix::Zero(m * (N - 1), m * (N - 1));
    expect.topLeftCorner(m, m) = commutator_defect(u1, p1);
    CHECK(frob(window - expect) < 1e-12);
  }
}
