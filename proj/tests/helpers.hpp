#ifndef MISO_TEST_HELPERS_HPP
#define MISO_TEST_HELPERS_HPP

#include <random>
#include <utility>

#include "miso/model.hpp"

namespace testutil {

using miso::Complex;
using miso::ComplexMatrix;
using miso::ComplexVector;

inline ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols,
                             std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline ComplexMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(n, n, rng));
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1, 0);
  }
  return q;
}

inline ComplexVector random_phases(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = std::polar(1.0, u(rng));
  return v;
}

inline std::pair<ComplexMatrix, ComplexMatrix> commuting_unitaries(
    Eigen::Index n, std::mt19937_64& rng) {
  ComplexMatrix q = random_unitary(n, rng);
  ComplexMatrix u1 = q * random_phases(n, rng).asDiagonal() * q.adjoint();
  ComplexMatrix u2 = q * random_phases(n, rng).asDiagonal() * q.adjoint();
  return {u1, u2};
}

inline ComplexMatrix random_projection(Eigen::Index n, Eigen::Index rank,
                                       std::mt19937_64& rng) {
  ComplexMatrix b = random_unitary(n, rng).leftCols(rank);
  return b * b.adjoint();
}

/// Random contraction with operator norm exactly norm_cap.
inline ComplexMatrix random_contraction(Eigen::Index n, double norm_cap,
                                        std::mt19937_64& rng) {
  ComplexMatrix m = ginibre(n, n, rng);
  return m * (norm_cap / miso::op_norm(m));
}

/// A valid 2-pair prefix of a 3-isometry: simultaneously diagonal data with
/// disjoint projection supports, conjugated by a random unitary.
inline std::vector<miso::ModelPair> random_valid_prefix3(Eigen::Index dim,
                                                         std::mt19937_64& rng) {
  std::uniform_int_distribution<Eigen::Index> pick(1, dim - 2);
  const Eigen::Index r1 = pick(rng);
  std::uniform_int_distribution<Eigen::Index> pick2(1, dim - 1 - r1);
  const Eigen::Index r2 = pick2(rng);

  ComplexMatrix p1d = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix p2d = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < r1; ++i) p1d(i, i) = 1.0;
  for (Eigen::Index i = r1; i < r1 + r2; ++i) p2d(i, i) = 1.0;
  ComplexMatrix u1d = random_phases(dim, rng).asDiagonal();
  ComplexMatrix u2d = random_phases(dim, rng).asDiagonal();

  ComplexMatrix q = random_unitary(dim, rng);
  return {{q * u1d * q.adjoint(), q * p1d * q.adjoint()},
          {q * u2d * q.adjoint(), q * p2d * q.adjoint()}};
}

inline miso::ModelTuple conjugate_tuple(const miso::ModelTuple& t,
                                        const ComplexMatrix& w) {
  miso::ModelTuple out;
  out.dim_E = t.dim_E;
  for (const auto& pr : t.pairs)
    out.pairs.push_back(
        {w.adjoint() * pr.U * w, w.adjoint() * pr.P * w});
  return out;
}

} // namespace testutil

#endif
