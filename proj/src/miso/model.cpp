#include "model.hpp"

#include <random>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace miso {

void ModelTuple::check_well_formed(const Tolerances& tol) const {
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const auto& pr = pairs[j];
    if (pr.U.rows() != dim_E || pr.U.cols() != dim_E || pr.P.rows() != dim_E ||
        pr.P.cols() != dim_E)
      throw DimensionError("model pair " + std::to_string(j + 1) +
                           " has wrong dimensions");
    if (!is_unitary(pr.U, tol))
      throw PreconditionError("U_" + std::to_string(j + 1) + " is not unitary");
    if (!is_projection(pr.P, tol))
      throw PreconditionError("P_" + std::to_string(j + 1) +
                              " is not a projection");
  }
}

ValidationReport validate_model(const ModelTuple& t, const Tolerances& tol) {
  t.check_well_formed(tol);
  const Eigen::Index d = t.dim_E;
  const Eigen::Index n = t.n();
  const auto id = ComplexMatrix::Identity(d, d);
  ValidationReport r;

  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      r.commutation = std::max(
          r.commutation, frob(t.pairs[i].U * t.pairs[j].U -
                              t.pairs[j].U * t.pairs[i].U));

  ComplexMatrix prod = id;
  for (Eigen::Index j = 0; j < n; ++j) prod = prod * t.pairs[j].U;
  r.product_identity = frob(prod - id);

  // (c) checked for all ordered pairs; the common value must itself be a
  // projection (hence <= I).
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& Ui = t.pairs[i].U;
      const auto& Uj = t.pairs[j].U;
      const auto& Pi = t.pairs[i].P;
      const auto& Pj = t.pairs[j].P;
      ComplexMatrix lhs = Pj + Uj.adjoint() * Pi * Uj;
      ComplexMatrix rhs = Pi + Ui.adjoint() * Pj * Ui;
      r.balance = std::max(r.balance, frob(lhs - rhs));
      r.balance_projection =
          std::max(r.balance_projection,
                   std::max(frob(lhs * lhs - lhs), frob(lhs.adjoint() - lhs)));
    }

  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  ComplexMatrix conj = id; // U_{j-1} ... U_1
  for (Eigen::Index j = 0; j < n; ++j) {
    sum += conj.adjoint() * t.pairs[j].P * conj;
    conj = t.pairs[j].U * conj;
  }
  r.resolution = frob(sum - id);

  r.pass_a = r.commutation <= tol.tol_eq;
  r.pass_b = r.product_identity <= tol.tol_eq;
  r.pass_c = r.balance <= tol.tol_eq && r.balance_projection <= tol.tol_eq;
  r.pass_d = r.resolution <= tol.tol_eq;
  r.pass = r.pass_a && r.pass_b && r.pass_c && r.pass_d;
  return r;
}

std::pair<ComplexMatrix, ComplexMatrix> compose(const ComplexMatrix& u1,
                                                const ComplexMatrix& p1,
                                                const ComplexMatrix& u2,
                                                const ComplexMatrix& p2,
                                                const Tolerances& tol) {
  if (u1.rows() != u2.rows() || u1.rows() != p1.rows() ||
      u1.rows() != p2.rows())
    throw DimensionError("compose: dimension mismatch");
  if (!is_unitary(u1, tol) || !is_unitary(u2, tol))
    throw PreconditionError("compose: inputs must be unitary");
  if (!is_projection(p1, tol) || !is_projection(p2, tol))
    throw PreconditionError("compose: inputs must be projections");
  const double orth = frob(p1 * u2 * p2);
  if (orth > tol.tol_eq) {
    std::ostringstream os;
    os << "compose: projections not orthogonal, ||P1 U2 P2|| = " << orth;
    throw PreconditionError(os.str());
  }
  ComplexMatrix u = u1 * u2;
  ComplexMatrix p = p2 + u2.adjoint() * p1 * u2;
  if (!is_projection(p, tol))
    throw InternalError("compose: result P is not a projection");
  return {u, p};
}

ModelTuple complete_tuple(const std::vector<ModelPair>& prefix,
                          const Tolerances& tol) {
  if (prefix.empty()) throw PreconditionError("complete_tuple: empty prefix");
  const Eigen::Index d = prefix[0].U.rows();
  const Eigen::Index m = static_cast<Eigen::Index>(prefix.size());
  const auto id = ComplexMatrix::Identity(d, d);

  ModelTuple check{d, prefix};
  check.check_well_formed(tol);

  // hypothesis (1): pairwise commutation
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double res = frob(prefix[i].U * prefix[j].U -
                              prefix[j].U * prefix[i].U);
      if (res > tol.tol_eq) {
        std::ostringstream os;
        os << "complete_tuple: condition (1) fails for pair (" << i + 1 << ","
           << j + 1 << "), residual " << res;
        throw PreconditionError(os.str());
      }
    }

  // hypothesis (2): balance between prefix pairs
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i == j) continue;
      ComplexMatrix lhs =
          prefix[j].P + prefix[j].U.adjoint() * prefix[i].P * prefix[j].U;
      ComplexMatrix rhs =
          prefix[i].P + prefix[i].U.adjoint() * prefix[j].P * prefix[i].U;
      const double res = frob(lhs - rhs);
      const double proj_res =
          std::max(frob(lhs * lhs - lhs), frob(lhs.adjoint() - lhs));
      if (res > tol.tol_eq || proj_res > tol.tol_eq) {
        std::ostringstream os;
        os << "complete_tuple: condition (2) fails for pair (" << i + 1 << ","
           << j + 1 << "), residual " << std::max(res, proj_res);
        throw PreconditionError(os.str());
      }
    }

  // hypothesis (3): the partial sum is a projection <= I
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  ComplexMatrix conj = id;
  for (Eigen::Index j = 0; j < m; ++j) {
    sum += conj.adjoint() * prefix[j].P * conj;
    conj = prefix[j].U * conj;
  }
  {
    const double proj_res =
        std::max(frob(sum * sum - sum), frob(sum.adjoint() - sum));
    if (proj_res > tol.tol_eq) {
      std::ostringstream os;
      os << "complete_tuple: condition (3) fails, partial sum is not a "
            "projection, residual "
         << proj_res;
      throw PreconditionError(os.str());
    }
  }

  ComplexMatrix u = id;
  for (Eigen::Index j = 0; j < m; ++j) u = u * prefix[j].U;
  ModelTuple out{d, prefix};
  out.pairs.push_back({u.adjoint(), id - u * sum * u.adjoint()});
  return out;
}

bool doubly_commuting(const ComplexMatrix& u1, const ComplexMatrix& p1,
                      const Tolerances& tol) {
  if (!is_unitary(u1, tol))
    throw PreconditionError("doubly_commuting: U is not unitary");
  if (!is_projection(p1, tol))
    throw PreconditionError("doubly_commuting: P is not a projection");
  const auto id = ComplexMatrix::Identity(p1.rows(), p1.cols());
  return op_norm(p1 * u1 * (id - p1)) <= tol.tol_eq;
}

namespace {

// Stacked linear system whose nullspace is
// {X : X A_k = B_k X for all k} under column-major vectorization.
ComplexMatrix intertwining_system(const std::vector<ComplexMatrix>& as,
                                  const std::vector<ComplexMatrix>& bs) {
  const Eigen::Index d = as[0].rows();
  const Eigen::Index dd = d * d;
  const auto k = static_cast<Eigen::Index>(as.size());
  ComplexMatrix sys(k * dd, dd);
  const auto id = ComplexMatrix::Identity(d, d);
  for (Eigen::Index i = 0; i < k; ++i) {
    // vec(X A) = (A^T kron I) vec X, vec(B X) = (I kron B) vec X
    ComplexMatrix block = Eigen::kroneckerProduct(as[i].transpose(), id) -
                          Eigen::kroneckerProduct(id, bs[i]);
    sys.middleRows(i * dd, dd) = block;
  }
  return sys;
}

std::vector<ComplexMatrix> family_of(const ModelTuple& t) {
  std::vector<ComplexMatrix> fam;
  for (const auto& pr : t.pairs) {
    fam.push_back(pr.U);
    fam.push_back(pr.P);
  }
  return fam;
}

double intertwiner_residual(const ComplexMatrix& w, const ModelTuple& a,
                            const ModelTuple& b) {
  double res = 0.0;
  for (Eigen::Index j = 0; j < a.n(); ++j) {
    res = std::max(res, frob(w * a.pairs[j].U - b.pairs[j].U * w));
    res = std::max(res, frob(w * a.pairs[j].P - b.pairs[j].P * w));
  }
  return res;
}

} // namespace

Eigen::Index commutant_dimension(const ModelTuple& t, const Tolerances& tol) {
  auto fam = family_of(t);
  ComplexMatrix sys = intertwining_system(fam, fam);
  return nullspace(sys, tol).dim();
}

EquivalenceResult equivalent(const ModelTuple& a, const ModelTuple& b,
                             const Tolerances& tol, unsigned long seed) {
  EquivalenceResult out;
  if (a.n() != b.n()) {
    out.status = EquivalenceStatus::not_equivalent;
    out.reason = "tuple lengths differ";
    return out;
  }
  if (a.dim_E != b.dim_E) {
    out.status = EquivalenceStatus::not_equivalent;
    out.reason = "space dimensions differ";
    return out;
  }
  const Eigen::Index d = a.dim_E;
  ComplexMatrix sys = intertwining_system(family_of(a), family_of(b));
  Subspace null = nullspace(sys, tol);
  if (null.dim() == 0) {
    out.status = EquivalenceStatus::not_equivalent;
    out.reason = "intertwining system has trivial solution space";
    return out;
  }

  auto certify = [&](const ComplexMatrix& w) -> bool {
    return is_unitary(w, tol) && intertwiner_residual(w, a, b) <= tol.tol_eq;
  };

  // Irreducible case: any nonzero intertwiner is a scalar multiple of a
  // unitary, so normalizing the trace of X^H X suffices.
  if (commutant_dimension(a, tol) == 1 && commutant_dimension(b, tol) == 1) {
    ComplexMatrix x =
        Eigen::Map<const ComplexMatrix>(null.basis().col(0).data(), d, d);
    const double mu = std::sqrt((x.adjoint() * x).trace().real() / double(d));
    if (mu > 0) {
      ComplexMatrix w = x / mu;
      if (certify(w)) {
        out.status = EquivalenceStatus::equivalent;
        out.intertwiner = w;
        return out;
      }
    }
  }

  // Reducible case: polar-decompose random solution-space elements.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int attempt = 0; attempt < 8; ++attempt) {
    ComplexVector coeffs(null.dim());
    for (Eigen::Index i = 0; i < null.dim(); ++i)
      coeffs(i) = Complex(g(rng), g(rng));
    ComplexVector v = null.basis() * coeffs;
    ComplexMatrix x = Eigen::Map<const ComplexMatrix>(v.data(), d, d);
    Eigen::JacobiSVD<ComplexMatrix> svd(x,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
    ComplexMatrix w = svd.matrixU() * svd.matrixV().adjoint();
    if (certify(w)) {
      out.status = EquivalenceStatus::equivalent;
      out.intertwiner = w;
      return out;
    }
  }
  out.status = EquivalenceStatus::undecided;
  out.reason = "undecided-reducible: no unitary found in solution space";
  return out;
}

std::vector<Eigen::Index> rank_accounting(const ModelTuple& t,
                                          const Tolerances& tol) {
  std::vector<Eigen::Index> ranks;
  Eigen::Index total = 0;
  for (const auto& pr : t.pairs) {
    Eigen::Index r = span(pr.P, tol).dim();
    ranks.push_back(r);
    total += r;
  }
  if (total != t.dim_E)
    throw InternalError("rank_accounting: sum of ranks " +
                        std::to_string(total) + " != dim_E " +
                        std::to_string(t.dim_E));
  return ranks;
}

} // namespace miso
