#include "pivotal.hpp"

#include <sstream>

#include <Eigen/Eigenvalues>

namespace miso {

namespace {

void check_pair(const ComplexMatrix& u1, const ComplexMatrix& p1,
                const Tolerances& tol) {
  if (!is_unitary(u1, tol))
    throw PreconditionError("pivotal: U1 is not unitary");
  if (!is_projection(p1, tol))
    throw PreconditionError("pivotal: P1 is not a projection");
}

void check_commuting(const ComplexMatrix& u1, const ComplexMatrix& u2,
                     const Tolerances& tol) {
  const double res = frob(u1 * u2 - u2 * u1);
  if (res > tol.tol_eq) {
    std::ostringstream os;
    os << "pivotal: U1, U2 do not commute, residual " << res;
    throw PreconditionError(os.str());
  }
}

} // namespace

PivotalFrame pivotal_frame(const ComplexMatrix& u1, const ComplexMatrix& p1,
                           const Tolerances& tol) {
  check_pair(u1, p1, tol);
  const auto id = ComplexMatrix::Identity(p1.rows(), p1.cols());
  Subspace range = span(id - p1, tol);
  PivotalFrame f;
  f.basis = range.basis();
  f.t1 = f.basis.adjoint() * u1 * f.basis;
  return f;
}

ComplexMatrix pivotal_operator(const ComplexMatrix& u1, const ComplexMatrix& p1,
                               const Tolerances& tol) {
  return pivotal_frame(u1, p1, tol).t1;
}

Subspace q_min(const ComplexMatrix& u1, const ComplexMatrix& u2,
               const ComplexMatrix& p1, const Tolerances& tol,
               const std::optional<ComplexMatrix>& seed_projection) {
  check_commuting(u1, u2, tol);
  PivotalFrame f = pivotal_frame(u1, p1, tol);
  const ComplexMatrix& pseed = seed_projection ? *seed_projection : p1;
  ComplexMatrix seed = f.basis.adjoint() * u2.adjoint() * pseed;
  return invariant_closure(f.t1, span(seed, tol), tol);
}

namespace {

// Largest T-invariant subspace inside container via the preimage fixpoint
// S <- S  cap  T^{-1} S. Independent of the complement-closure route.
Subspace largest_invariant_fixpoint(const ComplexMatrix& t,
                                    const Subspace& container,
                                    const Tolerances& tol) {
  Subspace s = container;
  for (Eigen::Index it = 0; it <= t.rows(); ++it) {
    const auto id = ComplexMatrix::Identity(t.rows(), t.cols());
    // preimage of s under t: nullspace of (I - proj_s) t
    Subspace pre = nullspace((id - s.projector()) * t, tol);
    Subspace next = subspace_intersect(s, pre, tol);
    if (next.dim() == s.dim()) return next;
    s = std::move(next);
  }
  return s;
}

} // namespace

Subspace q_max(const ComplexMatrix& u1, const ComplexMatrix& u2,
               const ComplexMatrix& p1, const Tolerances& tol) {
  check_commuting(u1, u2, tol);
  PivotalFrame f = pivotal_frame(u1, p1, tol);
  const ComplexMatrix u = u1 * u2;
  ComplexMatrix forbidden_seed = f.basis.adjoint() * u.adjoint() * p1;
  Subspace container = subspace_complement(span(forbidden_seed, tol), tol);

  Subspace direct = largest_invariant_fixpoint(f.t1, container, tol);
  // complement formula: P1perp E ominus closure of T1^{*k} seed
  Subspace dual = subspace_complement(
      invariant_closure(f.t1.adjoint(), span(forbidden_seed, tol), tol), tol);

  if (!subspace_equal(direct, dual, tol))
    throw InternalError("q_max: fixpoint and complement formulas disagree");
  return dual;
}

ExistsP2Result exists_p2(const ComplexMatrix& u1, const ComplexMatrix& u2,
                         const ComplexMatrix& p1, const Tolerances& tol) {
  ExistsP2Result r;
  r.q_min_space = q_min(u1, u2, p1, tol);
  r.q_max_space = q_max(u1, u2, p1, tol);
  r.exists = subspace_contains(r.q_min_space, r.q_max_space, tol);
  if (!r.exists) {
    // deterministic witness: q_min basis vector furthest outside q_max
    const ComplexMatrix proj = r.q_max_space.projector();
    double best = -1.0;
    for (Eigen::Index j = 0; j < r.q_min_space.dim(); ++j) {
      ComplexVector v = r.q_min_space.basis().col(j);
      const double escape = (v - proj * v).norm();
      if (escape > best) {
        best = escape;
        r.witness = v;
      }
    }
  }
  return r;
}

P2ConditionsReport check_p2_conditions(const ComplexMatrix& u1,
                                       const ComplexMatrix& u2,
                                       const ComplexMatrix& p1,
                                       const ComplexMatrix& p2,
                                       const Tolerances& tol) {
  check_commuting(u1, u2, tol);
  check_pair(u1, p1, tol);
  const ComplexMatrix q1m = u1.adjoint() * p2 * u1;
  if (!is_projection(q1m, tol))
    throw PreconditionError("check_p2_conditions: U1^H P2 U1 is not a projection");
  const ComplexMatrix q2m = u2.adjoint() * p1 * u2;
  const ComplexMatrix u = u1 * u2;
  const auto id = ComplexMatrix::Identity(p1.rows(), p1.cols());
  PivotalFrame f = pivotal_frame(u1, p1, tol);

  P2ConditionsReport rep;
  Subspace p1_range = span(p1, tol);
  Subspace q1_range = span(q1m, tol);
  Subspace sum_range = subspace_sum(p1_range, q1_range, tol);
  Subspace q1_coords = span(f.basis.adjoint() * q1m, tol);

  rep.p2_below_sum = subspace_contains(span(p2, tol), sum_range, tol);
  rep.q1_invariant = subspace_contains(
      span(f.t1 * q1_coords.basis(), tol), q1_coords, tol);

  rep.q2_below_sum = subspace_contains(span(q2m, tol), sum_range, tol);
  rep.seed_contained = subspace_contains(
      span(f.basis.adjoint() * u2.adjoint() * p1, tol), q1_coords, tol);

  rep.p2q2_zero = frob(p2 * q2m) <= tol.tol_eq;
  rep.q1_in_target =
      subspace_contains(q1_range, span(u.adjoint() * (id - p1), tol), tol);

  ComplexMatrix pw = id;
  const ComplexMatrix step = (id - p1) * u1;
  for (Eigen::Index k = 0; k <= p1.rows(); ++k) {
    const double v = frob(p1 * u * pw * (id - p1) * u2.adjoint() * p1);
    rep.vanishing_products.push_back(v);
    rep.max_vanishing_product = std::max(rep.max_vanishing_product, v);
    pw = step * pw;
  }
  return rep;
}

ModelTuple build_3isometry(const ComplexMatrix& u1, const ComplexMatrix& u2,
                           const ComplexMatrix& p1, const Subspace& q1,
                           const Tolerances& tol) {
  check_commuting(u1, u2, tol);
  PivotalFrame f = pivotal_frame(u1, p1, tol);
  if (q1.ambient_dim() != f.basis.cols())
    throw DimensionError("build_3isometry: Q1 must live in P1-perp coordinates");

  ExistsP2Result ex = exists_p2(u1, u2, p1, tol);
  if (!subspace_contains(ex.q_min_space, q1, tol) ||
      !subspace_contains(q1, ex.q_max_space, tol))
    throw PreconditionError("build_3isometry: Q1 violates the q_min/q_max sandwich");
  if (!subspace_contains(span(f.t1 * q1.basis(), tol), q1, tol))
    throw PreconditionError("build_3isometry: Q1 is not T1-invariant");

  const ComplexMatrix q1_ambient = f.basis * q1.basis();
  const ComplexMatrix p2 =
      u1 * (q1_ambient * q1_ambient.adjoint()) * u1.adjoint();

  // finite-dimensional equality of the two balance projections
  const ComplexMatrix lhs = p2 + u2.adjoint() * p1 * u2;
  const ComplexMatrix rhs = p1 + u1.adjoint() * p2 * u1;
  if (frob(lhs - rhs) > tol.tol_eq)
    throw InternalError("build_3isometry: balance projections differ");
  if (!is_projection(lhs, tol))
    throw InternalError("build_3isometry: balance sum is not a projection");
  const Eigen::Index expected_rank =
      span(p1, tol).dim() + span(p2, tol).dim();
  if (span(lhs, tol).dim() != expected_rank)
    throw InternalError("build_3isometry: balance projection rank mismatch");

  return complete_tuple({{u1, p1}, {u2, p2}}, tol);
}

WIsometryResult w_isometry(const ComplexMatrix& u1, const ComplexMatrix& u2,
                           const ComplexMatrix& p1, const Tolerances& tol) {
  ExistsP2Result ex = exists_p2(u1, u2, p1, tol);
  if (!ex.exists)
    throw PreconditionError("w_isometry: q_min is not contained in q_max");
  PivotalFrame f = pivotal_frame(u1, p1, tol);

  Subspace p1_range = span(p1, tol);
  const Eigen::Index k1 = p1_range.dim();
  const Eigen::Index k2 = ex.q_max_space.dim();
  ComplexMatrix space(p1.rows(), k1 + k2);
  space << p1_range.basis(), f.basis * ex.q_max_space.basis();

  ComplexMatrix image(p1.rows(), k1 + k2);
  image.leftCols(k1) = u2.adjoint() * space.leftCols(k1);
  image.rightCols(k2) = u1 * space.rightCols(k2);

  WIsometryResult r;
  r.space_basis = space;
  const ComplexMatrix proj = space * space.adjoint();
  const double escape = frob(image - proj * image);
  if (escape > tol.tol_orth)
    throw InternalError("w_isometry: image escapes P1 E + q_max");
  r.matrix = space.adjoint() * image;
  r.isometry_residual =
      frob(r.matrix.adjoint() * r.matrix -
           ComplexMatrix::Identity(k1 + k2, k1 + k2));
  r.unitary = k1 + k2 == 0 || is_unitary(r.matrix, tol);
  return r;
}

LatticeResult p2_lattice(const ComplexMatrix& u1, const ComplexMatrix& u2,
                         const ComplexMatrix& p1, const Tolerances& tol) {
  ExistsP2Result ex = exists_p2(u1, u2, p1, tol);
  if (!ex.exists)
    throw PreconditionError("p2_lattice: q_min is not contained in q_max");
  PivotalFrame f = pivotal_frame(u1, p1, tol);

  LatticeResult out;
  Subspace gap = subspace_minus(ex.q_max_space, ex.q_min_space, tol);
  const Eigen::Index g = gap.dim();

  std::vector<Subspace> admissible;
  if (g == 0) {
    admissible.push_back(ex.q_min_space);
  } else {
    if (g > 12) {
      out.reason = "not enumerable: gap dimension too large";
      return out;
    }
    const ComplexMatrix comp =
        gap.basis().adjoint() * f.t1 * gap.basis();
    Eigen::ComplexEigenSolver<ComplexMatrix> es(comp);
    if (es.info() != Eigen::Success) {
      out.reason = "not enumerable: eigensolver failure";
      return out;
    }
    // require distinct eigenvalues and an invertible eigenvector matrix
    for (Eigen::Index i = 0; i < g; ++i)
      for (Eigen::Index j = i + 1; j < g; ++j)
        if (std::abs(es.eigenvalues()(i) - es.eigenvalues()(j)) < 1e-8) {
          out.reason = "not enumerable: repeated eigenvalues in the gap compression";
          return out;
        }
    Eigen::JacobiSVD<ComplexMatrix> svd(es.eigenvectors());
    if (svd.singularValues()(g - 1) < 1e-8) {
      out.reason = "not enumerable: gap compression not diagonalizable";
      return out;
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << g); ++mask) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index i = 0; i < g; ++i)
        if (mask & (std::uint64_t(1) << i)) idx.push_back(i);
      ComplexMatrix sel(g, static_cast<Eigen::Index>(idx.size()));
      for (std::size_t c = 0; c < idx.size(); ++c)
        sel.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(idx[c]);
      Subspace lifted = subspace_sum(
          ex.q_min_space, span(gap.basis() * sel, tol), tol);
      if (subspace_contains(span(f.t1 * lifted.basis(), tol), lifted, tol))
        admissible.push_back(lifted);
    }
  }

  // Thm 2.8(2): W restricted to P1 E + Q1 must be unitary (automatic in
  // finite dimensions; asserted per admissible Q1).
  Subspace p1_range = span(p1, tol);
  out.all_w_unitary = true;
  for (const auto& q1 : admissible) {
    const Eigen::Index k1 = p1_range.dim();
    const Eigen::Index k2 = q1.dim();
    ComplexMatrix space(p1.rows(), k1 + k2);
    space << p1_range.basis(), f.basis * q1.basis();
    ComplexMatrix image(p1.rows(), k1 + k2);
    image.leftCols(k1) = u2.adjoint() * space.leftCols(k1);
    image.rightCols(k2) = u1 * space.rightCols(k2);
    ComplexMatrix w = space.adjoint() * image;
    const double escape = frob(image - space * space.adjoint() * image);
    if (escape > tol.tol_orth || (k1 + k2 > 0 && !is_unitary(w, tol)))
      out.all_w_unitary = false;
  }

  // lattice closure under meet and join
  out.meet_join_closed = true;
  auto member = [&](const Subspace& s) {
    for (const auto& a : admissible)
      if (subspace_equal(a, s, tol)) return true;
    return false;
  };
  for (std::size_t i = 0; i < admissible.size(); ++i)
    for (std::size_t j = i + 1; j < admissible.size(); ++j) {
      if (!member(subspace_intersect(admissible[i], admissible[j], tol)) ||
          !member(subspace_sum(admissible[i], admissible[j], tol)))
        out.meet_join_closed = false;
    }

  out.enumerable = true;
  out.admissible = std::move(admissible);
  return out;
}

} // namespace miso
