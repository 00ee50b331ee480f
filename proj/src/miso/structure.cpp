#include "structure.hpp"

#include <Eigen/Eigenvalues>

namespace miso {

void ModelTriple::check_well_formed(const Tolerances& tol) const {
  if (U.rows() != dim_E || U.cols() != dim_E || P.rows() != dim_E ||
      P.cols() != dim_E)
    throw DimensionError("model triple: dimension mismatch");
  if (!is_unitary(U, tol))
    throw PreconditionError("model triple: U is not unitary");
  if (!is_projection(P, tol))
    throw PreconditionError("model triple: P is not a projection");
}

ModelTuple ModelTriple::as_tuple() const {
  const auto id = ComplexMatrix::Identity(dim_E, dim_E);
  ModelTuple t;
  t.dim_E = dim_E;
  t.pairs.push_back({U, P});
  t.pairs.push_back({U.adjoint(), U * (id - P) * U.adjoint()});
  return t;
}

ContractionData defect(const ComplexMatrix& t, const Tolerances& tol) {
  if (t.rows() != t.cols()) throw DimensionError("defect: T must be square");
  if (t.rows() == 0) {
    ContractionData cd;
    cd.T = t;
    cd.D_T = t;
    cd.D_Tstar = t;
    cd.defect_space = Subspace::zero(0);
    cd.defect_space_star = Subspace::zero(0);
    return cd;
  }
  const double norm = op_norm(t);
  if (norm > 1.0 + tol.tol_eq)
    throw PreconditionError("defect: not a contraction, ||T|| = " +
                            std::to_string(norm));
  const auto id = ComplexMatrix::Identity(t.rows(), t.cols());

  // principal square root; eigenvalues at roundoff scale are clamped to
  // zero so defect ranks match the geometric ranks (operand norm <= 1)
  auto psd_sqrt = [&](const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      ev(i) = ev(i) > tol.tol_rank ? std::sqrt(ev(i)) : 0.0;
    return ComplexMatrix(es.eigenvectors() * ev.asDiagonal() *
                         es.eigenvectors().adjoint());
  };

  ContractionData cd;
  cd.T = t;
  cd.D_T = psd_sqrt(id - t.adjoint() * t);
  cd.D_Tstar = psd_sqrt(id - t * t.adjoint());
  cd.defect_space = span(cd.D_T, tol);
  cd.defect_space_star = span(cd.D_Tstar, tol);
  return cd;
}

ComplexMatrix julia_halmos(const ComplexMatrix& t, const Tolerances& tol) {
  ContractionData cd = defect(t, tol);
  const Eigen::Index f = t.rows();
  const Eigen::Index q = cd.defect_space.dim();
  const Eigen::Index qs = cd.defect_space_star.dim();
  if (q != qs)
    throw InternalError("julia_halmos: defect dimensions differ");
  const ComplexMatrix& bs = cd.defect_space.basis();
  const ComplexMatrix& bst = cd.defect_space_star.basis();

  ComplexMatrix j(f + q, f + q);
  j.topLeftCorner(f, f) = t;
  j.topRightCorner(f, q) = cd.D_Tstar * bst;
  j.bottomLeftCorner(q, f) = bs.adjoint() * cd.D_T;
  j.bottomRightCorner(q, q) = -bs.adjoint() * t.adjoint() * bst;
  if (f + q > 0 && !is_unitary(j, tol))
    throw InternalError("julia_halmos: completion is not unitary");
  return j;
}

ModelTriple triple_from_TZ(Eigen::Index f_dim, Eigen::Index fp_dim,
                           const ComplexMatrix& t, const ComplexMatrix& z,
                           const Tolerances& tol) {
  if (t.rows() != f_dim || t.cols() != f_dim)
    throw DimensionError("triple_from_TZ: T must be f_dim x f_dim");
  ContractionData cd = defect(t, tol);
  const Eigen::Index q = cd.defect_space.dim();
  if (cd.defect_space_star.dim() != q)
    throw InternalError("triple_from_TZ: defect dimensions differ");
  if (z.rows() != q + fp_dim || z.cols() != q + fp_dim)
    throw DimensionError("triple_from_TZ: Z must be (q + fp_dim) square");
  if (q + fp_dim > 0 && !is_unitary(z, tol))
    throw PreconditionError("triple_from_TZ: Z is not unitary");

  const Eigen::Index d = f_dim + q + fp_dim;
  const ComplexMatrix& bs = cd.defect_space.basis();
  const ComplexMatrix& bst = cd.defect_space_star.basis();

  // W1 : F + D_T* + F' -> F + D_T + F'
  ComplexMatrix w1 = ComplexMatrix::Zero(d, d);
  w1.block(0, 0, f_dim, f_dim) = t;
  w1.block(0, f_dim, f_dim, q) = cd.D_Tstar * bst;
  w1.block(f_dim, 0, q, f_dim) = bs.adjoint() * cd.D_T;
  w1.block(f_dim, f_dim, q, q) = -bs.adjoint() * t.adjoint() * bst;
  w1.block(f_dim + q, f_dim + q, fp_dim, fp_dim) =
      ComplexMatrix::Identity(fp_dim, fp_dim);

  // W2 : F + D_T + F' -> F + D_T* + F'
  ComplexMatrix w2 = ComplexMatrix::Zero(d, d);
  w2.block(0, 0, f_dim, f_dim) = ComplexMatrix::Identity(f_dim, f_dim);
  w2.block(f_dim, f_dim, q + fp_dim, q + fp_dim) = z;

  ModelTriple triple;
  triple.dim_E = d;
  triple.U = w1 * w2;
  triple.P = ComplexMatrix::Zero(d, d);
  triple.P.block(f_dim, f_dim, q + fp_dim, q + fp_dim) =
      ComplexMatrix::Identity(q + fp_dim, fp_dim + q);
  triple.check_well_formed(tol);
  return triple;
}

namespace {

ComplexMatrix pinv(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0)
    return ComplexMatrix::Zero(m.cols(), m.rows());
  return m.completeOrthogonalDecomposition().pseudoInverse();
}

} // namespace

TZData extract_TZ(const ModelTriple& triple, const Tolerances& tol) {
  triple.check_well_formed(tol);
  const Eigen::Index d = triple.dim_E;
  const auto id = ComplexMatrix::Identity(d, d);

  Subspace f_space = span(id - triple.P, tol);
  const ComplexMatrix& bf = f_space.basis();
  const Eigen::Index f_dim = f_space.dim();
  ComplexMatrix t = bf.adjoint() * triple.U * bf;

  Subspace f_or_uf = subspace_sum(f_space, span(triple.U * bf, tol), tol);
  Subspace dspace = subspace_minus(f_or_uf, f_space, tol);
  Subspace fprime = subspace_complement(f_or_uf, tol);
  Subspace f_or_usf =
      subspace_sum(f_space, span(triple.U.adjoint() * bf, tol), tol);
  Subspace dspace_star = subspace_minus(f_or_usf, f_space, tol);

  ContractionData cd = defect(t, tol);
  const Eigen::Index q = cd.defect_space.dim();
  const Eigen::Index fp_dim = fprime.dim();
  if (dspace.dim() != q || dspace_star.dim() != q)
    throw InternalError("extract_TZ: geometric and defect dimensions disagree");

  const ComplexMatrix& dst = cd.defect_space.basis();       // F x q
  const ComplexMatrix& dsts = cd.defect_space_star.basis(); // F x q

  // W identified on the D_T range: W (D_T f) = P_D U f; least squares,
  // the residual is the extraction health metric.
  ComplexMatrix w_lhs = dst.adjoint() * cd.D_T;                       // q x F
  ComplexMatrix w_rhs = dspace.basis().adjoint() * triple.U * bf;     // q x F
  ComplexMatrix w = w_rhs * pinv(w_lhs);
  double resid = frob(w * w_lhs - w_rhs);

  ComplexMatrix ws_lhs = dsts.adjoint() * cd.D_Tstar;
  ComplexMatrix ws_rhs =
      dspace_star.basis().adjoint() * triple.U.adjoint() * bf;
  ComplexMatrix ws = ws_rhs * pinv(ws_lhs);
  resid = std::max(resid, frob(ws * ws_lhs - ws_rhs));

  // Omega : F + D_T + F' -> E and Omega' : F + D_T* + F' -> E
  ComplexMatrix omega(d, f_dim + q + fp_dim);
  omega << bf, dspace.basis() * w, fprime.basis();
  ComplexMatrix omega_p(d, f_dim + q + fp_dim);
  omega_p << bf, dspace_star.basis() * ws, triple.U.adjoint() * fprime.basis();

  ComplexMatrix g = omega_p.adjoint() * omega;
  resid = std::max(
      resid, frob(g.topLeftCorner(f_dim, f_dim) -
                  ComplexMatrix::Identity(f_dim, f_dim)));
  resid = std::max(resid, frob(g.topRightCorner(f_dim, q + fp_dim)));
  resid = std::max(resid, frob(g.bottomLeftCorner(q + fp_dim, f_dim)));
  if (resid > tol.tol_orth)
    throw InternalError(
        "extract_TZ: identification residual " + std::to_string(resid) +
        " exceeds tolerance (near-degenerate defect ranges)");

  TZData out;
  out.f_dim = f_dim;
  out.fp_dim = fp_dim;
  out.T = std::move(t);
  out.Z = g.bottomRightCorner(q + fp_dim, q + fp_dim);
  out.identification_residual = resid;
  return out;
}

ComplexMatrix pivotal_from_bi_isometry(const ModelTriple& triple,
                                       Eigen::Index n_blocks,
                                       const Tolerances& tol) {
  if (n_blocks < 3)
    throw PreconditionError("pivotal_from_bi_isometry: N must be >= 3");
  triple.check_well_formed(tol);
  const Eigen::Index d = triple.dim_E;
  const auto id = ComplexMatrix::Identity(d, d);
  ModelTuple pair = triple.as_tuple();

  LinearSymbol v1 = symbol_of_model(pair.pairs[0].U, pair.pairs[0].P, tol);
  LinearSymbol v2 = symbol_of_model(pair.pairs[1].U, pair.pairs[1].P, tol);
  ComplexMatrix t1 = truncate(v1, n_blocks).matrix;
  Subspace kern = kernel_of_adjoint(v2, n_blocks, tol);

  Subspace f_space = span(id - triple.P, tol);
  const Eigen::Index f_dim = f_space.dim();
  if (kern.dim() != f_dim)
    throw InternalError("pivotal_from_bi_isometry: kernel dimension " +
                        std::to_string(kern.dim()) + " != dim F " +
                        std::to_string(f_dim));

  ComplexMatrix t_rec = kern.basis().adjoint() * t1 * kern.basis();

  // kernel = F embedded in the degree-0 block; rotate back to the
  // extraction basis so the result literally equals extract_TZ's T.
  ComplexMatrix embed = ComplexMatrix::Zero(d * n_blocks, f_dim);
  embed.topRows(d) = f_space.basis();
  ComplexMatrix rot = kern.basis().adjoint() * embed; // f_dim x f_dim
  if (f_dim > 0 && !is_unitary(rot, tol))
    throw InternalError(
        "pivotal_from_bi_isometry: kernel is not the embedded F");
  return rot.adjoint() * t_rec * rot;
}

ContractionParts contraction_parts(const ComplexMatrix& t,
                                   const Tolerances& tol) {
  ContractionData cd = defect(t, tol); // also validates contraction
  const Eigen::Index d = t.rows();
  const auto id = ComplexMatrix::Identity(d, d);

  Subspace fu = Subspace::full(d);
  ComplexMatrix pw = id;
  for (Eigen::Index k = 1; k <= d; ++k) {
    pw = pw * t;
    fu = subspace_intersect(fu, nullspace(id - pw.adjoint() * pw, tol), tol);
    fu = subspace_intersect(fu, nullspace(id - pw * pw.adjoint(), tol), tol);
  }
  Subspace fc = subspace_complement(fu, tol);

  ContractionParts parts;
  parts.unitary_space = fu;
  parts.cnu_space = fc;
  parts.T_u = fu.basis().adjoint() * t * fu.basis();
  parts.T_cnu = fc.basis().adjoint() * t * fc.basis();
  parts.reducing_residual =
      std::max(frob(fc.basis().adjoint() * t * fu.basis()),
               frob(fu.basis().adjoint() * t * fc.basis()));
  if (fu.dim() > 0 && !is_unitary(parts.T_u, tol))
    throw InternalError("contraction_parts: unitary part is not unitary");
  return parts;
}

bool is_c_dot_zero(const ComplexMatrix& t, double tol_spec) {
  if (t.rows() != t.cols())
    throw DimensionError("is_c_dot_zero: T must be square");
  if (t.rows() == 0) return true;
  Eigen::ComplexEigenSolver<ComplexMatrix> es(t, false);
  double radius = 0.0;
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    radius = std::max(radius, std::abs(es.eigenvalues()(i)));
  return radius < 1.0 - tol_spec;
}

WoldReductionReport wold_reduction_check(const ModelTriple& triple,
                                         Eigen::Index n_blocks,
                                         const Tolerances& tol) {
  TZData tz = extract_TZ(triple, tol);
  ContractionParts parts = contraction_parts(tz.T, tol);

  WoldReductionReport rep;
  rep.hypothesis_met = is_c_dot_zero(parts.T_cnu);
  if (!rep.hypothesis_met) return rep;

  const Eigen::Index d = triple.dim_E;
  const auto id = ComplexMatrix::Identity(d, d);
  Subspace f_space = span(id - triple.P, tol);
  const ComplexMatrix fu_amb = f_space.basis() * parts.unitary_space.basis();
  const ComplexMatrix fc_amb = f_space.basis() * parts.cnu_space.basis();
  const Eigen::Index fu = fu_amb.cols();

  // window basis of H^2(F_u): each degree block carries a copy of F_u
  ComplexMatrix window = ComplexMatrix::Zero(d * n_blocks, fu * n_blocks);
  for (Eigen::Index k = 0; k < n_blocks; ++k)
    window.block(k * d, k * fu, d, fu) = fu_amb;

  ModelTuple pair = triple.as_tuple();
  ComplexMatrix v1 =
      truncate(symbol_of_model(pair.pairs[0].U, pair.pairs[0].P, tol), n_blocks)
          .matrix;
  ComplexMatrix v2 =
      truncate(symbol_of_model(pair.pairs[1].U, pair.pairs[1].P, tol), n_blocks)
          .matrix;

  // (i) invariance under V1, V2 and adjoints on the exactness window
  // (input degrees < N-1)
  const ComplexMatrix low = window.leftCols(fu * (n_blocks - 1));
  const ComplexMatrix proj =
      ComplexMatrix::Identity(d * n_blocks, d * n_blocks) -
      window * window.adjoint();
  for (const ComplexMatrix* op : {&v1, &v2}) {
    rep.invariance_residual =
        std::max(rep.invariance_residual, frob(proj * (*op * low)));
    rep.invariance_residual =
        std::max(rep.invariance_residual, frob(proj * (op->adjoint() * low)));
  }

  // (ii) V1 acts as the constant multiplier T_u on every degree block
  for (Eigen::Index k = 0; k < n_blocks; ++k) {
    ComplexMatrix block = window.middleCols(k * fu, fu);
    rep.constant_multiplier_residual =
        std::max(rep.constant_multiplier_residual,
                 frob(v1 * block - block * parts.T_u));
  }

  // (iii) F ominus F_u orthogonal to the unitary-part window
  if (fc_amb.cols() > 0 && fu > 0)
    rep.orthogonality_residual = frob(fc_amb.adjoint() * window.leftCols(fu));

  rep.pass = rep.invariance_residual <= 1e-8 &&
             rep.constant_multiplier_residual <= 1e-8 &&
             rep.orthogonality_residual <= 1e-8;
  return rep;
}

void Nonet::check_invariants(const Tolerances& tol) const {
  ContractionData cd = defect(T, tol);
  ContractionData cdp = defect(Tp, tol);
  const Eigen::Index q = cd.defect_space.dim();
  if (R.ambient_dim() != q || R_star.ambient_dim() != q)
    throw DimensionError("nonet: R/R_star must live in defect coordinates");
  if (X.rows() != q || X.cols() != fp_dim || X_star.rows() != q ||
      X_star.cols() != fp_dim || Y.rows() != q || Y.cols() != q)
    throw DimensionError("nonet: X/X_star/Y dimensions");
  const auto iq = ComplexMatrix::Identity(q, q);

  double res = frob(X.adjoint() * X - cdp.defect_space.projector());
  res = std::max(res, frob(X * X.adjoint() - (iq - R_star.projector())));
  res = std::max(res,
                 frob(X_star.adjoint() * X_star -
                      cdp.defect_space_star.projector()));
  res = std::max(res, frob(X_star * X_star.adjoint() - (iq - R.projector())));
  res = std::max(res, frob(Y.adjoint() * Y - R.projector()));
  res = std::max(res, frob(Y * Y.adjoint() - R_star.projector()));
  if (res > tol.tol_orth)
    throw PreconditionError("nonet: gluing maps are not the stated partial "
                            "isometries, residual " +
                            std::to_string(res));
}

bool nonet_feasible(const ComplexMatrix& t, const ComplexMatrix& tp,
                    const Tolerances& tol) {
  ContractionData cd = defect(t, tol);
  ContractionData cdp = defect(tp, tol);
  const Eigen::Index q = cd.defect_space.dim();
  const Eigen::Index qs = cd.defect_space_star.dim();
  const Eigen::Index qp = cdp.defect_space.dim();
  const Eigen::Index qps = cdp.defect_space_star.dim();
  return qp <= qs && qps <= q && q + qp == qs + qps;
}

std::pair<ComplexMatrix, ModelTriple> nonet_build(const Nonet& nonet,
                                                  const Tolerances& tol) {
  nonet.check_invariants(tol);
  if (!nonet_feasible(nonet.T, nonet.Tp, tol))
    throw PreconditionError("nonet_build: contractions are not nonet-feasible");
  ContractionData cdp = defect(nonet.Tp, tol);
  const Eigen::Index q = nonet.R.ambient_dim();
  const Eigen::Index fp = nonet.fp_dim;

  ComplexMatrix z(q + fp, q + fp);
  z.topLeftCorner(q, q) =
      nonet.Y - nonet.X * nonet.Tp.adjoint() * nonet.X_star.adjoint();
  z.topRightCorner(q, fp) = nonet.X * cdp.D_T;
  z.bottomLeftCorner(fp, q) = cdp.D_Tstar * nonet.X_star.adjoint();
  z.bottomRightCorner(fp, fp) = nonet.Tp;
  if (q + fp > 0 && !is_unitary(z, tol))
    throw InternalError("nonet_build: assembled Z is not unitary");

  return {z, triple_from_TZ(nonet.f_dim, fp, nonet.T, z, tol)};
}

Nonet nonet_extract(const ComplexMatrix& z, Eigen::Index fp_dim,
                    const ComplexMatrix& t, const Tolerances& tol) {
  if (z.rows() != z.cols()) throw DimensionError("nonet_extract: Z not square");
  ContractionData cd = defect(t, tol);
  const Eigen::Index q = z.rows() - fp_dim;
  if (q != cd.defect_space.dim())
    throw DimensionError("nonet_extract: Z size inconsistent with dim D_T");
  if (z.rows() > 0 && !is_unitary(z, tol))
    throw PreconditionError("nonet_extract: Z is not unitary");

  Nonet out;
  out.f_dim = t.rows();
  out.fp_dim = fp_dim;
  out.T = t;
  out.Tp = z.bottomRightCorner(fp_dim, fp_dim);
  ContractionData cdp = defect(out.Tp, tol);

  const ComplexMatrix m = z.topRightCorner(q, fp_dim);          // X D_T'
  const ComplexMatrix ms = z.bottomLeftCorner(fp_dim, q).adjoint(); // X* D_T'*
  out.R_star = subspace_complement(span(m, tol), tol);
  out.R = subspace_complement(span(ms, tol), tol);

  out.X = m * pinv(cdp.D_T);
  out.X_star = ms * pinv(cdp.D_Tstar);
  out.Y = out.R_star.projector() * z.topLeftCorner(q, q) * out.R.projector();

  const double res = std::max(frob(out.X * cdp.D_T - m),
                              frob(out.X_star * cdp.D_Tstar - ms));
  if (res > tol.tol_orth)
    throw InternalError("nonet_extract: identification residual " +
                        std::to_string(res));
  out.check_invariants(tol);
  return out;
}

} // namespace miso
