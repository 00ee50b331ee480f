#include "classify.hpp"

#include <array>
#include <limits>

#include <Eigen/Eigenvalues>

namespace miso {

void Canonical2::check(const Tolerances& tol) const {
  if (std::abs(c) >= 1.0 - tol.tol_eq)
    throw PreconditionError("canonical2: |c| must be < 1");
  if (std::abs(std::abs(theta) - 1.0) > tol.tol_eq)
    throw PreconditionError("canonical2: |theta| must be 1");
}

void Canonical3::check(const Tolerances& tol) const {
  if (std::abs(alpha) >= 1.0 - tol.tol_eq ||
      std::abs(alpha1) >= 1.0 - tol.tol_eq)
    throw PreconditionError("canonical3: |alpha|, |alpha1| must be < 1");
  if (std::abs(std::abs(theta) - 1.0) > tol.tol_eq ||
      std::abs(std::abs(theta1) - 1.0) > tol.tol_eq)
    throw PreconditionError("canonical3: |theta|, |theta1| must be 1");
}

Complex BlaschkeProduct::eval(Complex z) const {
  Complex v = constant;
  for (Complex a : zeros) v *= (z - a) / (1.0 - std::conj(a) * z);
  return v;
}

void BlaschkeProduct::check(const Tolerances& tol) const {
  if (zeros.empty())
    throw PreconditionError("blaschke: degree must be >= 1");
  for (Complex a : zeros)
    if (std::abs(a) >= 1.0 - tol.tol_eq)
      throw PreconditionError("blaschke: zeros must lie in the open disk");
  if (std::abs(std::abs(constant) - 1.0) > tol.tol_eq)
    throw PreconditionError("blaschke: constant must be unimodular");
}

ModelTuple canonical2_build(const Canonical2& p, const Tolerances& tol) {
  p.check(tol);
  const double d = std::sqrt(1.0 - std::norm(p.c));
  // second column is forced to be theta (-d, cbar) up to the sign
  // convention; with d in the (2,1) slot orthogonality puts the minus on
  // the (2,2) entry
  ComplexMatrix u1(2, 2);
  u1 << p.c, d * p.theta, d, -std::conj(p.c) * p.theta;
  ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  return complete_tuple({{u1, p1}}, tol);
}

Canonical2 canonical2_extract(const ModelTuple& t, const Tolerances& tol) {
  if (t.dim_E != 2 || t.n() != 2)
    throw PreconditionError("canonical2_extract: expects an n=2 tuple on C^2");
  t.check_well_formed(tol);
  const ComplexMatrix& p1 = t.pairs[0].P;
  if (span(p1, tol).dim() != 1)
    throw PreconditionError("canonical2_extract: rank P1 must be 1");
  if (commutant_dimension(t, tol) != 1)
    throw PreconditionError("canonical2_extract: tuple is reducible");

  // conjugate P1 to diag(0,1)
  ComplexMatrix v(2, 2);
  v.col(0) = nullspace(p1, tol).basis();
  v.col(1) = span(p1, tol).basis();
  ComplexMatrix u = v.adjoint() * t.pairs[0].U * v;

  Canonical2 out;
  out.c = u(0, 0);
  const double d = std::abs(u(1, 0));
  if (d <= tol.tol_eq)
    throw PreconditionError("canonical2_extract: |c| = 1, tuple degenerate");
  const Complex phase = u(1, 0) / d;
  // gauge: rotate the P1-range coordinate so the (2,1) entry is d > 0
  out.theta = phase * u(0, 1) / d;
  out.theta /= std::abs(out.theta);

  ModelTuple rebuilt = canonical2_build(out, tol);
  EquivalenceResult eq = equivalent(t, rebuilt, tol);
  if (eq.status != EquivalenceStatus::equivalent)
    throw InternalError("canonical2_extract: round-trip certification failed");
  return out;
}

std::pair<ComplexMatrix, NormalityReport> normality_obstruction(
    const ComplexMatrix& u1, const ComplexMatrix& u2, const ComplexMatrix& p1,
    const ComplexMatrix& p2, const Tolerances& tol) {
  if (u1.rows() != 3 || u2.rows() != 3 || p1.rows() != 3 || p2.rows() != 3)
    throw DimensionError("normality_obstruction: dimension 3 required");
  ComplexMatrix pos1 = ComplexMatrix::Zero(3, 3);
  pos1(2, 2) = 1.0;
  ComplexMatrix pos2 = ComplexMatrix::Zero(3, 3);
  pos2(1, 1) = 1.0;
  if (frob(p1 - pos1) > tol.tol_eq ||
      frob(u1.adjoint() * p2 * u1 - pos2) > tol.tol_eq)
    throw PreconditionError(
        "normality_obstruction: tuple not in normal position, conjugate "
        "P1 to diag(0,0,1) and U1^H P2 U1 to diag(0,1,0) first");

  NormalityReport rep;
  const ComplexMatrix u2s = u2.adjoint();
  rep.alpha = std::conj(u2s(2, 2));
  rep.beta = u2s(1, 2);
  const ComplexMatrix u12s = u1.adjoint() * u2s;
  rep.gamma = u12s(2, 2);
  rep.delta = u12s(0, 2);
  rep.epsilon = u1(2, 1);
  rep.eta = u1(1, 1);

  const auto id = ComplexMatrix::Identity(3, 3);
  ComplexMatrix n = (u1 - rep.eta * id) * (u2s - std::conj(rep.alpha) * id) -
                    rep.beta * rep.epsilon * id;
  rep.n_norm = frob(n);
  rep.n_e2 = n.col(1).norm();
  rep.n_e3 = n.col(2).norm();
  rep.n_vanishes = rep.n_norm <= tol.tol_eq;
  rep.moduli_ok = std::abs(rep.alpha) < 1.0 && std::abs(rep.eta) < 1.0;
  rep.be_nonzero = std::abs(rep.beta * rep.epsilon) > tol.tol_eq;
  return {n, rep};
}

ModelTuple canonical3_build(const Canonical3& p, Canonical3Report* report,
                            const Tolerances& tol) {
  p.check(tol);
  const double d = std::sqrt(1.0 - std::norm(p.alpha));
  const double d1 = std::sqrt(1.0 - std::norm(p.alpha1));
  const auto id = ComplexMatrix::Identity(3, 3);

  // The closed-form matrix is read as U2: its adjoint maps e3 into
  // span{e2, e3} with real positive e2-coefficient, exactly the normal
  // position the defining relations require. U1 then follows from the
  // Moebius relation, and U3 from the product identity.
  ComplexMatrix u2(3, 3);
  u2 << p.alpha1, p.theta1 * std::conj(p.alpha) * d1, -p.theta1 * d * d1,
      d1, -p.theta1 * std::conj(p.alpha * p.alpha1),
      p.theta1 * std::conj(p.alpha1) * d,
      0.0, d, p.alpha;
  if (!is_unitary(u2, tol))
    throw InternalError("canonical3_build: closed form is not unitary");

  ComplexMatrix u1 = p.theta * (u2 - p.alpha * id) *
                     (id - std::conj(p.alpha) * u2).inverse();
  const double moebius = frob(u1 * (id - std::conj(p.alpha) * u2) -
                              p.theta * (u2 - p.alpha * id));

  ComplexMatrix p1 = ComplexMatrix::Zero(3, 3);
  p1(2, 2) = 1.0;
  ComplexMatrix pos2 = ComplexMatrix::Zero(3, 3);
  pos2(1, 1) = 1.0;
  ComplexMatrix p2 = u1 * pos2 * u1.adjoint();

  ModelTuple tuple = complete_tuple({{u1, p1}, {u2, p2}}, tol);
  ValidationReport v = validate_model(tuple, tol);
  auto [n, nrep] = normality_obstruction(u1, u2, p1, p2, tol);
  if (!v.pass || !nrep.n_vanishes)
    throw PreconditionError(
        "canonical3_build: certification failed, validation " +
        std::to_string(std::max({v.commutation, v.product_identity, v.balance,
                                 v.resolution})) +
        ", ||N|| " + std::to_string(nrep.n_norm));
  if (report) {
    report->alpha = nrep.alpha;
    report->beta = nrep.beta;
    report->gamma = nrep.gamma;
    report->delta = nrep.delta;
    report->epsilon = nrep.epsilon;
    report->eta = nrep.eta;
    report->theta_recovered = std::abs(nrep.beta) > tol.tol_eq
                                  ? nrep.epsilon / std::conj(nrep.beta)
                                  : Complex(0, 0);
    report->n_norm = nrep.n_norm;
    report->n_e2 = nrep.n_e2;
    report->n_e3 = nrep.n_e3;
    report->moebius_residual = moebius;
    report->validation_residual =
        std::max({v.commutation, v.product_identity, v.balance,
                  v.balance_projection, v.resolution});
    report->candidates_tried = 1;
    report->irreducible = commutant_dimension(tuple, tol) == 1;
    report->relations =
        "closed-form U2; U1 = theta (U2 - alpha)(I - conj(alpha) U2)^{-1}; "
        "U3 = (U1 U2)^H; P2 = U1 diag(0,1,0) U1^H";
  }
  return tuple;
}

std::vector<Complex> blaschke_taylor(const BlaschkeProduct& b, Eigen::Index k) {
  if (k < 1) throw PreconditionError("blaschke_taylor: K must be >= 1");
  b.check();
  std::vector<Complex> c(static_cast<std::size_t>(k), Complex(0, 0));
  c[0] = b.constant;
  for (Complex a : b.zeros) {
    // factor (z - a)/(1 - conj(a) z): coefficients -a, then
    // (1 - |a|^2) conj(a)^{j-1}
    std::vector<Complex> f(static_cast<std::size_t>(k), Complex(0, 0));
    f[0] = -a;
    Complex pw(1.0, 0.0);
    for (std::size_t j = 1; j < f.size(); ++j) {
      f[j] = (1.0 - std::norm(a)) * pw;
      pw *= std::conj(a);
    }
    std::vector<Complex> next(static_cast<std::size_t>(k), Complex(0, 0));
    for (std::size_t i = 0; i < next.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) next[i] += c[j] * f[i - j];
    c = std::move(next);
  }
  return c;
}

TruncatedOperator phi_of_shift(const BlaschkeProduct& b, Eigen::Index n_blocks) {
  if (n_blocks < b.degree() + 2)
    throw PreconditionError("phi_of_shift: N must be >= degree + 2");
  std::vector<Complex> c = blaschke_taylor(b, n_blocks);
  PolySymbol s;
  s.reserve(c.size());
  for (Complex v : c) {
    ComplexMatrix m(1, 1);
    m(0, 0) = v;
    s.push_back(m);
  }
  return truncate(s, n_blocks);
}

BlaschkeModelResult model_from_blaschke(const std::vector<BlaschkeProduct>& phis,
                                        Eigen::Index n_blocks,
                                        const Tolerances& tol) {
  Eigen::Index m = 1;
  double rho = 0.0;
  for (const auto& b : phis) {
    b.check(tol);
    m += b.degree();
    for (Complex a : b.zeros) rho = std::max(rho, std::abs(a));
  }
  if (n_blocks < 4 * m)
    throw PreconditionError("model_from_blaschke: window N must be >= 4m");

  BlaschkeProduct shift;
  shift.zeros = {Complex(0, 0)};
  std::vector<ComplexMatrix> ops;
  ops.push_back(phi_of_shift(shift, n_blocks).matrix);
  for (const auto& b : phis) ops.push_back(phi_of_shift(b, n_blocks).matrix);

  ComplexMatrix prod = ComplexMatrix::Identity(n_blocks, n_blocks);
  for (const auto& op : ops) prod = prod * op;

  Subspace kern = nullspace(ComplexMatrix(prod.adjoint()), tol);
  if (kern.dim() != m)
    throw InternalError("model_from_blaschke: kernel dimension " +
                        std::to_string(kern.dim()) + ", expected " +
                        std::to_string(m) + " (window too small)");
  const ComplexMatrix& k = kern.basis();
  const ComplexMatrix vk = prod * k;

  BlaschkeModelResult out;
  out.rho = rho;
  out.tol_model =
      rho == 0.0
          ? 1e-12
          : 100.0 * static_cast<double>(m) *
                std::pow(rho, static_cast<double>(n_blocks - 2 * m));
  out.tuple.dim_E = m;
  for (const auto& op : ops) {
    ComplexMatrix a = k.adjoint() * op * k;
    ComplexMatrix b = vk.adjoint() * op * k;
    ComplexMatrix u = a + b;
    out.tuple.pairs.push_back({u, u.adjoint() * b});
  }
  return out;
}

PurityReport purity_and_multiplicity(const ModelTuple& t, Eigen::Index n_blocks,
                                     const Tolerances& tol) {
  t.check_well_formed(tol);
  PurityReport rep;
  rep.product_multiplicity = t.dim_E;
  rep.proper = true;
  for (const auto& pr : t.pairs) {
    rep.multiplicities.push_back(span(pr.P, tol).dim());
    // a factor is a constant multiple of the identity iff P_j = 0 and
    // U_j is scalar
    bool scalar = frob(pr.P) <= tol.tol_eq &&
                  frob(pr.U - pr.U(0, 0) *
                                   ComplexMatrix::Identity(t.dim_E, t.dim_E)) <=
                      tol.tol_eq;
    if (scalar) rep.proper = false;
    Subspace up = unitary_part_truncated({symbol_of_model(pr.U, pr.P, tol)},
                                         n_blocks, tol);
    rep.factor_pure.push_back(up.dim() == 0);
  }
  rep.irreducible = commutant_dimension(t, tol) == 1;
  rep.dim_bound_ok = !(rep.irreducible && rep.proper) || t.dim_E >= t.n();
  rep.low_multiplicity_case = t.dim_E <= 2 * t.n() - 1;
  for (Eigen::Index r : rep.multiplicities)
    if (r == 1) rep.multiplicity_one_present = true;
  return rep;
}

NonblaschkeReport nonblaschke_example(Eigen::Index n_blocks,
                                      const Tolerances& tol) {
  if (n_blocks < 4)
    throw PreconditionError("nonblaschke_example: N must be >= 4");
  const ComplexMatrix z2 = ComplexMatrix::Zero(2, 2);
  ComplexMatrix e21 = z2, e12 = z2;
  e21(1, 0) = 1.0;
  e12(0, 1) = 1.0;

  // V1 = z I, V2 = [[0, z^2],[1, 0]] as degree-2 symbols on C^2 blocks
  PolySymbol v1s{z2, ComplexMatrix::Identity(2, 2), z2};
  PolySymbol v2s{e21, z2, e12};
  ComplexMatrix v1 = truncate(v1s, n_blocks).matrix;
  ComplexMatrix v2 = truncate(v2s, n_blocks).matrix;

  NonblaschkeReport rep;
  rep.commutation_residual = frob(v1 * v2 - v2 * v1);
  const Eigen::Index win = 2 * (n_blocks - 2);
  ComplexMatrix gram = (v2.adjoint() * v2).topLeftCorner(win, win);
  rep.isometry_residual = frob(gram - ComplexMatrix::Identity(win, win));
  rep.square_residual = frob(v1 * v1 - v2 * v2);
  rep.zero_divisor_residual = frob((v1 - v2) * (v1 + v2));
  rep.diff_norm = op_norm(v1 - v2);
  rep.sum_norm = op_norm(v1 + v2);
  rep.product_multiplicity =
      nullspace(ComplexMatrix((v1 * v2).adjoint()), tol).dim();
  rep.pass = rep.commutation_residual < 1e-14 &&
             rep.isometry_residual < 1e-14 && rep.square_residual < 1e-14 &&
             rep.zero_divisor_residual < 1e-14 && rep.diff_norm > 0.9 &&
             rep.sum_norm > 0.9 && rep.product_multiplicity == 4;
  return rep;
}

} // namespace miso
