#ifndef MISO_CLASSIFY_HPP
#define MISO_CLASSIFY_HPP

#include "hardy.hpp"
#include "model.hpp"

namespace miso {

/// Parameters of the rank-one 2-isometry normal form on C^2:
/// P1 = diag(0,1), U1 = [[c, d theta],[d, cbar theta]], d = sqrt(1-|c|^2).
struct Canonical2 {
  Complex c;
  Complex theta;

  void check(const Tolerances& tol = {}) const;
};

/// Parameters of the rank-one 3-isometry normal form on C^3.
struct Canonical3 {
  Complex alpha;
  Complex alpha1;
  Complex theta;
  Complex theta1;

  void check(const Tolerances& tol = {}) const;
};

/// Finite Blaschke product: constant * prod (z - a_k) / (1 - conj(a_k) z).
struct BlaschkeProduct {
  std::vector<Complex> zeros;
  Complex constant{1.0, 0.0};

  Eigen::Index degree() const {
    return static_cast<Eigen::Index>(zeros.size());
  }
  Complex eval(Complex z) const;
  void check(const Tolerances& tol = {}) const;
};

ModelTuple canonical2_build(const Canonical2& p, const Tolerances& tol = {});

/// Recovers (c, theta) from an irreducible dim-2 tuple with rank-one P1.
/// The residual diagonal-phase freedom is fixed by making the (2,1) entry
/// of U1 real positive.
Canonical2 canonical2_extract(const ModelTuple& t, const Tolerances& tol = {});

struct Canonical3Report {
  Complex alpha, beta, gamma, delta, epsilon, eta;
  Complex theta_recovered; // epsilon / conj(beta)
  double n_norm = 0.0, n_e2 = 0.0, n_e3 = 0.0;
  double moebius_residual = 0.0;   // U1 (I - abar U2) - theta (U2 - alpha)
  double validation_residual = 0.0;
  int candidates_tried = 0;
  bool irreducible = false;
  std::string relations;
};

/// Builds the 3-isometry of a parameter quadruple: U3 from the closed form,
/// U2 solved per-eigenvalue from U1 U2 U3 = I combined with
/// U1 = theta (U2 - alpha)(I - conj(alpha) U2)^{-1}; every accepted solution
/// is re-certified by validation and the vanishing of N.
ModelTuple canonical3_build(const Canonical3& p, Canonical3Report* report = nullptr,
                            const Tolerances& tol = {});

struct NormalityReport {
  Complex alpha, beta, gamma, delta, epsilon, eta;
  double n_norm = 0.0, n_e2 = 0.0, n_e3 = 0.0;
  bool n_vanishes = false;
  bool moduli_ok = false;    // |alpha| < 1 and |eta| < 1
  bool be_nonzero = false;   // beta epsilon != 0
};

/// N = (U1 - eta)(U2^H - conj(alpha)) - beta epsilon on a dim-3 tuple in
/// normal position (P1 = diag(0,0,1), U1^H P2 U1 = diag(0,1,0)); N != 0
/// forces reducibility.
std::pair<ComplexMatrix, NormalityReport> normality_obstruction(
    const ComplexMatrix& u1, const ComplexMatrix& u2, const ComplexMatrix& p1,
    const ComplexMatrix& p2, const Tolerances& tol = {});

/// First K Taylor coefficients of the product.
std::vector<Complex> blaschke_taylor(const BlaschkeProduct& b, Eigen::Index k);

/// Lower-triangular Toeplitz truncation of multiplication by b on scalar H^2.
TruncatedOperator phi_of_shift(const BlaschkeProduct& b, Eigen::Index n_blocks);

struct BlaschkeModelResult {
  ModelTuple tuple;
  double rho = 0.0;        // max |zero|
  double tol_model = 0.0;  // certified window error bound, exact when rho = 0
};

/// Builds the model of (S, phi_2(S), ..., phi_n(S)) by compressing the
/// truncations to the kernel of the adjoint of the product.
BlaschkeModelResult model_from_blaschke(const std::vector<BlaschkeProduct>& phis,
                                        Eigen::Index n_blocks,
                                        const Tolerances& tol = {});

struct PurityReport {
  std::vector<Eigen::Index> multiplicities; // rank P_j
  Eigen::Index product_multiplicity = 0;    // dim_E
  bool proper = false;
  bool irreducible = false;
  bool dim_bound_ok = false; // dim_E >= n whenever irreducible and proper
  bool low_multiplicity_case = false;   // dim_E <= 2n - 1
  bool multiplicity_one_present = false;
  std::vector<bool> factor_pure; // trivial unitary part in the window
};

PurityReport purity_and_multiplicity(const ModelTuple& t, Eigen::Index n_blocks,
                                     const Tolerances& tol = {});

struct NonblaschkeReport {
  double commutation_residual = 0.0;
  double isometry_residual = 0.0;
  double square_residual = 0.0;      // V1^2 - V2^2
  double zero_divisor_residual = 0.0; // (V1 - V2)(V1 + V2)
  double diff_norm = 0.0;
  double sum_norm = 0.0;
  Eigen::Index product_multiplicity = 0;
  bool pass = false;
};

/// The pair V1 = S + S, V2 = [[0, S^2],[I, 0]]: commuting isometries with
/// V1^2 = V2^2 that cannot lie in the commutant of one multiplicity-one shift.
NonblaschkeReport nonblaschke_example(Eigen::Index n_blocks,
                                      const Tolerances& tol = {});

} // namespace miso

#endif
