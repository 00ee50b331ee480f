#ifndef MISO_TYPES_HPP
#define MISO_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace miso {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Tolerances used throughout: orthonormality residuals, rank cutoffs and
/// matrix-equality residuals.
struct Tolerances {
  double tol_orth = 1e-9;  // unitarity / projection residual
  double tol_rank = 1e-10; // relative singular-value cutoff
  double tol_eq = 1e-9;    // matrix equality residual

  void check() const {
    if (!(tol_orth > 0.0 && tol_rank > 0.0 && tol_eq > 0.0))
      throw std::invalid_argument("tolerances must be strictly positive");
  }
};

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched or invalid matrix dimensions.
struct DimensionError : Error {
  using Error::Error;
};

/// A stated precondition of an operation does not hold (residual reported
/// in the message).
struct PreconditionError : Error {
  using Error::Error;
};

/// Internal consistency failure: two routes to the same quantity disagree.
struct InternalError : Error {
  using Error::Error;
};

/// Malformed input (parsing, schema).
struct InputError : Error {
  using Error::Error;
};

inline bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

inline double frob(const ComplexMatrix& m) { return m.norm(); }

/// Operator (spectral) norm via SVD.
double op_norm(const ComplexMatrix& m);

} // namespace miso

#endif
