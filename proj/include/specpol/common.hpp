#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace specpol {

// Assembly and the extended eigen-solver path run in long double; results are
// reported in double.
using Real = long double;
using Complex = std::complex<Real>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

using Point = std::complex<double>;

inline constexpr Real kPi = 3.141592653589793238462643383279502884L;

/// Invalid input: malformed symbol, bad perturbation, violated precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The numerical core failed (solver non-convergence, broken invariant).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace specpol
