#pragma once

// Independent reference computations used by the tests. Nothing here calls
// the closed forms or solvers under test.

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "specpol/operators.hpp"

namespace oracle {

using Real = long double;
using Complex = std::complex<Real>;
using Poly = std::vector<Complex>;  // coefficient of z^k at index k

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
struct GaussLegendre {
  std::vector<Real> x;
  std::vector<Real> w;
  explicit GaussLegendre(int n);
  /// Composite rule: `panels` equal panels on [a, b].
  Complex integrate(const std::function<Complex(Real)>& f, Real a, Real b, int panels = 8) const;
};

/// (2 pi)^-1 * integral of m(x) exp(-ikx) over (-pi, pi], piece by piece.
Complex fourier_by_quadrature(const specpol::PiecewiseSymbol& m, std::int64_t k, const GaussLegendre& rule);

/// Integral of f * conj(g) over (-pi, pi], split at the symbol breakpoints.
Complex inner_by_quadrature(const specpol::PiecewiseSymbol& breaks, const std::function<Complex(Real)>& f,
                            const std::function<Complex(Real)>& g, const GaussLegendre& rule);

Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Complex poly_eval(const Poly& p, Complex z);

/// Leibniz expansion of det(z^2 I - 2 z A + B) for small d.
Poly pencil_determinant(const std::vector<std::vector<Complex>>& A, const std::vector<std::vector<Complex>>& B);

/// All roots of p (Aberth iteration, Newton polish), long double.
std::vector<Complex> poly_roots(const Poly& p);

/// Minimum over bijections of the maximum pairwise distance (brute force, small sets).
double matching_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b);

/// Real root of f on [lo, hi] by bisection, f(lo) and f(hi) of opposite sign.
Real bisect(const std::function<Real(Real)>& f, Real lo, Real hi);

/// Random Hermitian d x d matrix, entries in the unit square.
std::vector<std::vector<Complex>> random_hermitian(std::mt19937_64& rng, int d);

}  // namespace oracle
