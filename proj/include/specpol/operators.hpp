#pragma once

// Model operators on L^2(-pi, pi): multiplication by a piecewise-constant
// symbol, optionally plus a rank-one term, compressed to the Fourier window
// span{phi_j : |j| <= cutoff}, phi_j(x) = exp(ijx)/sqrt(2 pi).

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specpol/common.hpp"

namespace specpol {

/// Rational multiple of pi, kept exact so that Fourier phases reduce without
/// rounding. Always normalized: den > 0, gcd(num, den) = 1.
class PiMultiple {
 public:
  constexpr PiMultiple() = default;
  PiMultiple(std::int64_t num, std::int64_t den = 1);

  /// Accepts "0", "pi", "-pi", "1/2 pi", "-15/16 pi", "3/4pi", "2 pi".
  static PiMultiple parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  Real radians() const { return kPi * static_cast<Real>(num_) / static_cast<Real>(den_); }
  /// The multiple itself, p/q.
  Real ratio() const { return static_cast<Real>(num_) / static_cast<Real>(den_); }

  std::string str() const;

  friend bool operator==(const PiMultiple&, const PiMultiple&) = default;
  friend bool operator<(const PiMultiple& a, const PiMultiple& b);
  friend bool operator<=(const PiMultiple& a, const PiMultiple& b) { return !(b < a); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

PiMultiple operator-(const PiMultiple& a, const PiMultiple& b);

/// exp(-i k x) for x = p/q pi, with the phase reduced exactly modulo 2 pi.
Complex unit_phase(std::int64_t k, const PiMultiple& x);

/// Finite union of half-open intervals (a, b] inside (-pi, pi].
class IntervalSet {
 public:
  using Interval = std::pair<PiMultiple, PiMultiple>;

  IntervalSet() = default;
  /// Sorts, validates -pi <= a < b <= pi and disjointness, merges touching
  /// intervals. Throws InvalidArgument on overlap or bad endpoints.
  explicit IntervalSet(std::vector<Interval> intervals);

  static IntervalSet full();

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }

  Real measure() const;
  Real complement_measure() const { return 2 * kPi - measure(); }
  IntervalSet complement() const;

 private:
  std::vector<Interval> intervals_;
};

/// Real piecewise-constant function on (-pi, pi].
class PiecewiseSymbol {
 public:
  struct Piece {
    PiMultiple lo;
    PiMultiple hi;
    Real value;
  };

  /// Pieces must partition (-pi, pi] once sorted. Adjacent pieces with equal
  /// values are merged.
  explicit PiecewiseSymbol(std::vector<Piece> pieces);

  static PiecewiseSymbol constant(Real value);
  /// `inside` on E, `outside` on its complement. The default is the +-1 model.
  static PiecewiseSymbol indicator(const IntervalSet& E, Real inside = 1, Real outside = -1);

  const std::vector<Piece>& pieces() const { return pieces_; }

  PiecewiseSymbol squared() const;
  template <class F>
  PiecewiseSymbol transformed(F&& f) const {
    std::vector<Piece> out = pieces_;
    for (auto& p : out) p.value = f(p.value);
    return PiecewiseSymbol(std::move(out));
  }

  Real min_value() const;
  Real max_value() const;
  /// Distinct values in ascending order.
  std::vector<Real> values() const;
  /// Pieces carrying `value`, as a set.
  IntervalSet level_set(Real value) const;
  /// Integral over (-pi, pi].
  Real integral() const;
  /// Whether all values lie in {-1, +1}.
  bool is_plus_minus_one() const;

 private:
  std::vector<Piece> pieces_;
};

/// (2 pi)^-1 * integral of symbol(x) exp(-ikx) dx, closed form.
Complex fourier_coefficient(const PiecewiseSymbol& symbol, std::int64_t k);
/// Coefficients for k = -kmax..kmax; entry k + kmax.
std::vector<Complex> fourier_coefficients(const PiecewiseSymbol& symbol, std::int64_t kmax);
/// Fourier coefficient of the indicator of E.
Complex fourier_coefficient(const IntervalSet& E, std::int64_t k);

/// K f = a <f, psi> psi with psi band-limited: psi = sum_{|j|<=K} c_j phi_j.
class RankOneTerm {
 public:
  /// coeffs has odd length 2K+1, entry j + K; must have unit l2 norm and a > 0.
  RankOneTerm(Real coupling, std::vector<Complex> coeffs);

  /// psi(x) = (2 pi)^(-1/2), i.e. psi = phi_0.
  static RankOneTerm constant(Real coupling);

  Real coupling() const { return coupling_; }
  std::int64_t band() const { return static_cast<std::int64_t>(coeffs_.size() / 2); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  bool is_constant() const { return coeffs_.size() == 1; }
  /// <psi, phi_j>; zero outside the band.
  Complex coefficient(std::int64_t j) const;

  /// integral over E of |psi|^2. For constant psi this is |E| / (2 pi).
  Real mass(const IntervalSet& E) const;

 private:
  Real coupling_;
  std::vector<Complex> coeffs_;
};

/// Compressions of M and M^2 in the orthonormal Fourier basis, indices
/// ordered -cutoff..cutoff.
struct MomentMatrices {
  std::int64_t cutoff = 0;
  ComplexMatrix A;
  ComplexMatrix B;
  std::string label;

  Eigen::Index dim() const { return A.rows(); }
  Eigen::Index index_of(std::int64_t j) const { return static_cast<Eigen::Index>(j + cutoff); }
};

struct MomentInvariants {
  double hermitian_defect_A = 0;  // max |A - A*| / max(1, |A|)
  double hermitian_defect_B = 0;
  double min_eig_B = 0;           // relative to |B|
  double min_eig_B_minus_A2 = 0;  // relative to |B|
  bool ok() const {
    return hermitian_defect_A <= 1e-12 && hermitian_defect_B <= 1e-12 && min_eig_B >= -1e-10 &&
           min_eig_B_minus_A2 >= -1e-10;
  }
};

MomentInvariants check_invariants(const MomentMatrices& m);

MomentMatrices assemble_multiplication(const PiecewiseSymbol& symbol, std::int64_t cutoff,
                                       std::string label = {});
MomentMatrices assemble_rank_one(const PiecewiseSymbol& base, const RankOneTerm& pert,
                                 std::int64_t cutoff, std::string label = {});

/// Fourier coefficients of m * psi for |j| <= cutoff (exact: finite convolution).
ComplexVector symbol_times_psi(const PiecewiseSymbol& symbol, const RankOneTerm& psi,
                               std::int64_t cutoff);

/// Isolated eigenvalues of M + K for a symbol taking at most two values:
/// real roots of  mu(E1)/(lambda - v1) + mu(E2)/(lambda - v2) = 1/a  with the
/// poles removed, sorted ascending.
std::vector<double> discrete_eigenvalues_rank_one(const PiecewiseSymbol& symbol,
                                                  const RankOneTerm& pert);
std::vector<double> discrete_eigenvalues_rank_one(const IntervalSet& E, const RankOneTerm& pert);

/// Fourier coefficients (|j| <= cutoff) of phi = (lambda - M)^-1 psi,
/// normalized to unit norm in L^2 (the full function, not the window).
ComplexVector eigenfunction_rank_one(const PiecewiseSymbol& symbol, const RankOneTerm& pert,
                                     Real lambda, std::int64_t cutoff);
ComplexVector eigenfunction_rank_one(const IntervalSet& E, const RankOneTerm& pert, Real lambda,
                                     std::int64_t cutoff);

}  // namespace specpol
