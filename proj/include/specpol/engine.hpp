#pragma once

// Second-order spectra: zeros of det Q(z), Q(z) = z^2 I - 2 z A + B, of the
// monic quadratic pencil built from a pair of moment matrices.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "specpol/common.hpp"
#include "specpol/operators.hpp"

namespace specpol {

enum class Precision {
  Auto,      // Extended when 2d <= SpectrumOptions::extended_max_dim, else Double
  Double,    // LAPACK zgeev on the companion matrix
  Extended,  // long double complex Schur (Eigen)
};

std::string to_string(Precision p);
Precision precision_from_string(const std::string& s);

struct SpectrumOptions {
  Precision precision = Precision::Auto;
  Eigen::Index extended_max_dim = 512;
};

/// All 2d points of Spec_2, sorted by (Re, Im), conjugate-paired.
struct SecondOrderSpectrum {
  std::vector<Point> points;
  /// partner[i] is the index of the point matched with conj(points[i]).
  std::vector<std::size_t> partner;
  std::int64_t cutoff = 0;
  std::string label;
  Precision precision = Precision::Double;

  std::size_t size() const { return points.size(); }
  /// Points with Im z >= 0, one per conjugate pair.
  std::vector<Point> upper() const;
};

/// Pairing tolerance used for a given solver precision.
double pairing_tolerance(Precision used);

/// Companion linearization C = [[2A, -B], [I, 0]] solved densely.
SecondOrderSpectrum second_order_spectrum(const MomentMatrices& m, const SpectrumOptions& opts = {});

/// Eigenvalues of the companion matrix, unpaired and unsorted.
std::vector<Point> companion_eigenvalues(const ComplexMatrix& A, const ComplexMatrix& B, Precision precision,
                                         const std::string& label = {});

/// argmin |z - lambda| over the upper representatives.
Point closest_point(const SecondOrderSpectrum& s, double lambda);
double distance_to(const SecondOrderSpectrum& s, Point w);

struct Enclosure {
  double lo = 0;
  double hi = 0;
  Point source;

  double half_width() const { return (hi - lo) / 2; }
  double center() const { return (hi + lo) / 2; }
  bool contains(double x, double slack = 0) const { return lo - slack <= x && x <= hi + slack; }
};

/// [Re z - |Im z|, Re z + |Im z|]
Enclosure enclosure_of(Point z);

/// One enclosure per conjugate pair, optionally capped in half-width, sorted by lo.
std::vector<Enclosure> enclosures(const SecondOrderSpectrum& s,
                                  std::optional<double> max_half_width = std::nullopt);

/// Q(z) = z^2 I - 2 z A + B in double precision.
Eigen::MatrixXcd pencil(const MomentMatrices& m, Point z);

// Full SVD up to this dimension; inverse iteration on Q* Q above it, with a
// full SVD fallback when the iteration does not settle within the budget.
inline constexpr Eigen::Index kSigmaSvdMaxDim = 160;
inline constexpr int kSigmaInverseIterations = 100;

/// Smallest singular value of Q(z).
double sigma(const MomentMatrices& m, Point z);
double sigma(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, Point z);

struct DescentOptions {
  double step0 = 0.1;
  double shrink = 0.5;
  double tol = 1e-10;
  int max_iter = 10000;
};

struct DescentResult {
  Point z;
  double sigma = 0;
  int iterations = 0;
};

class NoZeroFound : public NumericalError {
 public:
  NoZeroFound(const std::string& what, Point last, double sigma)
      : NumericalError(what), last_(last), sigma_(sigma) {}
  Point last() const { return last_; }
  double last_sigma() const { return sigma_; }

 private:
  Point last_;
  double sigma_;
};

/// Compass search on sigma: try the 8 neighbours at the current step, move to
/// the best improving one, otherwise shrink the step. Throws NoZeroFound.
DescentResult sigma_descent(const MomentMatrices& m, Point z0, const DescentOptions& opts = {});

struct GridRect {
  double re_min = 0;
  double re_max = 1;
  double im_min = 0;
  double im_max = 1;
};

/// Row-major with Re varying fastest: values[iy * nx + ix].
struct SigmaGrid {
  GridRect rect;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;

  Point node(int ix, int iy) const;
  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
  /// Node with the smallest value (first in layout order on ties).
  Point argmin() const;
};

SigmaGrid sigma_grid(const MomentMatrices& m, const GridRect& rect, int nx, int ny);

}  // namespace specpol
