#pragma once

// Experiments on the Toeplitz model: pollution of the linear (Galerkin)
// method, convergence tables, Szego clustering, limiting sets and the (H)
// residual diagnostics.

#include <optional>
#include <string>
#include <vector>

#include "specpol/engine.hpp"
#include "specpol/operators.hpp"

namespace specpol {

/// Multiplication operator, optional rank-one term, and the map from an
/// experiment index n to the Fourier cutoff (cutoff = cutoff_scale * n).
struct Model {
  PiecewiseSymbol symbol = PiecewiseSymbol::constant(1);
  std::optional<RankOneTerm> perturbation;
  std::int64_t cutoff_scale = 1;
  std::string label;

  std::int64_t cutoff(std::int64_t n) const { return cutoff_scale * n; }
  MomentMatrices assemble(std::int64_t n) const;
  /// Unperturbed moments at index n.
  MomentMatrices assemble_base(std::int64_t n) const;
  /// Isolated eigenvalues of the full operator (empty without a perturbation).
  std::vector<double> discrete_eigenvalues() const;
  /// Spec M: the symbol values (essential) plus the discrete eigenvalues.
  std::vector<double> spectrum() const;
};

std::vector<double> galerkin_spectrum(const MomentMatrices& m);

struct PollutionOptions {
  double gap_delta = 0.05;
  /// A Galerkin eigenvalue within this distance of a true eigenvalue is not polluting.
  double match_tol = 1e-2;
  double max_half_width = 0.05;
  SpectrumOptions spectrum;
};

struct PollutionRow {
  std::int64_t n = 0;
  std::vector<double> galerkin;        // all Galerkin eigenvalues
  std::vector<double> gap_eigenvalues;  // those inside (lo + delta, hi - delta)
  std::vector<double> polluting;        // gap eigenvalues away from every true eigenvalue
  std::vector<Enclosure> gap_enclosures;       // capped Spec_2 enclosures inside the gap
  std::vector<Enclosure> spurious_enclosures;  // gap enclosures containing no true eigenvalue
};

/// The gap is (min symbol, max symbol) of a two-valued symbol.
std::vector<PollutionRow> pollution_report(const Model& model, const std::vector<std::int64_t>& n_list,
                                           const PollutionOptions& opts = {});

struct ConvergenceRow {
  double lambda = 0;
  std::int64_t n = 0;
  double lo = 0;
  double hi = 0;
  double re_minus_lambda = 0;  // |Re z_n - lambda|, as tabulated
  double signed_re_minus_lambda = 0;
  double im_abs = 0;
  Point z;
};

std::vector<ConvergenceRow> convergence_table(const Model& model, double lambda,
                                              const std::vector<std::int64_t>& n_list,
                                              const SpectrumOptions& opts = {});
/// Rows ordered by lambda, then n; one Spec_2 solve per n.
std::vector<ConvergenceRow> convergence_table(const Model& model, const std::vector<double>& lambdas,
                                              const std::vector<std::int64_t>& n_list,
                                              const SpectrumOptions& opts = {});
ConvergenceRow convergence_row(const SecondOrderSpectrum& s, double lambda, std::int64_t n);

struct ClusterStats {
  std::int64_t n = 0;
  double epsilon = 0;
  double frac_near_minus1 = 0;
  double frac_near_plus1 = 0;
  double expected_minus = 0;  // |E^c| / (2 pi)
  double expected_plus = 0;   // |E| / (2 pi)
  Point mean;                 // mean of all Spec_2 points
  double symbol_mean = 0;     // Fourier coefficient m(0)
};

/// Requires a symbol with values in {-1, +1}.
ClusterStats szego_stats(const PiecewiseSymbol& symbol, std::int64_t n, double epsilon,
                         const SpectrumOptions& opts = {});
ClusterStats szego_stats(const SecondOrderSpectrum& s, const PiecewiseSymbol& symbol, double epsilon);

/// (z + 1/z) / 2 for every point with Im z >= 0 (one per conjugate pair).
std::vector<Point> joukowski_image(const SecondOrderSpectrum& s);

/// max over points of | |z - center| - radius |.
double circle_deviation(const SecondOrderSpectrum& s, Point center, double radius);

/// sup_{a in from} inf_{b in to} |a - b|.
double one_sided_distance(const std::vector<Point>& from, const std::vector<Point>& to);
double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b);

inline constexpr int kCircleSamples = 720;

struct LimitingSetSample {
  struct Cloud {
    std::int64_t n = 0;
    std::vector<Point> points;
    std::vector<Point> base_points;  // unperturbed model, when a perturbation is present
  };
  std::vector<Cloud> clouds;
  std::vector<Point> accumulated;
  Point center;  // target circle: center (a+b)/2, radius (b-a)/2
  double radius = 1;
  std::vector<double> circle_distance;              // circle samples -> cloud at n
  std::vector<double> accumulated_circle_distance;  // circle samples -> union up to n
  std::vector<double> base_circle_distance;         // same for the unperturbed model
  std::vector<double> lambdas;
  std::vector<std::vector<double>> lambda_distance;  // [lambda][n index]
};

LimitingSetSample limiting_set_scan(const Model& model, const std::vector<std::int64_t>& n_list,
                                    const SpectrumOptions& opts = {});

struct HResidual {
  std::int64_t n = 0;
  double r1 = 0;  // |P_n (M+K) P_n phi - lambda phi|
  double r2 = 0;  // |P_n (M+K)^2 P_n phi - lambda^2 phi|
  double sigma = 0;
};

/// Reference window: cutoff of 4 * max(n_list).
std::vector<HResidual> condition_H_residuals(const Model& model, double lambda,
                                             const std::vector<std::int64_t>& n_list);

}  // namespace specpol
