#include "specpol/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace specpol {

namespace {

void require_ascending(const std::vector<std::int64_t>& n_list) {
  if (n_list.empty()) throw InvalidArgument("n_list must not be empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 0) throw InvalidArgument("n_list entries must be non-negative");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw InvalidArgument("n_list must be strictly ascending");
  }
}

}  // namespace

MomentMatrices Model::assemble(std::int64_t n) const {
  if (perturbation) return assemble_rank_one(symbol, *perturbation, cutoff(n), label);
  return assemble_multiplication(symbol, cutoff(n), label);
}

MomentMatrices Model::assemble_base(std::int64_t n) const {
  return assemble_multiplication(symbol, cutoff(n), label.empty() ? label : label + "/base");
}

std::vector<double> Model::discrete_eigenvalues() const {
  if (!perturbation) return {};
  return discrete_eigenvalues_rank_one(symbol, *perturbation);
}

std::vector<double> Model::spectrum() const {
  std::vector<double> out;
  for (Real v : symbol.values()) out.push_back(static_cast<double>(v));
  for (double l : discrete_eigenvalues()) out.push_back(l);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> galerkin_spectrum(const MomentMatrices& m) {
  const Eigen::MatrixXcd A = m.A.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((A + A.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver failed for operator '" + m.label + "', d = " +
                         std::to_string(m.dim()));
  }
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PollutionRow> pollution_report(const Model& model, const std::vector<std::int64_t>& n_list,
                                           const PollutionOptions& opts) {
  require_ascending(n_list);
  const double gap_lo = static_cast<double>(model.symbol.min_value()) + opts.gap_delta;
  const double gap_hi = static_cast<double>(model.symbol.max_value()) - opts.gap_delta;
  const auto truth = model.discrete_eigenvalues();
  std::vector<PollutionRow> rows;
  for (const auto n : n_list) {
    const MomentMatrices m = model.assemble(n);
    PollutionRow row;
    row.n = n;
    row.galerkin = galerkin_spectrum(m);
    for (double x : row.galerkin) {
      if (x <= gap_lo || x >= gap_hi) continue;
      row.gap_eigenvalues.push_back(x);
      const bool near_truth = std::any_of(truth.begin(), truth.end(),
                                          [&](double l) { return std::abs(x - l) <= opts.match_tol; });
      if (!near_truth) row.polluting.push_back(x);
    }
    const auto s = second_order_spectrum(m, opts.spectrum);
    for (const auto& e : enclosures(s, opts.max_half_width)) {
      if (e.lo <= gap_lo || e.hi >= gap_hi) continue;
      row.gap_enclosures.push_back(e);
      const bool certified =
          std::any_of(truth.begin(), truth.end(), [&](double l) { return e.contains(l); });
      if (!certified) row.spurious_enclosures.push_back(e);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ConvergenceRow convergence_row(const SecondOrderSpectrum& s, double lambda, std::int64_t n) {
  const Point z = closest_point(s, lambda);
  const Enclosure e = enclosure_of(z);
  ConvergenceRow row;
  row.lambda = lambda;
  row.n = n;
  row.lo = e.lo;
  row.hi = e.hi;
  row.signed_re_minus_lambda = z.real() - lambda;
  row.re_minus_lambda = std::abs(row.signed_re_minus_lambda);
  row.im_abs = std::abs(z.imag());
  row.z = z;
  return row;
}

std::vector<ConvergenceRow> convergence_table(const Model& model, const std::vector<double>& lambdas,
                                              const std::vector<std::int64_t>& n_list,
                                              const SpectrumOptions& opts) {
  require_ascending(n_list);
  std::vector<std::vector<ConvergenceRow>> per_lambda(lambdas.size());
  for (const auto n : n_list) {
    const auto s = second_order_spectrum(model.assemble(n), opts);
    for (std::size_t k = 0; k < lambdas.size(); ++k) per_lambda[k].push_back(convergence_row(s, lambdas[k], n));
  }
  std::vector<ConvergenceRow> rows;
  for (auto& block : per_lambda) rows.insert(rows.end(), block.begin(), block.end());
  return rows;
}

std::vector<ConvergenceRow> convergence_table(const Model& model, double lambda,
                                              const std::vector<std::int64_t>& n_list,
                                              const SpectrumOptions& opts) {
  return convergence_table(model, std::vector<double>{lambda}, n_list, opts);
}

ClusterStats szego_stats(const SecondOrderSpectrum& s, const PiecewiseSymbol& symbol, double epsilon) {
  if (!symbol.is_plus_minus_one()) throw InvalidArgument("Szego statistics require a symbol with values +-1");
  if (!(epsilon > 0 && epsilon < 1)) throw InvalidArgument("epsilon must lie in (0, 1)");
  ClusterStats st;
  st.n = s.cutoff;
  st.epsilon = epsilon;
  st.expected_plus = static_cast<double>(symbol.level_set(1).measure() / (2 * kPi));
  st.expected_minus = static_cast<double>(symbol.level_set(-1).measure() / (2 * kPi));
  st.symbol_mean = static_cast<double>(fourier_coefficient(symbol, 0).real());
  if (s.points.empty()) return st;
  // Each conjugate pair maps to the same w, so counting all 2d points and
  // dividing by 2d equals counting the upper half-plane points over d.
  std::size_t near_minus = 0, near_plus = 0;
  Point sum{0, 0};
  for (const auto& z : s.points) {
    if (z == Point{0, 0}) throw NumericalError("zero in Spec_2: Joukowski map undefined");
    sum += z;
    const double w = ((z + 1.0 / z) / 2.0).real();
    if (w <= -1 + epsilon) ++near_minus;
    if (w >= 1 - epsilon) ++near_plus;
  }
  const double N = static_cast<double>(s.points.size());
  st.frac_near_minus1 = near_minus / N;
  st.frac_near_plus1 = near_plus / N;
  st.mean = sum / N;
  return st;
}

ClusterStats szego_stats(const PiecewiseSymbol& symbol, std::int64_t n, double epsilon,
                         const SpectrumOptions& opts) {
  if (!symbol.is_plus_minus_one()) throw InvalidArgument("Szego statistics require a symbol with values +-1");
  return szego_stats(second_order_spectrum(assemble_multiplication(symbol, n), opts), symbol, epsilon);
}

std::vector<Point> joukowski_image(const SecondOrderSpectrum& s) {
  std::vector<Point> out;
  for (const auto& z : s.upper()) {
    if (z == Point{0, 0}) throw NumericalError("zero in Spec_2: Joukowski map undefined");
    out.push_back((z + 1.0 / z) / 2.0);
  }
  return out;
}

double circle_deviation(const SecondOrderSpectrum& s, Point center, double radius) {
  double worst = 0;
  for (const auto& z : s.points) worst = std::max(worst, std::abs(std::abs(z - center) - radius));
  return worst;
}

double one_sided_distance(const std::vector<Point>& from, const std::vector<Point>& to) {
  if (from.empty()) return 0;
  if (to.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0;
  for (const auto& a : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : to) best = std::min(best, std::abs(a - b));
    worst = std::max(worst, best);
  }
  return worst;
}

double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b) {
  return std::max(one_sided_distance(a, b), one_sided_distance(b, a));
}

LimitingSetSample limiting_set_scan(const Model& model, const std::vector<std::int64_t>& n_list,
                                    const SpectrumOptions& opts) {
  require_ascending(n_list);
  if (n_list.size() < 2) throw InvalidArgument("limiting set scan needs at least two truncation sizes");
  LimitingSetSample out;
  const double a = static_cast<double>(model.symbol.min_value());
  const double b = static_cast<double>(model.symbol.max_value());
  out.center = {(a + b) / 2, 0};
  out.radius = (b - a) / 2;
  std::vector<Point> circle;
  for (int k = 0; k < kCircleSamples; ++k) {
    circle.push_back(out.center + std::polar(out.radius, 2 * static_cast<double>(kPi) * k / kCircleSamples));
  }
  out.lambdas = model.discrete_eigenvalues();
  if (!model.perturbation && model.symbol.values().size() == 1) {
    out.lambdas.push_back(static_cast<double>(model.symbol.values().front()));
  }
  out.lambda_distance.assign(out.lambdas.size(), {});
  for (const auto n : n_list) {
    LimitingSetSample::Cloud cloud;
    cloud.n = n;
    const auto s = second_order_spectrum(model.assemble(n), opts);
    cloud.points = s.points;
    out.accumulated.insert(out.accumulated.end(), s.points.begin(), s.points.end());
    out.circle_distance.push_back(one_sided_distance(circle, cloud.points));
    out.accumulated_circle_distance.push_back(one_sided_distance(circle, out.accumulated));
    for (std::size_t k = 0; k < out.lambdas.size(); ++k) {
      out.lambda_distance[k].push_back(distance_to(s, {out.lambdas[k], 0}));
    }
    if (model.perturbation) {
      cloud.base_points = second_order_spectrum(model.assemble_base(n), opts).points;
      out.base_circle_distance.push_back(one_sided_distance(circle, cloud.base_points));
    }
    out.clouds.push_back(std::move(cloud));
  }
  return out;
}

std::vector<HResidual> condition_H_residuals(const Model& model, double lambda,
                                             const std::vector<std::int64_t>& n_list) {
  require_ascending(n_list);
  if (!model.perturbation) throw InvalidArgument("(H) residuals need a rank-one perturbed model");
  const std::int64_t ref = 4 * model.cutoff(n_list.back());
  const ComplexVector phi = eigenfunction_rank_one(model.symbol, *model.perturbation, lambda, ref);
  const Real lam = lambda;
  std::vector<HResidual> out;
  for (const auto n : n_list) {
    const std::int64_t c = model.cutoff(n);
    const MomentMatrices m = model.assemble(n);
    const ComplexVector x = phi.segment(ref - c, 2 * c + 1);
    const Real tail = phi.head(ref - c).squaredNorm() + phi.tail(ref - c).squaredNorm();
    const Real r1 = (m.A * x - lam * x).squaredNorm() + lam * lam * tail;
    const Real r2 = (m.B * x - lam * lam * x).squaredNorm() + lam * lam * lam * lam * tail;
    out.push_back({n, static_cast<double>(std::sqrt(r1)), static_cast<double>(std::sqrt(r2)), sigma(m, lambda)});
  }
  return out;
}

}  // namespace specpol
