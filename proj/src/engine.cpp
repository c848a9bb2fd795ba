#include "specpol/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace specpol {

std::string to_string(Precision p) {
  switch (p) {
    case Precision::Auto: return "auto";
    case Precision::Double: return "double";
    case Precision::Extended: return "extended";
  }
  return "auto";
}

Precision precision_from_string(const std::string& s) {
  if (s == "auto") return Precision::Auto;
  if (s == "double") return Precision::Double;
  if (s == "extended") return Precision::Extended;
  throw InvalidArgument("unknown precision '" + s + "' (expected auto, double or extended)");
}

double pairing_tolerance(Precision used) {
  // Near-double roots at the spectral edges split like sqrt(eps |C|) under
  // the solver's backward error; 1e-8 is reachable only with long double.
  return used == Precision::Extended ? 1e-8 : 1e-6;
}

namespace {

std::string describe(const std::string& label, Eigen::Index d) {
  std::ostringstream os;
  os << "operator '" << (label.empty() ? "<unnamed>" : label) << "', d = " << d;
  return os.str();
}

std::vector<Point> solve_double(const ComplexMatrix& A, const ComplexMatrix& B, const std::string& label) {
  const Eigen::Index d = A.rows();
  const Eigen::Index n = 2 * d;
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  C.topLeftCorner(d, d) = (2 * A).cast<std::complex<double>>();
  C.topRightCorner(d, d) = (-B).cast<std::complex<double>>();
  C.bottomLeftCorner(d, d).setIdentity();
  std::vector<std::complex<double>> w(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', static_cast<lapack_int>(n), C.data(),
                                        static_cast<lapack_int>(n), w.data(), nullptr, 1, nullptr, 1);
  if (info != 0) {
    throw NumericalError("zgeev failed (info = " + std::to_string(info) + ") for " + describe(label, d));
  }
  return w;
}

std::vector<Point> solve_extended(const ComplexMatrix& A, const ComplexMatrix& B, const std::string& label) {
  const Eigen::Index d = A.rows();
  const Eigen::Index n = 2 * d;
  ComplexMatrix C = ComplexMatrix::Zero(n, n);
  C.topLeftCorner(d, d) = 2 * A;
  C.topRightCorner(d, d) = -B;
  C.bottomLeftCorner(d, d).setIdentity();
  Eigen::ComplexEigenSolver<ComplexMatrix> es(C, false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("complex Schur iteration did not converge for " + describe(label, d));
  }
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex z = es.eigenvalues()(i);
    out.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  return out;
}

bool point_less(const Point& a, const Point& b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

}  // namespace

std::vector<Point> companion_eigenvalues(const ComplexMatrix& A, const ComplexMatrix& B, Precision precision,
                                         const std::string& label) {
  if (A.rows() != A.cols() || B.rows() != A.rows() || B.cols() != A.cols()) {
    throw InvalidArgument("moment matrices must be square and of equal size");
  }
  if (A.rows() == 0) return {};
  if (precision == Precision::Extended) return solve_extended(A, B, label);
  return solve_double(A, B, label);
}

std::vector<Point> SecondOrderSpectrum::upper() const {
  std::vector<Point> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t j = partner[i];
    if (j == i || points[i].imag() > points[j].imag() || (points[i].imag() == points[j].imag() && i < j)) {
      out.push_back(points[i]);
    }
  }
  return out;
}

SecondOrderSpectrum second_order_spectrum(const MomentMatrices& m, const SpectrumOptions& opts) {
  SecondOrderSpectrum s;
  s.cutoff = m.cutoff;
  s.label = m.label;
  const Eigen::Index d = m.dim();
  s.precision = opts.precision;
  if (s.precision == Precision::Auto) {
    s.precision = 2 * d <= opts.extended_max_dim ? Precision::Extended : Precision::Double;
  }
  std::vector<Point> raw = companion_eigenvalues(m.A, m.B, s.precision, m.label);
  for (const auto& z : raw) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw NumericalError("non-finite eigenvalue of the companion matrix for " + describe(m.label, d));
    }
  }
  std::sort(raw.begin(), raw.end(), point_less);

  // Conjugate pairing: a point within tolerance of the real axis pairs with
  // itself, every other point with the nearest conjugate of an unused one.
  const double tol = pairing_tolerance(s.precision);
  const std::size_t N = raw.size();
  std::vector<std::size_t> partner(N, N);
  for (std::size_t i = 0; i < N; ++i) {
    if (partner[i] != N) continue;
    const double scale = std::max(1.0, std::abs(raw[i]));
    if (2 * std::abs(raw[i].imag()) <= tol * scale) {
      partner[i] = i;
      continue;
    }
    std::size_t best = N;
    double best_dist = 0;
    for (std::size_t j = 0; j < N; ++j) {
      if (j == i || partner[j] != N) continue;
      const double dist = std::abs(raw[j] - std::conj(raw[i]));
      if (best == N || dist < best_dist) {
        best = j;
        best_dist = dist;
      }
    }
    if (best == N || best_dist > tol * scale) {
      std::ostringstream os;
      os.precision(17);
      os << "conjugate pairing failed for z = " << raw[i] << " (nearest conjugate at distance " << best_dist
         << ") for " << describe(m.label, d);
      throw NumericalError(os.str());
    }
    partner[i] = best;
    partner[best] = i;
    const std::size_t up = raw[i].imag() > 0 ? i : best;
    const std::size_t lo = up == i ? best : i;
    const Point avg = (raw[up] + std::conj(raw[lo])) / 2.0;
    raw[up] = avg;
    raw[lo] = std::conj(avg);
  }

  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&raw](std::size_t a, std::size_t b) { return point_less(raw[a], raw[b]); });
  std::vector<std::size_t> rank(N);
  for (std::size_t r = 0; r < N; ++r) rank[order[r]] = r;
  s.points.resize(N);
  s.partner.resize(N);
  for (std::size_t r = 0; r < N; ++r) {
    s.points[r] = raw[order[r]];
    s.partner[r] = rank[partner[order[r]]];
  }
  return s;
}

Point closest_point(const SecondOrderSpectrum& s, double lambda) {
  const auto up = s.upper();
  if (up.empty()) throw InvalidArgument("empty second order spectrum");
  return *std::min_element(up.begin(), up.end(), [lambda](const Point& a, const Point& b) {
    return std::abs(a - lambda) < std::abs(b - lambda);
  });
}

double distance_to(const SecondOrderSpectrum& s, Point w) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& z : s.points) best = std::min(best, std::abs(z - w));
  return best;
}

Enclosure enclosure_of(Point z) {
  const double r = std::abs(z.imag());
  return {z.real() - r, z.real() + r, z};
}

std::vector<Enclosure> enclosures(const SecondOrderSpectrum& s, std::optional<double> max_half_width) {
  std::vector<Enclosure> out;
  for (const auto& z : s.upper()) {
    const Enclosure e = enclosure_of(z);
    if (max_half_width && e.half_width() > *max_half_width) continue;
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const Enclosure& a, const Enclosure& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  return out;
}

Eigen::MatrixXcd pencil(const MomentMatrices& m, Point z) {
  const Eigen::MatrixXcd A = m.A.cast<std::complex<double>>();
  const Eigen::MatrixXcd B = m.B.cast<std::complex<double>>();
  Eigen::MatrixXcd Q = B - 2.0 * z * A;
  Q.diagonal().array() += z * z;
  return Q;
}

namespace {

// Inverse iteration on Q* Q. Returns nullopt when the contraction is too slow
// to certify the value (clustered small singular values).
std::optional<double> smallest_singular_value_inverse_iteration(const Eigen::MatrixXcd& Q) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Q);
  const auto& U = lu.matrixLU();
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    if (U(i, i) == 0.0) return 0.0;
  }
  const Eigen::Index d = Q.rows();
  Eigen::VectorXcd x(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    x(i) = {1.0 + 0.5 * std::cos(0.7 * static_cast<double>(i)), 0.5 * std::sin(1.3 * static_cast<double>(i))};
  }
  x.normalize();
  double estimate = std::numeric_limits<double>::infinity();
  double last_change = std::numeric_limits<double>::infinity();
  for (int it = 0; it < kSigmaInverseIterations; ++it) {
    // <x, (Q* Q)^-1 x> = |Q^-* x|^2, so 1/|Q^-* x| bounds sigma_min from above.
    const Eigen::VectorXcd y = lu.adjoint().solve(x);
    const double ny = y.norm();
    if (!std::isfinite(ny)) return 0.0;
    const double next = 1.0 / ny;
    Eigen::VectorXcd x2 = lu.solve(y);
    const double n2 = x2.norm();
    if (!std::isfinite(n2) || n2 == 0) return 0.0;
    x = x2 / n2;
    const double change = std::abs(estimate - next);
    estimate = std::min(next, estimate);
    if (change == 0) return estimate;
    if (std::isfinite(last_change)) {
      // geometric tail of the remaining corrections
      const double rate = change / last_change;
      if (rate < 1 && change * rate / (1 - rate) <= 1e-13 * estimate) return estimate;
    }
    last_change = change;
  }
  return std::nullopt;
}

}  // namespace

double sigma(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, Point z) {
  Eigen::MatrixXcd Q = B - 2.0 * z * A;
  Q.diagonal().array() += z * z;
  if (Q.rows() <= kSigmaSvdMaxDim) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(Q);
    return svd.singularValues().minCoeff();
  }
  if (const auto s = smallest_singular_value_inverse_iteration(Q)) return *s;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(Q);
  return svd.singularValues().minCoeff();
}

double sigma(const MomentMatrices& m, Point z) {
  return sigma(Eigen::MatrixXcd(m.A.cast<std::complex<double>>()), Eigen::MatrixXcd(m.B.cast<std::complex<double>>()),
               z);
}

DescentResult sigma_descent(const MomentMatrices& m, Point z0, const DescentOptions& opts) {
  if (!(opts.step0 > 0) || !(opts.shrink > 0 && opts.shrink < 1) || !(opts.tol > 0) || opts.max_iter <= 0) {
    throw InvalidArgument("descent options must be positive with 0 < shrink < 1");
  }
  const Eigen::MatrixXcd A = m.A.cast<std::complex<double>>();
  const Eigen::MatrixXcd B = m.B.cast<std::complex<double>>();
  Point z = z0;
  double s = sigma(A, B, z);
  double step = opts.step0;
  if (s <= opts.tol) return {z, s, 0};
  std::array<Point, 8> compass;
  for (int k = 0; k < 8; ++k) compass[static_cast<std::size_t>(k)] = std::polar(1.0, k * static_cast<double>(kPi) / 4);
  for (int it = 1; it <= opts.max_iter; ++it) {
    double best = s;
    Point best_z = z;
    for (const auto& dir : compass) {
      const Point w = z + step * dir;
      const double sw = sigma(A, B, w);
      if (sw < best) {
        best = sw;
        best_z = w;
      }
    }
    if (best < s) {
      z = best_z;
      s = best;
    } else {
      step *= opts.shrink;
    }
    if (s <= opts.tol) return {z, s, it};
    if (step < 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z))) {
      std::ostringstream os;
      os << "sigma descent stalled at sigma = " << s << " (step below resolution) for "
         << describe(m.label, m.dim());
      throw NoZeroFound(os.str(), z, s);
    }
  }
  std::ostringstream os;
  os << "sigma descent exhausted " << opts.max_iter << " iterations at sigma = " << s << " for "
     << describe(m.label, m.dim());
  throw NoZeroFound(os.str(), z, s);
}

Point SigmaGrid::node(int ix, int iy) const {
  const double re = rect.re_min + (rect.re_max - rect.re_min) * ix / (nx - 1);
  const double im = rect.im_min + (rect.im_max - rect.im_min) * iy / (ny - 1);
  return {re, im};
}

Point SigmaGrid::argmin() const {
  const auto it = std::min_element(values.begin(), values.end());
  const auto k = static_cast<int>(it - values.begin());
  return node(k % nx, k / nx);
}

SigmaGrid sigma_grid(const MomentMatrices& m, const GridRect& rect, int nx, int ny) {
  if (nx < 2 || ny < 2) throw InvalidArgument("sigma grid resolution must be at least 2x2");
  if (!(rect.re_min < rect.re_max) || !(rect.im_min < rect.im_max)) {
    throw InvalidArgument("sigma grid rectangle must have re_min < re_max and im_min < im_max");
  }
  SigmaGrid g{rect, nx, ny, {}};
  g.values.resize(static_cast<std::size_t>(nx) * ny);
  const Eigen::MatrixXcd A = m.A.cast<std::complex<double>>();
  const Eigen::MatrixXcd B = m.B.cast<std::complex<double>>();
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      g.values[static_cast<std::size_t>(iy) * nx + ix] = sigma(A, B, g.node(ix, iy));
    }
  }
  return g;
}

}  // namespace specpol
