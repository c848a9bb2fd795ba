#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace oracle {

namespace {
constexpr Real kPi = 3.141592653589793238462643383279502884L;
}

GaussLegendre::GaussLegendre(int n) : x(n), w(n) {
  for (int i = 0; i < n; ++i) {
    Real t = std::cos(kPi * (i + 0.75L) / (n + 0.5L));
    Real dp = 0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const Real p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1);
      const Real step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-19L) break;
    }
    x[i] = t;
    w[i] = 2 / ((1 - t * t) * dp * dp);
  }
}

Complex GaussLegendre::integrate(const std::function<Complex(Real)>& f, Real a, Real b, int panels) const {
  Complex sum = 0;
  const Real h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const Real lo = a + p * h;
    for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * f(lo + h / 2 * (x[i] + 1));
  }
  return sum * (h / 2);
}

Complex fourier_by_quadrature(const specpol::PiecewiseSymbol& m, std::int64_t k, const GaussLegendre& rule) {
  Complex total = 0;
  for (const auto& p : m.pieces()) {
    const Real v = p.value;
    total += rule.integrate([&](Real t) { return v * std::polar(Real(1), -static_cast<Real>(k) * t); },
                            p.lo.radians(), p.hi.radians(), 16);
  }
  return total / (2 * kPi);
}

Complex inner_by_quadrature(const specpol::PiecewiseSymbol& breaks, const std::function<Complex(Real)>& f,
                            const std::function<Complex(Real)>& g, const GaussLegendre& rule) {
  Complex total = 0;
  for (const auto& p : breaks.pieces()) {
    total += rule.integrate([&](Real t) { return f(t) * std::conj(g(t)); }, p.lo.radians(), p.hi.radians(), 16);
  }
  return total;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, Complex(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), Complex(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Complex poly_eval(const Poly& p, Complex z) {
  Complex acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Poly pencil_determinant(const std::vector<std::vector<Complex>>& A, const std::vector<std::vector<Complex>>& B) {
  const std::size_t d = A.size();
  // entry (i, j) as a polynomial: B_ij - 2 A_ij z + delta_ij z^2
  auto entry = [&](std::size_t i, std::size_t j) {
    return Poly{B[i][j], -Real(2) * A[i][j], i == j ? Complex(1) : Complex(0)};
  };
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  Poly det{0};
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Poly term{inversions % 2 ? Complex(-1) : Complex(1)};
    for (std::size_t i = 0; i < d; ++i) term = poly_mul(term, entry(i, perm[i]));
    det = poly_add(det, term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

std::vector<Complex> poly_roots(const Poly& p_in) {
  Poly p = p_in;
  while (p.size() > 1 && p.back() == Complex(0)) p.pop_back();
  const std::size_t deg = p.size() - 1;
  if (deg == 0) return {};
  const Complex lead = p.back();
  for (auto& c : p) c /= lead;
  Poly dp(deg);
  for (std::size_t k = 1; k <= deg; ++k) dp[k - 1] = p[k] * static_cast<Real>(k);

  Real bound = 0;
  for (std::size_t k = 0; k < deg; ++k) bound = std::max(bound, std::abs(p[k]));
  bound = 1 + bound;  // Cauchy bound
  std::vector<Complex> z(deg);
  for (std::size_t k = 0; k < deg; ++k) z[k] = std::polar(bound / 2, 2 * kPi * (k + 0.25L) / deg + 0.4L);

  for (int it = 0; it < 2000; ++it) {
    Real worst = 0;
    for (std::size_t k = 0; k < deg; ++k) {
      const Complex ratio = poly_eval(p, z[k]) / poly_eval(dp, z[k]);
      Complex repulsion = 0;
      for (std::size_t j = 0; j < deg; ++j)
        if (j != k) repulsion += Real(1) / (z[k] - z[j]);
      const Complex step = ratio / (Real(1) - ratio * repulsion);
      z[k] -= step;
      worst = std::max(worst, std::abs(step) / std::max(Real(1), std::abs(z[k])));
    }
    if (worst < 1e-18L) break;
  }
  for (auto& r : z) {
    for (int it = 0; it < 5; ++it) {
      const Complex d = poly_eval(dp, r);
      if (d == Complex(0)) break;
      r -= poly_eval(p, r) / d;
    }
  }
  return z;
}

double matching_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<std::size_t> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0;
    for (std::size_t i = 0; i < a.size() && worst < best; ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Real bisect(const std::function<Real(Real)>& f, Real lo, Real hi) {
  Real flo = f(lo);
  if ((flo > 0) == (f(hi) > 0)) throw std::invalid_argument("bisect: no sign change");
  for (int it = 0; it < 200; ++it) {
    const Real mid = (lo + hi) / 2;
    const Real fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

std::vector<std::vector<Complex>> random_hermitian(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<std::vector<Complex>> A(d, std::vector<Complex>(d));
  for (int i = 0; i < d; ++i) {
    A[i][i] = Complex(u(rng), 0);
    for (int j = i + 1; j < d; ++j) {
      A[i][j] = Complex(u(rng), u(rng));
      A[j][i] = std::conj(A[i][j]);
    }
  }
  return A;
}

}  // namespace oracle
