#include "specpol/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <regex>
#include <sstream>

namespace specpol {

namespace {

using i128 = __int128;

std::int64_t parse_int(const std::string& s, std::string_view whole) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("bad integer in pi multiple '" + std::string(whole) + "'");
  }
}

}  // namespace

PiMultiple::PiMultiple(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidArgument("pi multiple with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  num_ = num / g;
  den_ = den / g;
}

PiMultiple PiMultiple::parse(std::string_view text) {
  static const std::regex pattern(
      R"(^\s*([+-])?\s*(\d+)?\s*(?:/\s*(\d+))?\s*(pi|π)?\s*(?:/\s*(\d+))?\s*$)",
      std::regex::icase);
  const std::string s(text);
  std::smatch match;
  if (!std::regex_match(s, match, pattern) || (!match[2].matched && !match[4].matched)) {
    throw InvalidArgument("cannot parse '" + s + "' as a rational multiple of pi");
  }
  if (match[3].matched && !match[2].matched) {
    throw InvalidArgument("cannot parse '" + s + "' as a rational multiple of pi");
  }
  if (match[5].matched && !match[4].matched) {
    throw InvalidArgument("cannot parse '" + s + "' as a rational multiple of pi");
  }
  std::int64_t num = match[2].matched ? parse_int(match[2].str(), text) : 1;
  std::int64_t den = match[3].matched ? parse_int(match[3].str(), text) : 1;
  if (match[5].matched) den *= parse_int(match[5].str(), text);
  if (match[1].matched && match[1].str() == "-") num = -num;
  if (!match[4].matched && num != 0) {
    throw InvalidArgument("endpoint '" + s + "' must be a rational multiple of pi, e.g. \"1/2 pi\"");
  }
  if (den == 0) throw InvalidArgument("zero denominator in '" + s + "'");
  return PiMultiple(num, den);
}

std::string PiMultiple::str() const {
  if (num_ == 0) return "0";
  std::ostringstream os;
  if (num_ == 1 && den_ == 1) return "pi";
  if (num_ == -1 && den_ == 1) return "-pi";
  os << num_;
  if (den_ != 1) os << '/' << den_;
  os << " pi";
  return os.str();
}

bool operator<(const PiMultiple& a, const PiMultiple& b) {
  return static_cast<i128>(a.num()) * b.den() < static_cast<i128>(b.num()) * a.den();
}

PiMultiple operator-(const PiMultiple& a, const PiMultiple& b) {
  const i128 num = static_cast<i128>(a.num()) * b.den() - static_cast<i128>(b.num()) * a.den();
  const i128 den = static_cast<i128>(a.den()) * b.den();
  return PiMultiple(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

Complex unit_phase(std::int64_t k, const PiMultiple& x) {
  // exp(-i pi r / q) with r = k p mod 2q.
  const i128 q = x.den();
  i128 r = (static_cast<i128>(k) * x.num()) % (2 * q);
  if (r < 0) r += 2 * q;
  if ((2 * r) % q == 0) {
    switch (static_cast<int>((2 * r) / q)) {
      case 0: return {1, 0};
      case 1: return {0, -1};
      case 2: return {-1, 0};
      default: return {0, 1};
    }
  }
  if (r > q) r -= 2 * q;
  const Real angle = kPi * static_cast<Real>(static_cast<std::int64_t>(r)) / static_cast<Real>(x.den());
  return {std::cos(angle), -std::sin(angle)};
}

// ---------------------------------------------------------------------------

IntervalSet::IntervalSet(std::vector<Interval> intervals) {
  const PiMultiple lo(-1), hi(1);
  for (const auto& [a, b] : intervals) {
    if (a < lo || hi < b) {
      throw InvalidArgument("interval (" + a.str() + ", " + b.str() + "] leaves (-pi, pi]");
    }
    if (!(a < b)) throw InvalidArgument("empty or reversed interval (" + a.str() + ", " + b.str() + "]");
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& x, const Interval& y) { return x.first < y.first; });
  for (auto& iv : intervals) {
    if (!intervals_.empty()) {
      auto& last = intervals_.back();
      if (iv.first < last.second) {
        throw InvalidArgument("overlapping intervals (" + last.first.str() + ", " + last.second.str() +
                              "] and (" + iv.first.str() + ", " + iv.second.str() + "]");
      }
      if (iv.first == last.second) {
        last.second = iv.second;
        continue;
      }
    }
    intervals_.push_back(iv);
  }
}

IntervalSet IntervalSet::full() { return IntervalSet({{PiMultiple(-1), PiMultiple(1)}}); }

Real IntervalSet::measure() const {
  Real total = 0;
  for (const auto& [a, b] : intervals_) total += (b - a).ratio();
  return total * kPi;
}

IntervalSet IntervalSet::complement() const {
  std::vector<Interval> gaps;
  PiMultiple cursor(-1);
  for (const auto& [a, b] : intervals_) {
    if (cursor < a) gaps.emplace_back(cursor, a);
    cursor = b;
  }
  if (cursor < PiMultiple(1)) gaps.emplace_back(cursor, PiMultiple(1));
  return IntervalSet(std::move(gaps));
}

// ---------------------------------------------------------------------------

PiecewiseSymbol::PiecewiseSymbol(std::vector<Piece> pieces) {
  if (pieces.empty()) throw InvalidArgument("symbol without pieces");
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.lo < y.lo; });
  PiMultiple cursor(-1);
  for (const auto& p : pieces) {
    if (!(p.lo == cursor)) {
      throw InvalidArgument("symbol pieces do not partition (-pi, pi]: gap or overlap at " + cursor.str());
    }
    if (!(p.lo < p.hi)) throw InvalidArgument("empty symbol piece at " + p.lo.str());
    if (!std::isfinite(p.value)) throw InvalidArgument("non-finite symbol value");
    cursor = p.hi;
    if (!pieces_.empty() && pieces_.back().value == p.value) {
      pieces_.back().hi = p.hi;
    } else {
      pieces_.push_back(p);
    }
  }
  if (!(cursor == PiMultiple(1))) {
    throw InvalidArgument("symbol pieces do not reach pi (last endpoint " + cursor.str() + ")");
  }
}

PiecewiseSymbol PiecewiseSymbol::constant(Real value) {
  return PiecewiseSymbol({{PiMultiple(-1), PiMultiple(1), value}});
}

PiecewiseSymbol PiecewiseSymbol::indicator(const IntervalSet& E, Real inside, Real outside) {
  std::vector<Piece> pieces;
  for (const auto& [a, b] : E.intervals()) pieces.push_back({a, b, inside});
  const IntervalSet rest = E.complement();
  for (const auto& [a, b] : rest.intervals()) pieces.push_back({a, b, outside});
  return PiecewiseSymbol(std::move(pieces));
}

PiecewiseSymbol PiecewiseSymbol::squared() const {
  return transformed([](Real v) { return v * v; });
}

Real PiecewiseSymbol::min_value() const {
  return std::min_element(pieces_.begin(), pieces_.end(),
                          [](const Piece& a, const Piece& b) { return a.value < b.value; })
      ->value;
}

Real PiecewiseSymbol::max_value() const {
  return std::max_element(pieces_.begin(), pieces_.end(),
                          [](const Piece& a, const Piece& b) { return a.value < b.value; })
      ->value;
}

std::vector<Real> PiecewiseSymbol::values() const {
  std::vector<Real> out;
  for (const auto& p : pieces_) out.push_back(p.value);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IntervalSet PiecewiseSymbol::level_set(Real value) const {
  std::vector<IntervalSet::Interval> ivs;
  for (const auto& p : pieces_) {
    if (p.value == value) ivs.emplace_back(p.lo, p.hi);
  }
  return IntervalSet(std::move(ivs));
}

Real PiecewiseSymbol::integral() const {
  Real total = 0;
  for (const auto& p : pieces_) total += p.value * (p.hi - p.lo).ratio();
  return total * kPi;
}

bool PiecewiseSymbol::is_plus_minus_one() const {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [](const Piece& p) { return p.value == 1 || p.value == -1; });
}

// ---------------------------------------------------------------------------

Complex fourier_coefficient(const PiecewiseSymbol& symbol, std::int64_t k) {
  if (k == 0) {
    Real total = 0;
    for (const auto& p : symbol.pieces()) total += p.value * (p.hi - p.lo).ratio();
    return {total / 2, 0};
  }
  Complex total{0, 0};
  for (const auto& p : symbol.pieces()) {
    total += p.value * (unit_phase(k, p.hi) - unit_phase(k, p.lo));
  }
  // (2 pi)^-1 (e^{-ikb} - e^{-ika}) / (-ik)
  return total * Complex{0, 1} / (2 * kPi * static_cast<Real>(k));
}

std::vector<Complex> fourier_coefficients(const PiecewiseSymbol& symbol, std::int64_t kmax) {
  std::vector<Complex> out(static_cast<std::size_t>(2 * kmax + 1));
  for (std::int64_t k = 0; k <= kmax; ++k) {
    const Complex c = fourier_coefficient(symbol, k);
    out[static_cast<std::size_t>(kmax + k)] = c;
    out[static_cast<std::size_t>(kmax - k)] = std::conj(c);
  }
  return out;
}

Complex fourier_coefficient(const IntervalSet& E, std::int64_t k) {
  if (E.empty()) return {0, 0};
  return fourier_coefficient(PiecewiseSymbol::indicator(E, 1, 0), k);
}

// ---------------------------------------------------------------------------

RankOneTerm::RankOneTerm(Real coupling, std::vector<Complex> coeffs)
    : coupling_(coupling), coeffs_(std::move(coeffs)) {
  if (!(coupling_ > 0) || !std::isfinite(static_cast<double>(coupling_))) {
    throw InvalidArgument("rank-one coupling must be positive and finite");
  }
  if (coeffs_.size() % 2 != 1) {
    throw InvalidArgument("psi coefficient list must have odd length 2K+1 (indices -K..K)");
  }
  Real norm2 = 0;
  for (const auto& c : coeffs_) norm2 += std::norm(c);
  if (std::abs(norm2 - 1) > 1e-12L) {
    std::ostringstream os;
    os << "psi must have unit norm, got |psi|^2 = " << static_cast<double>(norm2);
    throw InvalidArgument(os.str());
  }
}

RankOneTerm RankOneTerm::constant(Real coupling) { return RankOneTerm(coupling, {Complex{1, 0}}); }

Complex RankOneTerm::coefficient(std::int64_t j) const {
  const std::int64_t K = band();
  if (j < -K || j > K) return {0, 0};
  return coeffs_[static_cast<std::size_t>(j + K)];
}

Real RankOneTerm::mass(const IntervalSet& E) const {
  if (E.empty()) return 0;
  const std::int64_t K = band();
  const auto ind = fourier_coefficients(PiecewiseSymbol::indicator(E, 1, 0), 2 * K);
  Complex total{0, 0};
  for (std::int64_t j = -K; j <= K; ++j) {
    for (std::int64_t k = -K; k <= K; ++k) {
      total += coefficient(j) * std::conj(coefficient(k)) * ind[static_cast<std::size_t>(k - j + 2 * K)];
    }
  }
  return total.real();
}

// ---------------------------------------------------------------------------

namespace {

ComplexMatrix toeplitz(const std::vector<Complex>& coeffs, std::int64_t cutoff) {
  const Eigen::Index d = 2 * cutoff + 1;
  ComplexMatrix T(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index s = 0; s < d; ++s) {
      T(r, s) = coeffs[static_cast<std::size_t>(r - s + 2 * cutoff)];
    }
  }
  return T;
}

double min_eigenvalue(const Eigen::MatrixXcd& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

MomentInvariants check_invariants(const MomentMatrices& m) {
  const Eigen::MatrixXcd A = m.A.cast<std::complex<double>>();
  const Eigen::MatrixXcd B = m.B.cast<std::complex<double>>();
  MomentInvariants out;
  out.hermitian_defect_A =
      (A - A.adjoint()).cwiseAbs().maxCoeff() / std::max(1.0, A.cwiseAbs().maxCoeff());
  out.hermitian_defect_B =
      (B - B.adjoint()).cwiseAbs().maxCoeff() / std::max(1.0, B.cwiseAbs().maxCoeff());
  const Eigen::MatrixXcd Bh = (B + B.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Bh, Eigen::EigenvaluesOnly);
  const double normB = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  out.min_eig_B = es.eigenvalues().minCoeff() / normB;
  const Eigen::MatrixXcd Ah = (A + A.adjoint()) / 2.0;
  const Eigen::MatrixXcd S = Bh - Ah * Ah;
  out.min_eig_B_minus_A2 = min_eigenvalue((S + S.adjoint()) / 2.0) / normB;
  return out;
}

MomentMatrices assemble_multiplication(const PiecewiseSymbol& symbol, std::int64_t cutoff,
                                       std::string label) {
  if (cutoff < 0) throw InvalidArgument("truncation cutoff must be non-negative");
  MomentMatrices m;
  m.cutoff = cutoff;
  m.label = std::move(label);
  m.A = toeplitz(fourier_coefficients(symbol, 2 * cutoff), cutoff);
  m.B = toeplitz(fourier_coefficients(symbol.squared(), 2 * cutoff), cutoff);
  return m;
}

ComplexVector symbol_times_psi(const PiecewiseSymbol& symbol, const RankOneTerm& psi,
                               std::int64_t cutoff) {
  const std::int64_t K = psi.band();
  const std::int64_t kmax = cutoff + K;
  const auto mh = fourier_coefficients(symbol, kmax);
  ComplexVector w(2 * cutoff + 1);
  for (std::int64_t j = -cutoff; j <= cutoff; ++j) {
    Complex acc{0, 0};
    for (std::int64_t k = -K; k <= K; ++k) {
      acc += mh[static_cast<std::size_t>(j - k + kmax)] * psi.coefficient(k);
    }
    w(j + cutoff) = acc;
  }
  return w;
}

MomentMatrices assemble_rank_one(const PiecewiseSymbol& base, const RankOneTerm& pert,
                                 std::int64_t cutoff, std::string label) {
  MomentMatrices m = assemble_multiplication(base, cutoff, std::move(label));
  const Eigen::Index d = m.dim();
  ComplexVector v(d);
  for (std::int64_t j = -cutoff; j <= cutoff; ++j) v(j + cutoff) = pert.coefficient(j);
  const ComplexVector w = symbol_times_psi(base, pert, cutoff);
  const Real a = pert.coupling();
  // (M+K)^2 = M^2 + MK + KM + K^2 with |psi| = 1.
  m.A += a * v * v.adjoint();
  m.B += a * (w * v.adjoint() + v * w.adjoint()) + a * a * v * v.adjoint();
  return m;
}

// ---------------------------------------------------------------------------

std::vector<double> discrete_eigenvalues_rank_one(const PiecewiseSymbol& symbol,
                                                  const RankOneTerm& pert) {
  const auto vals = symbol.values();
  const Real a = pert.coupling();
  if (vals.size() == 1) return {static_cast<double>(vals[0] + a)};
  if (vals.size() != 2) {
    throw InvalidArgument("discrete eigenvalues are implemented for symbols with at most two values");
  }
  const Real lo = vals[0], hi = vals[1];
  const Real mu_lo = pert.mass(symbol.level_set(lo));
  const Real mu_hi = pert.mass(symbol.level_set(hi));
  // (lambda - lo)(lambda - hi) = a [mu_lo (lambda - hi) + mu_hi (lambda - lo)]
  const Real b = -(lo + hi + a * (mu_lo + mu_hi));
  const Real c = lo * hi + a * (mu_lo * hi + mu_hi * lo);
  const Real disc = std::max<Real>(b * b - 4 * c, 0);
  const Real q = -0.5L * (b + (b >= 0 ? 1 : -1) * std::sqrt(disc));
  std::vector<Real> roots;
  if (q != 0) {
    roots = {q, c / q};
  } else {
    roots = {0, 0};
  }
  std::vector<double> out;
  for (Real r : roots) {
    const bool at_pole = std::abs(r - lo) <= 1e-12L * (1 + std::abs(lo)) ||
                         std::abs(r - hi) <= 1e-12L * (1 + std::abs(hi));
    if (!at_pole) out.push_back(static_cast<double>(r));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> discrete_eigenvalues_rank_one(const IntervalSet& E, const RankOneTerm& pert) {
  return discrete_eigenvalues_rank_one(PiecewiseSymbol::indicator(E), pert);
}

ComplexVector eigenfunction_rank_one(const PiecewiseSymbol& symbol, const RankOneTerm& pert,
                                     Real lambda, std::int64_t cutoff) {
  if (cutoff < 0) throw InvalidArgument("truncation cutoff must be non-negative");
  for (Real v : symbol.values()) {
    if (std::abs(lambda - v) <= 1e-12L * (1 + std::abs(v))) {
      throw InvalidArgument("lambda lies on the essential spectrum; the resolvent is singular");
    }
  }
  const PiecewiseSymbol resolvent = symbol.transformed([lambda](Real v) { return 1 / (lambda - v); });
  ComplexVector phi = symbol_times_psi(resolvent, pert, cutoff);
  Real norm2 = 0;
  for (Real v : symbol.values()) {
    const Real g = 1 / (lambda - v);
    norm2 += g * g * pert.mass(symbol.level_set(v));
  }
  phi /= Complex{std::sqrt(norm2), 0};
  return phi;
}

ComplexVector eigenfunction_rank_one(const IntervalSet& E, const RankOneTerm& pert, Real lambda,
                                     std::int64_t cutoff) {
  return eigenfunction_rank_one(PiecewiseSymbol::indicator(E), pert, lambda, cutoff);
}

}  // namespace specpol
