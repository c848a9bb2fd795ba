// Randomized invariants. Every generator is seeded so failures reproduce.

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "models.hpp"
#include "oracles.hpp"
#include "specpol/analysis.hpp"
#include "specpol/output.hpp"

using namespace specpol;

namespace {

// Random partition of (-pi, pi] at multiples of pi/16 with random values.
PiecewiseSymbol random_symbol(std::mt19937_64& rng, int max_pieces, bool plus_minus_one) {
  std::uniform_int_distribution<int> cut(-15, 15);
  std::uniform_int_distribution<int> count(1, max_pieces - 1);
  std::uniform_real_distribution<double> val(-2, 2);
  std::vector<int> cuts;
  const int k = count(rng);
  for (int i = 0; i < k; ++i) cuts.push_back(cut(rng));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<PiecewiseSymbol::Piece> pieces;
  int lo = -16;
  bool sign = rng() & 1;
  cuts.push_back(16);
  for (int c : cuts) {
    const Real v = plus_minus_one ? (sign ? 1 : -1) : static_cast<Real>(val(rng));
    pieces.push_back({PiMultiple(lo, 16), PiMultiple(c, 16), v});
    sign = !sign;
    lo = c;
  }
  return PiecewiseSymbol(std::move(pieces));
}

RankOneTerm random_psi(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> band(0, 3);
  std::normal_distribution<double> g;
  const int K = band(rng);
  std::vector<Complex> c(2 * K + 1);
  Real norm = 0;
  for (auto& x : c) {
    x = Complex(g(rng), g(rng));
    norm += std::norm(x);
  }
  for (auto& x : c) x /= std::sqrt(norm);
  return RankOneTerm(std::uniform_real_distribution<double>(0.1, 3)(rng), std::move(c));
}

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("moment invariants for random symbols and perturbations") {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 40; ++trial) {
    const auto sym = random_symbol(rng, 6, false);
    const std::int64_t n = std::uniform_int_distribution<int>(0, 20)(rng);
    const auto base = assemble_multiplication(sym, n);
    CHECK(check_invariants(base).ok());
    const auto pert = assemble_rank_one(sym, random_psi(rng), n);
    const auto inv = check_invariants(pert);
    CAPTURE(trial);
    CHECK(inv.ok());
  }
}

TEST_CASE("conjugate symmetry of Fourier coefficients") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sym = random_symbol(rng, 8, false);
    for (int k = 0; k < 40; ++k) CHECK(fourier_coefficient(sym, -k) == std::conj(fourier_coefficient(sym, k)));
  }
}

TEST_CASE("Galerkin eigenvalues lie in the numerical range") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sym = random_symbol(rng, 6, false);
    const auto ev = galerkin_spectrum(assemble_multiplication(sym, 15));
    CHECK(ev.front() >= static_cast<double>(sym.min_value()) - 1e-12);
    CHECK(ev.back() <= static_cast<double>(sym.max_value()) + 1e-12);
  }
}

TEST_CASE("circle containment, pairing and root-pencil consistency") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pm = random_symbol(rng, 5, true);
    if (pm.values().size() < 2) continue;
    const auto m = assemble_multiplication(
        pm.transformed([&](Real v) { return v > 0 ? Real(2.5) : Real(-0.5); }),
        std::uniform_int_distribution<int>(1, 25)(rng));
    const auto s = second_order_spectrum(m);
    CAPTURE(trial);
    CHECK(circle_deviation(s, {1, 0}, 1.5) <= 1e-8);
    const double normB = static_cast<double>(m.B.cast<std::complex<double>>().operatorNorm());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Point z = s.points[i];
      CHECK(std::abs(s.points[s.partner[i]] - std::conj(z)) <= 1e-8 * std::max(1.0, std::abs(z)));
      CHECK(sigma(m, z) <= 1e-8 * (1 + std::norm(z)) * normB);
    }
  }
}

TEST_CASE("enclosure validity on models with known spectrum") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const auto sym = random_symbol(rng, 5, true);
    Model model;
    model.symbol = sym;
    model.perturbation = RankOneTerm::constant(std::uniform_real_distribution<double>(0.2, 2)(rng));
    const auto spec = model.spectrum();
    const auto s = second_order_spectrum(model.assemble(std::uniform_int_distribution<int>(2, 30)(rng)));
    for (const auto& e : enclosures(s)) {
      const bool hit = std::any_of(spec.begin(), spec.end(), [&](double x) { return e.contains(x, 1e-9); });
      CHECK(hit);
    }
  }
}

TEST_CASE("sigma is Lipschitz along segments") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  const auto t1 = testing_models::table1();
  const auto m = t1.assemble(8);
  const double normA = static_cast<double>(m.A.cast<std::complex<double>>().operatorNorm());
  for (int trial = 0; trial < 200; ++trial) {
    const Point z(u(rng), u(rng)), w = z + Point(u(rng), u(rng)) * 0.05;
    const double L = 2 * normA + std::abs(z) + std::abs(w) + 1e-9;
    CHECK(std::abs(sigma(m, z) - sigma(m, w)) <= L * std::abs(z - w));
  }
}

TEST_CASE("mean of Spec_2 equals the mean of the symbol") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 15; ++trial) {
    const auto sym = random_symbol(rng, 7, true);
    if (!sym.is_plus_minus_one()) continue;
    const auto st = szego_stats(sym, std::uniform_int_distribution<int>(0, 60)(rng), 0.1);
    CHECK(std::abs(st.mean - Point(st.symbol_mean, 0)) <= 1e-10);
    CHECK(st.frac_near_minus1 + st.frac_near_plus1 <= 1);
  }
}

TEST_CASE("convergence rows contain their eigenvalue") {
  for (const auto& model : {testing_models::table1(), testing_models::table2()}) {
    for (const auto& row : convergence_table(model, model.discrete_eigenvalues(), {10, 20})) {
      CHECK(row.lo <= row.lambda);
      CHECK(row.lambda <= row.hi);
      CHECK(row.lo <= row.hi);
    }
  }
}

TEST_CASE("CSV and JSON round-trip at the emitted precision") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int decimals : {6, 8, 12, 17}) {
    for (bool truncate : {false, true}) {
      const NumberFormat fmt{decimals, truncate};
      Document doc;
      auto& t = doc.add_table("v", {"i", "x"});
      std::vector<double> xs;
      for (int i = 0; i < 50; ++i) {
        xs.push_back(std::ldexp(u(rng), -std::uniform_int_distribution<int>(0, 12)(rng)));
        t.add({std::int64_t{i}, xs.back()});
      }
      std::ostringstream csv, json;
      write_csv(csv, doc, fmt);
      write_json(json, doc, fmt);
      const auto j = nlohmann::json::parse(json.str());
      std::istringstream lines(csv.str());
      std::string line;
      std::getline(lines, line);
      CHECK(line == "i,x");
      const double ulp = std::pow(10.0, -decimals);
      for (int i = 0; i < 50; ++i) {
        std::getline(lines, line);
        const double from_csv = std::stod(line.substr(line.find(',') + 1));
        const double from_json = j["v"][i]["x"].get<double>();
        const double expect = std::stod(format_fixed(xs[i], fmt));
        CHECK(from_csv == expect);
        CHECK(from_json == expect);
        CHECK(std::abs(from_csv - xs[i]) <= (truncate ? 1.0 : 0.5) * ulp + 1e-15);
      }
    }
  }
}

TEST_CASE("PiMultiple text round trip") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> num(-64, 64), den(1, 64);
  for (int trial = 0; trial < 200; ++trial) {
    const PiMultiple p(num(rng), den(rng));
    CHECK(PiMultiple::parse(p.str()) == p);
  }
}

}  // TEST_SUITE
