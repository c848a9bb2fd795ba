#include "specpol/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "specpol/analysis.hpp"

namespace specpol {

namespace {

std::int64_t as_flag(bool b) { return b ? 1 : 0; }

std::string n_name(std::int64_t n) { return "n=" + std::to_string(n); }

// Re-raises numerical failures with the operator label and the index n.
template <class F>
auto at_n(const ExperimentConfig& cfg, std::int64_t n, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const NumericalError& e) {
    const std::string label = cfg.model.label.empty() ? "<unnamed>" : cfg.model.label;
    throw NumericalError("operator '" + label + "', n = " + std::to_string(n) + ": " + e.what());
  }
}

SecondOrderSpectrum spectrum_at(const ExperimentConfig& cfg, std::int64_t n) {
  return at_n(cfg, n, [&] { return second_order_spectrum(cfg.model.assemble(n), cfg.spectrum); });
}

void build_spec2(const ExperimentConfig& cfg, Document& doc) {
  for (const auto n : cfg.n_list) {
    auto& t = doc.add_table(n_name(n), {"re", "im"}, false);
    for (const auto& z : spectrum_at(cfg, n).points) t.add({z.real(), z.imag()});
  }
}

void build_enclose(const ExperimentConfig& cfg, Document& doc) {
  auto& t = doc.add_table("enclosures", {"n", "lo", "hi", "re", "im"});
  for (const auto n : cfg.n_list) {
    for (const auto& e : enclosures(spectrum_at(cfg, n), cfg.max_half_width)) {
      t.add({n, e.lo, e.hi, e.source.real(), e.source.imag()});
    }
  }
}

void build_table(const ExperimentConfig& cfg, Document& doc) {
  const auto lambdas = cfg.target_eigenvalues();
  if (lambdas.empty()) {
    throw ConfigError("lambda", "no target eigenvalue: give lambda or a rank-one perturbation with isolated eigenvalues");
  }
  std::vector<std::vector<ConvergenceRow>> rows(lambdas.size());
  for (const auto n : cfg.n_list) {
    const auto s = spectrum_at(cfg, n);
    for (std::size_t k = 0; k < lambdas.size(); ++k) rows[k].push_back(convergence_row(s, lambdas[k], n));
  }
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    auto& t = doc.add_table("lambda=" + format_fixed(lambdas[k], cfg.output.number_format()), {"n", "lo", "hi", "re_minus_lambda"});
    for (const auto& r : rows[k]) t.add({r.n, r.lo, r.hi, r.re_minus_lambda});
  }
}

void build_szego(const ExperimentConfig& cfg, Document& doc) {
  if (cfg.model.perturbation) throw ConfigError("operator.rank_one", "szego needs a pure multiplication operator");
  if (!cfg.model.symbol.is_plus_minus_one()) throw ConfigError("operator.symbol", "szego needs a symbol with values +-1");
  auto& t = doc.add_table("szego", {"n", "epsilon", "frac_near_minus1", "frac_near_plus1", "expected_minus",
                                    "expected_plus", "mean_re", "mean_im", "symbol_mean"});
  for (const auto n : cfg.n_list) {
    const auto st = szego_stats(spectrum_at(cfg, n), cfg.model.symbol, cfg.epsilon);
    t.add({n, st.epsilon, st.frac_near_minus1, st.frac_near_plus1, st.expected_minus, st.expected_plus,
           st.mean.real(), st.mean.imag(), st.symbol_mean});
  }
}

void build_galerkin(const ExperimentConfig& cfg, Document& doc) {
  PollutionOptions opts;
  opts.gap_delta = cfg.gap_delta;
  opts.match_tol = cfg.match_tol;
  if (cfg.max_half_width) opts.max_half_width = *cfg.max_half_width;
  opts.spectrum = cfg.spectrum;
  std::vector<PollutionRow> report;
  for (const auto n : cfg.n_list) {
    auto rows = at_n(cfg, n, [&] { return pollution_report(cfg.model, {n}, opts); });
    report.push_back(std::move(rows.front()));
  }
  auto& eig = doc.add_table("eigenvalues", {"n", "index", "value", "in_gap", "polluting"});
  auto& enc = doc.add_table("gap_enclosures", {"n", "lo", "hi", "spurious"});
  auto& sum = doc.add_table("summary", {"n", "galerkin_count", "gap_count", "polluting_count", "gap_enclosures",
                                        "spurious_enclosures"});
  for (const auto& r : report) {
    for (std::size_t k = 0; k < r.galerkin.size(); ++k) {
      const double x = r.galerkin[k];
      const bool in_gap = std::find(r.gap_eigenvalues.begin(), r.gap_eigenvalues.end(), x) != r.gap_eigenvalues.end();
      const bool polluting = std::find(r.polluting.begin(), r.polluting.end(), x) != r.polluting.end();
      eig.add({r.n, static_cast<std::int64_t>(k), x, as_flag(in_gap), as_flag(polluting)});
    }
    for (const auto& e : r.gap_enclosures) {
      const bool spurious = std::any_of(r.spurious_enclosures.begin(), r.spurious_enclosures.end(),
                                        [&](const Enclosure& s) { return s.lo == e.lo && s.hi == e.hi; });
      enc.add({r.n, e.lo, e.hi, as_flag(spurious)});
    }
    sum.add({r.n, static_cast<std::int64_t>(r.galerkin.size()), static_cast<std::int64_t>(r.gap_eigenvalues.size()),
             static_cast<std::int64_t>(r.polluting.size()), static_cast<std::int64_t>(r.gap_enclosures.size()),
             static_cast<std::int64_t>(r.spurious_enclosures.size())});
  }
}

void build_sigma_grid(const ExperimentConfig& cfg, Document& doc) {
  Table minima{"descent", {"n", "start_re", "start_im", "re", "im", "sigma", "iterations", "converged"}, {}, true};
  for (const auto n : cfg.n_list) {
    const MomentMatrices m = cfg.model.assemble(n);
    const SigmaGrid g = at_n(cfg, n, [&] { return sigma_grid(m, cfg.grid, cfg.grid_nx, cfg.grid_ny); });
    auto& t = doc.add_table(n_name(n), {"re", "im", "sigma"});
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const Point z = g.node(ix, iy);
        t.add({z.real(), z.imag(), g.at(ix, iy)});
      }
    }
    const Point start = g.argmin();
    try {
      const auto r = sigma_descent(m, start, cfg.descent);
      minima.add({n, start.real(), start.imag(), r.z.real(), r.z.imag(), r.sigma,
                  static_cast<std::int64_t>(r.iterations), std::int64_t{1}});
    } catch (const NoZeroFound& e) {
      minima.add({n, start.real(), start.imag(), e.last().real(), e.last().imag(), e.last_sigma(),
                  std::int64_t{-1}, std::int64_t{0}});
    }
  }
  doc.tables.push_back(std::move(minima));
}

void build_limits(const ExperimentConfig& cfg, Document& doc) {
  const auto scan = at_n(cfg, cfg.n_list.back(), [&] { return limiting_set_scan(cfg.model, cfg.n_list, cfg.spectrum); });
  const bool base = !scan.base_circle_distance.empty();
  std::vector<std::string> cols{"n", "circle_distance", "accumulated_circle_distance"};
  if (base) cols.push_back("base_circle_distance");
  auto& c = doc.add_table("circle", cols);
  for (std::size_t i = 0; i < scan.clouds.size(); ++i) {
    std::vector<Cell> row{scan.clouds[i].n, scan.circle_distance[i], scan.accumulated_circle_distance[i]};
    if (base) row.emplace_back(scan.base_circle_distance[i]);
    c.add(std::move(row));
  }
  auto& e = doc.add_table("eigenvalues", {"lambda", "n", "distance"});
  for (std::size_t k = 0; k < scan.lambdas.size(); ++k) {
    for (std::size_t i = 0; i < scan.clouds.size(); ++i) {
      e.add({scan.lambdas[k], scan.clouds[i].n, scan.lambda_distance[k][i]});
    }
  }
}

void build_check_h(const ExperimentConfig& cfg, Document& doc) {
  if (!cfg.model.perturbation) throw ConfigError("operator.rank_one", "check-h needs a rank-one perturbation");
  const auto lambdas = cfg.target_eigenvalues();
  if (lambdas.empty()) throw ConfigError("lambda", "no target eigenvalue");
  auto& t = doc.add_table("residuals", {"lambda", "n", "r1", "r2", "sigma"});
  for (const double l : lambdas) {
    const auto rows = at_n(cfg, cfg.n_list.back(), [&] { return condition_H_residuals(cfg.model, l, cfg.n_list); });
    for (const auto& r : rows) t.add({l, r.n, r.r1, r.r2, r.sigma});
  }
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"spec2",      "enclose", "table",  "szego",
                                              "galerkin",   "sigma-grid", "limits", "check-h"};
  return names;
}

Document build_document(const std::string& subcommand, const ExperimentConfig& cfg) {
  Document doc;
  if (subcommand == "spec2") build_spec2(cfg, doc);
  else if (subcommand == "enclose") build_enclose(cfg, doc);
  else if (subcommand == "table") build_table(cfg, doc);
  else if (subcommand == "szego") build_szego(cfg, doc);
  else if (subcommand == "galerkin") build_galerkin(cfg, doc);
  else if (subcommand == "sigma-grid") build_sigma_grid(cfg, doc);
  else if (subcommand == "limits") build_limits(cfg, doc);
  else if (subcommand == "check-h") build_check_h(cfg, doc);
  else throw ConfigError("subcommand", "unknown subcommand '" + subcommand + "'");
  return doc;
}

void write_document(std::ostream& os, const Document& doc, const OutputConfig& out) {
  if (out.format == OutputFormat::Json) write_json(os, doc, out.number_format());
  else write_csv(os, doc, out.number_format());
}

int run(const std::string& subcommand, const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Document doc = build_document(subcommand, cfg);
    write_document(out, doc, cfg.output);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int run(const std::string& subcommand, const RunOptions& opts, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(opts.config_path);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (opts.format) cfg.output.format = *opts.format;
  if (opts.n) {
    if (*opts.n < 0) {
      err << "config error: --n: must be >= 0\n";
      return kExitConfig;
    }
    cfg.n_list = {*opts.n};
  }
  if (!opts.out_path) return run(subcommand, cfg, out, err);

  std::ostringstream buffer;
  const int code = run(subcommand, cfg, buffer, err);
  if (code != kExitOk) return code;
  std::ofstream file(*opts.out_path, std::ios::binary | std::ios::trunc);
  file << buffer.str();
  file.close();
  if (!file) {
    err << "config error: cannot write output file '" << *opts.out_path << "'\n";
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace specpol
