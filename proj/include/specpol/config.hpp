#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "specpol/analysis.hpp"
#include "specpol/engine.hpp"
#include "specpol/output.hpp"

namespace specpol {

/// Malformed or invalid experiment configuration. `where` is either
/// "line L, column C" (syntax) or a field path such as "operator.symbol.E[0][1]".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

enum class OutputFormat { Csv, Json };

struct OutputConfig {
  OutputFormat format = OutputFormat::Csv;
  int precision = 8;
  bool truncate = false;

  NumberFormat number_format() const { return {precision, truncate}; }
};

struct ExperimentConfig {
  Model model;
  std::vector<std::int64_t> n_list;
  std::vector<double> lambdas;  // explicit targets; empty means "discrete eigenvalues"
  double epsilon = 0.1;
  double gap_delta = 0.05;
  double match_tol = 1e-2;
  std::optional<double> max_half_width;
  SpectrumOptions spectrum;
  DescentOptions descent;
  GridRect grid{-1.5, 1.5, -1.5, 1.5};
  int grid_nx = 61;
  int grid_ny = 61;
  OutputConfig output;

  /// lambdas if given, else the model's discrete eigenvalues.
  std::vector<double> target_eigenvalues() const;
};

/// Parses the JSON experiment schema; see configs/ for examples.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

OutputFormat format_from_string(const std::string& s);

}  // namespace specpol
