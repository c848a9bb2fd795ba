#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "specpol/config.hpp"
#include "specpol/output.hpp"

namespace specpol {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

const std::vector<std::string>& subcommands();

struct RunOptions {
  std::string config_path;
  std::optional<std::string> out_path;  // stdout when empty
  std::optional<OutputFormat> format;
  std::optional<std::int64_t> n;  // replaces n_list by {n}
};

/// Computes the result tables of one subcommand. Throws ConfigError /
/// InvalidArgument for unusable input, NumericalError (tagged with operator
/// label and n) when the numerics fail.
Document build_document(const std::string& subcommand, const ExperimentConfig& cfg);

void write_document(std::ostream& os, const Document& doc, const OutputConfig& out);

/// Writes the document to `out`, diagnostics to `err`; returns an exit code.
int run(const std::string& subcommand, const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
/// Loads the config, applies overrides, writes to opts.out_path or `out`.
int run(const std::string& subcommand, const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace specpol
