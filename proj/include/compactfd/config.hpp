#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "compactfd/analysis.hpp"
#include "compactfd/problem.hpp"
#include "compactfd/stepping.hpp"

namespace compactfd {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Flat "key = value" text; '#' starts a comment. Throws ConfigError on
/// malformed lines.
ConfigEntries parse_config_text(const std::string& text);
ConfigEntries read_config_file(const std::string& path);
/// "key=value" from a --set flag.
std::pair<std::string, std::string> parse_assignment(const std::string& text);

/// Fully resolved settings of one CLI invocation. Unset study lists fall back
/// to per-command defaults for the benchmark studies.
struct RunConfig {
  std::string problem = "fkpp";
  // problem parameters; unset values take the problem's defaults
  std::optional<double> diffusion, epsilon, alpha, beta, mu, d1, d2, velocity;
  std::string fkpp_boundary = "initial";
  std::string jacobian = "diagonal";
  std::string nonlinearity = "cubic";
  std::optional<double> x_left, x_right;

  std::size_t intervals = 64;
  std::optional<double> nu;
  std::optional<double> tau;
  std::optional<double> final_time;
  PredictorKind predictor = PredictorKind::AdamsBashforth;
  SweepOrdering ordering;
  std::optional<double> delta;
  std::size_t max_iterations = 10000;
  double omega = 1.0;

  std::optional<std::vector<std::size_t>> ns;
  std::size_t n_ref = 1024;
  std::optional<std::vector<double>> nus;
  std::optional<std::vector<double>> deltas;
  std::optional<std::vector<PredictorKind>> predictors;
  std::vector<double> targets{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::size_t repeats = 3;

  /// Applies entries in order; later entries win. Throws ConfigError on
  /// unknown keys, unparsable values, or when both nu and tau are set.
  static RunConfig from_entries(const ConfigEntries& entries);

  AnyProblem make_problem() const;
  /// Courant number for studies; nu defaults to 0.1. Throws if only tau is set.
  double study_nu() const;
  double stop_tolerance() const;
  RelaxationConfig relaxation() const;
  StudySettings study_settings() const;

  /// key=value pairs of every setting after defaults, for provenance files.
  ConfigEntries resolved() const;
};

}  // namespace compactfd
