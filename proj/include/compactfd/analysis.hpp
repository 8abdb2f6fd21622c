#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "compactfd/mesh.hpp"
#include "compactfd/problem.hpp"
#include "compactfd/stepping.hpp"

namespace compactfd {

/// max_j |f_j| over all nodes (Euclidean modulus per node).
double cheb_norm(const GridFunction& f);
/// sqrt(h sum_j w_j |f_j|^2) with trapezoid weights (w = 1/2 at both ends).
double l2_norm(const GridFunction& f, double h);

struct ErrorReport {
  double c_norm = 0.0;
  double l2_norm = 0.0;
  /// Per-component C and L2 errors for real pairs; a single entry (equal to
  /// the totals) for scalar and complex states.
  std::vector<double> component_c;
  std::vector<double> component_l2;
};

/// Norms of `approx - reference` on a grid with spacing h.
ErrorReport error_report(const GridFunction& approx, const GridFunction& reference, double h);

/// log2(coarse / fine); empty unless both errors are positive.
std::optional<double> observed_rate(double coarse_error, double fine_error);

/// (16 fine(2j) - coarse(j)) / 15 on the coarse nodes. Both runs must share
/// the Courant number. Throws IncompatibleGrids on mismatched sizes or kinds.
GridFunction richardson(const GridFunction& coarse, const GridFunction& fine);

/// Settings shared by every integration in a study.
struct StudySettings {
  PredictorKind predictor = PredictorKind::AdamsBashforth;
  RelaxationConfig relaxation;
  /// Overrides the problem's final time when set.
  std::optional<double> final_time;
};

double final_time_of(const AnyProblem& problem, const StudySettings& settings);

/// Final state of one run at Courant number nu on N intervals.
RunReport run_regime(const AnyProblem& problem, std::size_t intervals, double nu, const StudySettings& settings);

/// Ground truth for error measurements: the analytic solution when the
/// problem has one, otherwise a fine-grid run at the same Courant number.
class ReferenceSolution {
 public:
  /// Fine-grid reference. When `check_self_difference` is set, also runs on
  /// N_ref/2 and records max |u_ref - u_ref/2| on the coarser nodes.
  static ReferenceSolution fine_grid(const AnyProblem& problem, std::size_t n_ref, double nu,
                                     const StudySettings& settings, bool check_self_difference = true);
  static ReferenceSolution analytic(const AnyProblem& problem, double final_time);
  /// Analytic when available, fine grid otherwise.
  static ReferenceSolution for_problem(const AnyProblem& problem, std::size_t n_ref, double nu,
                                       const StudySettings& settings, bool check_self_difference = true);

  bool is_analytic() const { return analytic_.has_value(); }
  std::size_t intervals() const { return n_ref_; }
  /// NaN unless computed.
  double self_difference() const { return self_difference_; }
  const GridFunction& state() const { return state_; }

  /// Reference values on the nodes of `grid` (restriction of the fine state or
  /// sampling of the analytic solution).
  GridFunction on(const Grid1D& grid) const;

 private:
  std::optional<AnyProblem> analytic_;
  double final_time_ = 0.0;
  std::size_t n_ref_ = 0;
  GridFunction state_;
  double self_difference_ = 0.0;
};

struct ConvergenceRow {
  std::size_t intervals = 0;
  ErrorReport error;
  /// Rate of the C-norm error against the previous (coarser) row.
  std::optional<double> rate;
  /// Per-component rates; mean_rate is their average.
  std::vector<std::optional<double>> component_rates;
  std::optional<double> mean_rate;
};

/// Attaches rates to consecutive rows (finer row carries the rate).
void attach_rates(std::vector<ConvergenceRow>& rows);

/// Base-scheme errors at the final time for each N (strictly doubling).
std::vector<ConvergenceRow> convergence_table(const AnyProblem& problem, double nu, const std::vector<std::size_t>& ns,
                                              const StudySettings& settings, const ReferenceSolution& reference);

/// Errors of the Richardson combination of runs on N and 2N, on the N grid.
std::vector<ConvergenceRow> richardson_table(const AnyProblem& problem, double nu, const std::vector<std::size_t>& ns,
                                             const StudySettings& settings, const ReferenceSolution& reference);

struct IterationCell {
  PredictorKind predictor = PredictorKind::Euler;
  double nu = 0.0;
  double delta = 0.0;
  std::size_t intervals = 0;
  double average_iterations = 0.0;
};

/// Average relaxation iterations per step for every (predictor, nu, delta, N).
std::vector<IterationCell> iteration_study(const AnyProblem& problem, const std::vector<PredictorKind>& predictors,
                                           const std::vector<double>& nus, const std::vector<std::size_t>& ns,
                                           const std::vector<double>& deltas, const StudySettings& settings);

struct ErrorRecord {
  std::size_t intervals = 0;
  PredictorKind predictor = PredictorKind::Euler;
  double nu = 0.0;
  double delta = 0.0;
  /// C-norm error; NaN when the run failed to converge.
  double error = 0.0;
  bool converged = true;
};

/// One record per (N, predictor, nu, delta) regime.
std::vector<ErrorRecord> error_vs_delta_study(const AnyProblem& problem, const std::vector<std::size_t>& ns,
                                              const std::vector<double>& nus, const std::vector<double>& deltas,
                                              const std::vector<PredictorKind>& predictors,
                                              const StudySettings& settings, const ReferenceSolution& reference);

struct RegimeGrid {
  std::vector<PredictorKind> predictors;
  std::vector<std::size_t> ns;
  std::vector<double> deltas;
  std::vector<double> nus;
};

struct RegimeResult {
  double target_error = 0.0;
  PredictorKind predictor = PredictorKind::Euler;
  std::size_t intervals = 0;
  double delta = 0.0;
  double nu = 0.0;
  double error = 0.0;
  /// Best of `repeats` timed runs.
  double wall_seconds = 0.0;
  double average_iterations = 0.0;
  std::size_t total_iterations = 0;
};

/// Every regime of the grid, measured once for error and timed best-of-k.
/// Regimes whose relaxation fails are left out.
std::vector<RegimeResult> measure_regimes(const AnyProblem& problem, const RegimeGrid& grid,
                                          const StudySettings& settings, const ReferenceSolution& reference,
                                          std::size_t repeats = 3);

/// For each target, the fastest measured regime whose error is <= target
/// (ties broken by fewer total sweeps). Targets nothing reaches are omitted.
std::vector<RegimeResult> select_efficient(const std::vector<RegimeResult>& measured,
                                           const std::vector<double>& targets);

std::vector<RegimeResult> efficiency_search(const AnyProblem& problem, const std::vector<double>& targets,
                                            const RegimeGrid& grid, const StudySettings& settings,
                                            const ReferenceSolution& reference, std::size_t repeats = 3);

}  // namespace compactfd
