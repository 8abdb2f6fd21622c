#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "compactfd/mesh.hpp"
#include "compactfd/problem.hpp"
#include "compactfd/scheme.hpp"

namespace compactfd {

/// Explicit first guess for the implicit step.
enum class PredictorKind {
  Euler,           ///< forward Euler step
  AdamsBashforth,  ///< half-step Euler followed by a full step at the midpoint
};

const char* to_string(PredictorKind kind);
/// Accepts "euler", "ab" / "adams_bashforth". Throws ConfigError otherwise.
PredictorKind parse_predictor(const std::string& text);

enum class SweepKind {
  Simultaneous,            ///< all corrections from the frozen guess, applied together
  Chess,                   ///< even nodes, then odd nodes using the updated evens
  ForwardGaussSeidel,      ///< j = 1 .. N-1 using updated neighbours immediately
  AlternatingGaussSeidel,  ///< forward on even-numbered passes, backward on odd ones
  CenterOut,               ///< from the middle of the segment towards both ends
  OutCenter,               ///< from both ends towards the middle
  Blocked,                 ///< forward Gauss-Seidel inside each of `parts` blocks, blocks see frozen neighbours
};

struct SweepPass {
  SweepKind kind = SweepKind::Chess;
  /// Block count for SweepKind::Blocked; block boundaries shift by half a
  /// block on odd-numbered passes.
  std::size_t parts = 1;
};

/// Ordering of pointwise corrections. A composite ordering cycles through its
/// passes, one per relaxation iteration.
struct SweepOrdering {
  std::vector<SweepPass> cycle{SweepPass{}};

  static SweepOrdering single(SweepKind kind, std::size_t parts = 1) { return {{SweepPass{kind, parts}}}; }
  /// Parses "chess", "simultaneous", "forward_gs", "alternating_gs",
  /// "center_out", "out_center", "blocked:K", and '+'-joined composites.
  static SweepOrdering parse(const std::string& text);
  std::string to_string() const;

  const SweepPass& pass_for(std::size_t iteration) const { return cycle[iteration % cycle.size()]; }
};

struct RelaxationConfig {
  SweepOrdering ordering;
  /// Stop once max_j |delta_j| <= stop_tolerance.
  double stop_tolerance = 1e-12;
  std::size_t max_iterations = 10000;
  double omega = 1.0;
  LinearizationLimits limits;
};

struct StepStats {
  std::size_t iterations = 0;
  double final_max_correction = 0.0;
  bool converged = false;
  /// Explicit predictor applications (1 for Euler, 2 for Adams-Bashforth).
  std::size_t predictor_applications = 0;
};

/// Everything the kernels need about one discretized problem at fixed tau, h.
template <class V>
struct StepSystem {
  CompactCoefficients<CoefOf<V>> coefficients;
  CoefOf<V> courant{};
  double tau = 0.0;
  const Nonlinearity<V>* nonlinearity = nullptr;
  JacobianMode jacobian_mode = JacobianMode::Diagonal;

  static StepSystem from(const Problem<V>& problem, double tau, double h);
};

/// u_hat[j] = u[j] + nu (u[j-1] - 2u[j] + u[j+1]) + tau F(u[j]) on interior
/// nodes; boundary nodes from `boundary_next`.
template <class V>
std::vector<V> euler_predict(std::span<const V> u, const CoefOf<V>& nu, double tau, const Nonlinearity<V>& phi,
                             std::pair<V, V> boundary_next);

/// Two-stage explicit predictor: an Euler half step (nu/2, tau/2) to the
/// midpoint, then a full step from u with the spatial operator and source
/// evaluated at the midpoint values.
template <class V>
std::vector<V> ab_predict(std::span<const V> u, const CoefOf<V>& nu, double tau, const Nonlinearity<V>& phi,
                          std::pair<V, V> boundary_half, std::pair<V, V> boundary_next);

/// Working state of the relaxation for one time step. Keeps the old-level part
/// of every equation and F at the current guess so each node visit evaluates
/// the source once.
template <class V>
class Relaxation {
 public:
  Relaxation(const StepSystem<V>& system, std::span<const V> previous, std::vector<V> guess,
             const RelaxationConfig& config);

  /// One full pass in the given ordering. Returns max_j |delta_j|.
  double sweep(const SweepPass& pass, std::size_t iteration);

  /// Residual of equation j at the current guess.
  V residual_at(std::size_t j) const;
  /// max_j |residual_j| over interior nodes.
  double max_residual() const;

  const std::vector<V>& guess() const { return guess_; }
  std::vector<V> take_guess() { return std::move(guess_); }

 private:
  V delta_at(std::size_t j, const V& left, const V& left_phi) const;
  double apply(std::size_t j, const V& delta);
  double ordered_pass(std::span<const std::size_t> order);
  double simultaneous_pass();
  double blocked_pass(std::size_t parts, bool shifted);

  const StepSystem<V>* system_;
  const RelaxationConfig* config_;
  std::vector<V> guess_;
  std::vector<V> phi_guess_;
  std::vector<V> old_part_;
  std::vector<V> deltas_;
  std::vector<std::size_t> order_;
};

/// One relaxation pass; returns the updated guess and max |delta|.
template <class V>
std::pair<std::vector<V>, double> sweep(std::span<const V> guess, std::span<const V> previous,
                                        const StepSystem<V>& system, const RelaxationConfig& config,
                                        std::size_t iteration = 0);

/// Advances the state of one problem by single time steps.
template <class V>
class StepSolver {
 public:
  StepSolver(const Problem<V>& problem, const Grid1D& grid, double tau, PredictorKind predictor,
             RelaxationConfig config);

  /// Replaces `u` (the state at t_n) with the converged state at t_n + tau.
  /// Throws NonConvergence (carrying `step_index`, 1-based in integrate) or SingularLinearization.
  StepStats advance(std::vector<V>& u, double t_n, std::size_t step_index = 0) const;

  /// Explicit first guess for the step starting at t_n.
  std::vector<V> predict(std::span<const V> u, double t_n) const;

  const StepSystem<V>& system() const { return system_; }
  const RelaxationConfig& config() const { return config_; }

 private:
  const Problem<V>* problem_;
  Grid1D grid_;
  StepSystem<V> system_;
  PredictorKind predictor_;
  RelaxationConfig config_;
};

template <class V>
std::pair<std::vector<V>, StepStats> solve_step(const Problem<V>& problem, const Grid1D& grid, double tau,
                                                std::span<const V> u, double t_n, PredictorKind predictor,
                                                const RelaxationConfig& config);

struct RunReport {
  GridFunction state;
  Grid1D grid;
  TimeGrid time;
  std::vector<StepStats> steps;
  /// Monotonic-clock duration of the time loop only.
  double wall_seconds = 0.0;

  std::size_t total_iterations() const;
  double average_iterations() const;
};

/// M = time.steps() successive steps from the sampled initial data.
template <class V>
RunReport integrate(const Problem<V>& problem, const Grid1D& grid, const TimeGrid& time, PredictorKind predictor,
                    const RelaxationConfig& config);

RunReport integrate(const AnyProblem& problem, const Grid1D& grid, const TimeGrid& time, PredictorKind predictor,
                    const RelaxationConfig& config);

}  // namespace compactfd
