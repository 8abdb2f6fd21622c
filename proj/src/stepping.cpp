#include "compactfd/stepping.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "compactfd/errors.hpp"

namespace compactfd {

NonConvergence::NonConvergence(std::size_t step, std::size_t iterations, double max_correction)
    : Error([&] {
        std::ostringstream msg;
        msg.precision(3);
        msg << "relaxation did not converge at step " << step << " after " << iterations
            << " iterations; final max correction " << std::scientific << max_correction;
        return msg.str();
      }()),
      step_(step),
      iterations_(iterations),
      max_correction_(max_correction) {}

const char* to_string(PredictorKind kind) {
  return kind == PredictorKind::Euler ? "euler" : "ab";
}

PredictorKind parse_predictor(const std::string& text) {
  if (text == "euler") return PredictorKind::Euler;
  if (text == "ab" || text == "adams_bashforth") return PredictorKind::AdamsBashforth;
  throw ConfigError("unknown predictor '" + text + "' (expected euler or ab)");
}

namespace {

struct SweepName {
  SweepKind kind;
  const char* name;
};

constexpr SweepName kSweepNames[] = {
    {SweepKind::Simultaneous, "simultaneous"},
    {SweepKind::Chess, "chess"},
    {SweepKind::ForwardGaussSeidel, "forward_gs"},
    {SweepKind::AlternatingGaussSeidel, "alternating_gs"},
    {SweepKind::CenterOut, "center_out"},
    {SweepKind::OutCenter, "out_center"},
    {SweepKind::Blocked, "blocked"},
};

SweepPass parse_pass(const std::string& text) {
  std::string name = text;
  std::size_t parts = 1;
  if (auto colon = text.find(':'); colon != std::string::npos) {
    name = text.substr(0, colon);
    try {
      std::size_t used = 0;
      const long value = std::stol(text.substr(colon + 1), &used);
      if (used != text.size() - colon - 1 || value < 1) throw ConfigError("");
      parts = static_cast<std::size_t>(value);
    } catch (const std::exception&) {
      throw ConfigError("bad block count in sweep ordering '" + text + "'");
    }
    if (name != "blocked") throw ConfigError("only 'blocked' takes a part count: '" + text + "'");
  }
  for (const auto& entry : kSweepNames) {
    if (name == entry.name) return SweepPass{entry.kind, parts};
  }
  throw ConfigError("unknown sweep ordering '" + text + "'");
}

}  // namespace

SweepOrdering SweepOrdering::parse(const std::string& text) {
  SweepOrdering out;
  out.cycle.clear();
  std::size_t start = 0;
  while (true) {
    const auto plus = text.find('+', start);
    out.cycle.push_back(parse_pass(text.substr(start, plus - start)));
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  return out;
}

std::string SweepOrdering::to_string() const {
  std::string out;
  for (const auto& pass : cycle) {
    if (!out.empty()) out += '+';
    for (const auto& entry : kSweepNames) {
      if (entry.kind == pass.kind) out += entry.name;
    }
    if (pass.kind == SweepKind::Blocked) out += ":" + std::to_string(pass.parts);
  }
  return out;
}

template <class V>
StepSystem<V> StepSystem<V>::from(const Problem<V>& problem, double tau, double h) {
  StepSystem<V> s;
  s.courant = problem.courant_scalar(tau, h);
  s.coefficients = compact_coefficients(s.courant, tau);
  s.tau = tau;
  s.nonlinearity = &problem.nonlinearity;
  s.jacobian_mode = problem.jacobian_mode;
  return s;
}

template <class V>
std::vector<V> euler_predict(std::span<const V> u, const CoefOf<V>& nu, double tau, const Nonlinearity<V>& phi,
                             std::pair<V, V> boundary_next) {
  const std::size_t n = u.size();
  std::vector<V> out(n);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    out[j] = u[j] + nu * (u[j - 1] - 2.0 * u[j] + u[j + 1]) + tau * phi.value(u[j]);
  }
  out.front() = boundary_next.first;
  out.back() = boundary_next.second;
  return out;
}

template <class V>
std::vector<V> ab_predict(std::span<const V> u, const CoefOf<V>& nu, double tau, const Nonlinearity<V>& phi,
                          std::pair<V, V> boundary_half, std::pair<V, V> boundary_next) {
  const std::size_t n = u.size();
  std::vector<V> half(n);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    half[j] = u[j] + 0.5 * (nu * (u[j - 1] - 2.0 * u[j] + u[j + 1])) + (0.5 * tau) * phi.value(u[j]);
  }
  half.front() = boundary_half.first;
  half.back() = boundary_half.second;

  std::vector<V> out(n);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    out[j] = u[j] + nu * (half[j - 1] - 2.0 * half[j] + half[j + 1]) + tau * phi.value(half[j]);
  }
  out.front() = boundary_next.first;
  out.back() = boundary_next.second;
  return out;
}

namespace {

double linearized_step(double r, const double& b0, double q, double jac, double omega, JacobianMode,
                       const LinearizationLimits& limits, double& out) {
  out = correction(r, b0, q, jac, omega, limits);
  return std::abs(out);
}

double linearized_step(const Vec2& r, const Vec2& b0, double q, const Mat2& jac, double omega, JacobianMode mode,
                       const LinearizationLimits& limits, Vec2& out) {
  out = correction(r, b0, q, jac, omega, mode, limits);
  return magnitude(out);
}

double linearized_step(const Complex& r, const Complex& b0, double q, const Mat2& jac, double omega, JacobianMode,
                       const LinearizationLimits& limits, Complex& out) {
  out = correction(r, b0, q, jac, omega, limits);
  return magnitude(out);
}

}  // namespace

template <class V>
Relaxation<V>::Relaxation(const StepSystem<V>& system, std::span<const V> previous, std::vector<V> guess,
                          const RelaxationConfig& config)
    : system_(&system), config_(&config), guess_(std::move(guess)) {
  const std::size_t n = guess_.size();
  if (previous.size() != n || n < 3) throw IncompatibleGrids("relaxation: level sizes differ");
  const auto& c = system.coefficients;
  const auto& f = system.nonlinearity->value;

  std::vector<V> phi_prev(n);
  for (std::size_t j = 0; j < n; ++j) phi_prev[j] = f(previous[j]);
  phi_guess_.resize(n);
  for (std::size_t j = 0; j < n; ++j) phi_guess_[j] = f(guess_[j]);

  old_part_.assign(n, V{});
  for (std::size_t j = 1; j + 1 < n; ++j) {
    old_part_[j] = c.a1 * (previous[j - 1] + previous[j + 1]) + c.b1 * previous[j] +
                   c.p * (phi_prev[j - 1] + phi_prev[j + 1]) + c.q * phi_prev[j];
  }
  deltas_.resize(n);
}

template <class V>
V Relaxation<V>::residual_at(std::size_t j) const {
  const auto& c = system_->coefficients;
  return old_part_[j] + c.p * (phi_guess_[j - 1] + phi_guess_[j + 1]) + c.q * phi_guess_[j] -
         c.a0 * (guess_[j - 1] + guess_[j + 1]) - c.b0 * guess_[j];
}

template <class V>
double Relaxation<V>::max_residual() const {
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < guess_.size(); ++j) worst = std::max(worst, magnitude(residual_at(j)));
  return worst;
}

template <class V>
V Relaxation<V>::delta_at(std::size_t j, const V& left, const V& left_phi) const {
  const auto& c = system_->coefficients;
  const V r = old_part_[j] + c.p * (left_phi + phi_guess_[j + 1]) + c.q * phi_guess_[j] -
              c.a0 * (left + guess_[j + 1]) - c.b0 * guess_[j];
  V delta{};
  linearized_step(r, c.b0, c.q, system_->nonlinearity->jacobian(guess_[j]), config_->omega, system_->jacobian_mode,
                  config_->limits, delta);
  return delta;
}

template <class V>
double Relaxation<V>::apply(std::size_t j, const V& delta) {
  guess_[j] += delta;
  phi_guess_[j] = system_->nonlinearity->value(guess_[j]);
  return magnitude(delta);
}

template <class V>
double Relaxation<V>::ordered_pass(std::span<const std::size_t> order) {
  double worst = 0.0;
  for (const std::size_t j : order) {
    worst = std::max(worst, apply(j, delta_at(j, guess_[j - 1], phi_guess_[j - 1])));
  }
  return worst;
}

template <class V>
double Relaxation<V>::simultaneous_pass() {
  const std::size_t n = guess_.size();
  for (std::size_t j = 1; j + 1 < n; ++j) deltas_[j] = delta_at(j, guess_[j - 1], phi_guess_[j - 1]);
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < n; ++j) worst = std::max(worst, apply(j, deltas_[j]));
  return worst;
}

template <class V>
double Relaxation<V>::blocked_pass(std::size_t parts, bool shifted) {
  const std::size_t interior = guess_.size() - 2;
  parts = std::clamp<std::size_t>(parts, 1, interior);
  // Block starts in 1..N-1; the shifted division moves every cut by half a block.
  std::vector<std::size_t> starts{1};
  for (std::size_t k = 1; k < parts + (shifted ? 1 : 0); ++k) {
    const double cut = (static_cast<double>(k) - (shifted ? 0.5 : 0.0)) * static_cast<double>(interior) /
                       static_cast<double>(parts);
    const auto start = 1 + static_cast<std::size_t>(cut);
    if (start > starts.back() && start <= interior) starts.push_back(start);
  }
  // Left neighbours of each block as they were before the pass.
  std::vector<V> frozen(starts.size()), frozen_phi(starts.size());
  for (std::size_t b = 0; b < starts.size(); ++b) {
    frozen[b] = guess_[starts[b] - 1];
    frozen_phi[b] = phi_guess_[starts[b] - 1];
  }
  double worst = 0.0;
  for (std::size_t b = 0; b < starts.size(); ++b) {
    const std::size_t end = b + 1 < starts.size() ? starts[b + 1] : interior + 1;
    for (std::size_t j = starts[b]; j < end; ++j) {
      const bool first = j == starts[b];
      const V delta = delta_at(j, first ? frozen[b] : guess_[j - 1], first ? frozen_phi[b] : phi_guess_[j - 1]);
      worst = std::max(worst, apply(j, delta));
    }
  }
  return worst;
}

template <class V>
double Relaxation<V>::sweep(const SweepPass& pass, std::size_t iteration) {
  const std::size_t last = guess_.size() - 2;  // N - 1
  order_.clear();
  switch (pass.kind) {
    case SweepKind::Simultaneous:
      return simultaneous_pass();
    case SweepKind::Blocked:
      return blocked_pass(pass.parts, iteration % 2 == 1);
    case SweepKind::Chess:
      for (std::size_t j = 2; j <= last; j += 2) order_.push_back(j);
      for (std::size_t j = 1; j <= last; j += 2) order_.push_back(j);
      break;
    case SweepKind::ForwardGaussSeidel:
      for (std::size_t j = 1; j <= last; ++j) order_.push_back(j);
      break;
    case SweepKind::AlternatingGaussSeidel:
      for (std::size_t j = 1; j <= last; ++j) order_.push_back(iteration % 2 == 0 ? j : last + 1 - j);
      break;
    case SweepKind::OutCenter:
    case SweepKind::CenterOut:
      for (std::size_t lo = 1, hi = last; lo <= hi; ++lo, --hi) {
        order_.push_back(lo);
        if (hi != lo) order_.push_back(hi);
      }
      if (pass.kind == SweepKind::CenterOut) std::reverse(order_.begin(), order_.end());
      break;
  }
  return ordered_pass(order_);
}

template <class V>
std::pair<std::vector<V>, double> sweep(std::span<const V> guess, std::span<const V> previous,
                                        const StepSystem<V>& system, const RelaxationConfig& config,
                                        std::size_t iteration) {
  Relaxation<V> relax(system, previous, std::vector<V>(guess.begin(), guess.end()), config);
  const double worst = relax.sweep(config.ordering.pass_for(iteration), iteration);
  return {relax.take_guess(), worst};
}

template <class V>
StepSolver<V>::StepSolver(const Problem<V>& problem, const Grid1D& grid, double tau, PredictorKind predictor,
                          RelaxationConfig config)
    : problem_(&problem),
      grid_(grid),
      system_(StepSystem<V>::from(problem, tau, grid.spacing())),
      predictor_(predictor),
      config_(std::move(config)) {
  if (!(config_.stop_tolerance > 0.0)) throw ConfigError("stop tolerance must be positive");
  if (config_.max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (config_.ordering.cycle.empty()) throw ConfigError("sweep ordering is empty");
}

template <class V>
std::vector<V> StepSolver<V>::predict(std::span<const V> u, double t_n) const {
  const double tau = system_.tau;
  const auto& bc = problem_->boundary;
  if (predictor_ == PredictorKind::Euler) {
    return euler_predict(u, system_.courant, tau, problem_->nonlinearity, bc.at(t_n + tau));
  }
  return ab_predict(u, system_.courant, tau, problem_->nonlinearity, bc.at(t_n + 0.5 * tau), bc.at(t_n + tau));
}

template <class V>
StepStats StepSolver<V>::advance(std::vector<V>& u, double t_n, std::size_t step_index) const {
  StepStats stats;
  stats.predictor_applications = predictor_ == PredictorKind::Euler ? 1 : 2;
  Relaxation<V> relax(system_, u, predict(u, t_n), config_);
  try {
    while (stats.iterations < config_.max_iterations) {
      stats.final_max_correction = relax.sweep(config_.ordering.pass_for(stats.iterations), stats.iterations);
      ++stats.iterations;
      if (!std::isfinite(stats.final_max_correction)) break;
      if (stats.final_max_correction <= config_.stop_tolerance) {
        stats.converged = true;
        break;
      }
    }
  } catch (const SingularLinearization& e) {
    throw SingularLinearization(std::string(e.what()) + " at step " + std::to_string(step_index));
  }
  if (!stats.converged) throw NonConvergence(step_index, stats.iterations, stats.final_max_correction);
  u = relax.take_guess();
  return stats;
}

template <class V>
std::pair<std::vector<V>, StepStats> solve_step(const Problem<V>& problem, const Grid1D& grid, double tau,
                                                std::span<const V> u, double t_n, PredictorKind predictor,
                                                const RelaxationConfig& config) {
  StepSolver<V> solver(problem, grid, tau, predictor, config);
  std::vector<V> state(u.begin(), u.end());
  auto stats = solver.advance(state, t_n);
  return {std::move(state), stats};
}

std::size_t RunReport::total_iterations() const {
  std::size_t total = 0;
  for (const auto& s : steps) total += s.iterations;
  return total;
}

double RunReport::average_iterations() const {
  return steps.empty() ? 0.0 : static_cast<double>(total_iterations()) / static_cast<double>(steps.size());
}

template <class V>
RunReport integrate(const Problem<V>& problem, const Grid1D& grid, const TimeGrid& time, PredictorKind predictor,
                    const RelaxationConfig& config) {
  std::vector<V> u = sample_initial(problem, grid);
  StepSolver<V> solver(problem, grid, time.tau(), predictor, config);
  std::vector<StepStats> steps;
  steps.reserve(time.steps());

  const auto start = std::chrono::steady_clock::now();
  for (std::size_t n = 0; n < time.steps(); ++n) {
    steps.push_back(solver.advance(u, time.time(n), n + 1));
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  return RunReport{GridFunction(std::move(u)), grid, time, std::move(steps), elapsed.count()};
}

RunReport integrate(const AnyProblem& problem, const Grid1D& grid, const TimeGrid& time, PredictorKind predictor,
                    const RelaxationConfig& config) {
  return std::visit([&](const auto& p) { return integrate(p, grid, time, predictor, config); }, problem);
}

#define COMPACTFD_INSTANTIATE(V)                                                                                   \
  template struct StepSystem<V>;                                                                                   \
  template class Relaxation<V>;                                                                                    \
  template class StepSolver<V>;                                                                                    \
  template std::vector<V> euler_predict<V>(std::span<const V>, const CoefOf<V>&, double, const Nonlinearity<V>&,   \
                                           std::pair<V, V>);                                                       \
  template std::vector<V> ab_predict<V>(std::span<const V>, const CoefOf<V>&, double, const Nonlinearity<V>&,      \
                                        std::pair<V, V>, std::pair<V, V>);                                         \
  template std::pair<std::vector<V>, double> sweep<V>(std::span<const V>, std::span<const V>,                      \
                                                      const StepSystem<V>&, const RelaxationConfig&, std::size_t); \
  template std::pair<std::vector<V>, StepStats> solve_step<V>(const Problem<V>&, const Grid1D&, double,            \
                                                              std::span<const V>, double, PredictorKind,           \
                                                              const RelaxationConfig&);                            \
  template RunReport integrate<V>(const Problem<V>&, const Grid1D&, const TimeGrid&, PredictorKind,                \
                                  const RelaxationConfig&);

COMPACTFD_INSTANTIATE(double)
COMPACTFD_INSTANTIATE(Vec2)
COMPACTFD_INSTANTIATE(Complex)

#undef COMPACTFD_INSTANTIATE

}  // namespace compactfd
