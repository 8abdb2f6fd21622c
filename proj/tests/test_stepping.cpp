#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "compactfd/errors.hpp"
#include "compactfd/problems.hpp"
#include "compactfd/stepping.hpp"
#include "oracles.hpp"

using namespace compactfd;

namespace {

RelaxationConfig tight(double delta = 1e-14, SweepOrdering ordering = {}) {
  RelaxationConfig c;
  c.ordering = std::move(ordering);
  c.stop_tolerance = delta;
  return c;
}

Problem<double> heat(double diffusion, double left, double right) {
  Problem<double> p;
  p.name = "heat";
  p.diffusion = diffusion;
  p.nonlinearity = {[](const double&) { return 0.0; }, [](const double&) { return 0.0; }};
  p.initial = [](double x) { return std::sin(3.0 * x) + x * x; };
  p.boundary = BoundaryData<double>::values(left, right);
  p.x_left = 0.0;
  p.x_right = 1.0;
  return p;
}

template <class V>
double max_diff(const std::vector<V>& a, const std::vector<V>& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, magnitude(a[j] - b[j]));
  return worst;
}

/// Several steps of the library relaxation against the dense Newton oracle,
/// restarting both from the same state each step.
template <class V>
double worst_newton_gap(const Problem<V>& problem, double nu, std::size_t steps, PredictorKind predictor) {
  const Grid1D grid = problem.grid(8);
  const double tau = problem.tau_for(nu, grid.spacing());
  std::vector<V> u = sample_initial(problem, grid);
  double worst = 0.0;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = tau * static_cast<double>(n);
    auto [next, stats] = solve_step<V>(problem, grid, tau, u, t, predictor, tight(1e-14));
    EXPECT_TRUE(stats.converged);
    const auto ref = oracle::newton_step(problem, grid, u, t, tau);
    worst = std::max(worst, max_diff(next, ref));
    u = ref;
  }
  return worst;
}

}  // namespace

TEST(Predictor, Parsing) {
  EXPECT_EQ(parse_predictor("euler"), PredictorKind::Euler);
  EXPECT_EQ(parse_predictor("ab"), PredictorKind::AdamsBashforth);
  EXPECT_EQ(parse_predictor("adams_bashforth"), PredictorKind::AdamsBashforth);
  EXPECT_THROW(parse_predictor("rk4"), ConfigError);
}

TEST(SweepOrdering, ParsingRoundTrips) {
  for (const char* text : {"chess", "simultaneous", "forward_gs", "alternating_gs", "center_out", "out_center",
                           "blocked:4", "chess+forward_gs"}) {
    EXPECT_EQ(SweepOrdering::parse(text).to_string(), text);
  }
  EXPECT_EQ(SweepOrdering::parse("chess+blocked:2").cycle.size(), 2u);
  EXPECT_THROW(SweepOrdering::parse("spiral"), ConfigError);
  EXPECT_THROW(SweepOrdering::parse("blocked:0"), ConfigError);
  EXPECT_THROW(SweepOrdering::parse(""), ConfigError);
}

TEST(Oracle, LinearStepMatchesTridiagonalSolve) {
  for (double nu : {0.1, 0.8, 3.2, 50.0}) {
    for (std::size_t n : {2u, 3u, 8u, 33u}) {
      const auto p = heat(0.5, 0.25, 1.5);
      const Grid1D grid = p.grid(n);
      const double tau = p.tau_for(nu, grid.spacing());
      const auto u = sample_initial(p, grid);
      const auto [next, stats] = solve_step<double>(p, grid, tau, u, 0.0, PredictorKind::Euler, tight(1e-15));
      const auto direct = oracle::linear_step(u, nu, 0.25, 1.5);
      EXPECT_LE(max_diff(next, direct), 1e-12) << "nu=" << nu << " N=" << n;
    }
  }
}

TEST(Oracle, RelaxationMatchesNewtonForFkpp) {
  EXPECT_LE(worst_newton_gap(fkpp(), 0.1, 3, PredictorKind::AdamsBashforth), 1e-10);
  EXPECT_LE(worst_newton_gap(fkpp(), 0.8, 3, PredictorKind::Euler), 1e-10);
}

TEST(Oracle, HugeStepsAdmitSeveralRoots) {
  // At N = 8 and nu = 3.2 the step is tau ~ 12, far beyond 1/|F'|: the step
  // equations have more than one solution. Relaxation still lands on a root.
  const auto p = fkpp();
  const Grid1D grid = p.grid(8);
  const double tau = p.tau_for(3.2, grid.spacing());
  const auto u = sample_initial(p, grid);
  const auto relaxed = solve_step<double>(p, grid, tau, u, 0.0, PredictorKind::Euler, tight(1e-14)).first;
  const auto newton = oracle::newton_step(p, grid, u, 0.0, tau);
  EXPECT_LE(oracle::step_equations(p, u, relaxed, tau, grid.spacing()).lpNorm<Eigen::Infinity>(), 1e-12);
  EXPECT_LE(oracle::step_equations(p, u, newton, tau, grid.spacing()).lpNorm<Eigen::Infinity>(), 1e-12);
  EXPECT_GT(max_diff(relaxed, newton), 0.1);
}

TEST(Oracle, RelaxationMatchesNewtonForFhn) {
  EXPECT_LE(worst_newton_gap(fhn(), 0.1, 3, PredictorKind::AdamsBashforth), 1e-10);
  EXPECT_LE(worst_newton_gap(fhn({}, JacobianMode::Block), 1.6, 3, PredictorKind::Euler), 1e-10);
}

TEST(Oracle, RelaxationMatchesNewtonForNlse) {
  // Eight intervals on the default [-20, 20] would give h = 5; a narrower
  // window keeps the soliton resolved.
  const auto p = nlse({}, NlseNonlinearity::Cubic, -5.0, 5.0);
  EXPECT_LE(worst_newton_gap(p, 0.1, 3, PredictorKind::AdamsBashforth), 1e-10);
  EXPECT_LE(worst_newton_gap(p, 0.4, 3, PredictorKind::Euler), 1e-10);
}

TEST(Orderings, AllAgreeWithinTheStoppingTolerance) {
  const double delta = 1e-12;
  const auto check = [&](const auto& problem, double nu, std::size_t n) {
    using V = typename std::decay_t<decltype(problem)>::Value;
    const Grid1D grid = problem.grid(n);
    const double tau = problem.tau_for(nu, grid.spacing());
    const auto u = sample_initial(problem, grid);
    const auto base = solve_step<V>(problem, grid, tau, u, 0.0, PredictorKind::AdamsBashforth, tight(delta)).first;
    for (const char* ordering : {"simultaneous", "forward_gs", "alternating_gs", "center_out", "out_center",
                                 "blocked:4", "chess+forward_gs"}) {
      const auto other = solve_step<V>(problem, grid, tau, u, 0.0, PredictorKind::AdamsBashforth,
                                       tight(delta, SweepOrdering::parse(ordering)))
                             .first;
      EXPECT_LE(max_diff(base, other), 100.0 * delta) << problem.name << ' ' << ordering;
    }
  };
  check(fkpp(), 0.1, 32);
  check(fkpp(), 3.2, 32);
  check(fhn(), 0.1, 16);
  check(nlse(), 0.1, 64);
}

TEST(Stepping, BoundaryNodesArePinned) {
  const auto p = nlse();
  const Grid1D grid = p.grid(32);
  const double tau = p.tau_for(0.1, grid.spacing());
  StepSolver<Complex> solver(p, grid, tau, PredictorKind::AdamsBashforth, tight(1e-10));
  auto u = sample_initial(p, grid);
  for (std::size_t n = 0; n < 4; ++n) {
    solver.advance(u, tau * static_cast<double>(n), n + 1);
    const auto [l, r] = p.boundary.at(tau * static_cast<double>(n + 1));
    EXPECT_EQ(u.front(), l);
    EXPECT_EQ(u.back(), r);
  }
}

TEST(Stepping, RestStatesStayPut) {
  auto one = fkpp();
  one.initial = [](double) { return 1.0; };
  one.boundary = BoundaryData<double>::values(1.0, 1.0);
  const auto a = integrate(one, one.grid(16), TimeGrid(0.05, 20), PredictorKind::Euler, tight(1e-14));
  for (double v : a.state.values<double>()) EXPECT_NEAR(v, 1.0, 1e-14);

  auto rest = fhn();
  rest.initial = [](double) { return Vec2{-1.0, -1.0}; };
  rest.boundary = BoundaryData<Vec2>::values({-1.0, -1.0}, {-1.0, -1.0});
  const auto b = integrate(rest, rest.grid(16), TimeGrid(0.01, 20), PredictorKind::AdamsBashforth, tight(1e-14));
  for (const Vec2& v : b.state.values<Vec2>()) {
    EXPECT_NEAR(v.u, -1.0, 1e-13);
    EXPECT_NEAR(v.w, -1.0, 1e-13);
  }
}

TEST(Predictor, LocalErrorOrders) {
  // With negligible diffusion each node follows the logistic ODE, whose exact
  // solution gives the one-step predictor error.
  const auto p = fkpp(1e-14, [](double) { return 0.2; }, FkppBoundary::InitialEndpoints);
  const Grid1D grid = p.grid(4);
  const auto logistic = [](double u0, double t) { return 1.0 / (1.0 + (1.0 - u0) / u0 * std::exp(-t)); };
  const auto error = [&](PredictorKind kind, double tau) {
    StepSolver<double> solver(p, grid, tau, kind, tight());
    const auto u = sample_initial(p, grid);
    return std::abs(solver.predict(u, 0.0)[2] - logistic(0.2, tau));
  };
  const double euler_ratio = error(PredictorKind::Euler, 0.02) / error(PredictorKind::Euler, 0.01);
  const double ab_ratio = error(PredictorKind::AdamsBashforth, 0.02) / error(PredictorKind::AdamsBashforth, 0.01);
  EXPECT_NEAR(euler_ratio, 4.0, 0.2);
  EXPECT_NEAR(ab_ratio, 8.0, 0.5);
}

TEST(Stepping, NonConvergenceCarriesTheLastCorrection) {
  const auto p = fkpp();
  RelaxationConfig c = tight(1e-30);
  c.max_iterations = 5;
  try {
    integrate(p, p.grid(16), TimeGrid(0.01, 3), PredictorKind::AdamsBashforth, c);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_EQ(e.step(), 1u);
    EXPECT_EQ(e.iterations(), 5u);
    EXPECT_GT(e.max_correction(), 0.0);
    EXPECT_NE(std::string(e.what()).find("final max correction"), std::string::npos);
  }
}

TEST(Stepping, ZeroStepsReturnsTheInitialState) {
  const auto p = fkpp();
  const Grid1D grid = p.grid(16);
  const auto r = integrate(p, grid, TimeGrid(0.01, 0), PredictorKind::Euler, tight());
  EXPECT_TRUE(r.steps.empty());
  EXPECT_EQ(r.state, GridFunction(sample_initial(p, grid)));
  EXPECT_EQ(r.average_iterations(), 0.0);
}

TEST(Stepping, IterationStatisticsAddUp) {
  const auto p = fkpp();
  const auto r = integrate(p, p.grid(16), TimeGrid(0.05, 10), PredictorKind::AdamsBashforth, tight(1e-12));
  std::size_t total = 0;
  for (const auto& s : r.steps) {
    EXPECT_TRUE(s.converged);
    EXPECT_LE(s.final_max_correction, 1e-12);
    EXPECT_EQ(s.predictor_applications, 2u);
    total += s.iterations;
  }
  EXPECT_EQ(r.total_iterations(), total);
  EXPECT_DOUBLE_EQ(r.average_iterations(), static_cast<double>(total) / 10.0);
}
