#include "compactfd/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "compactfd/errors.hpp"

namespace compactfd {

namespace {

/// Runs task(i) for i in [0, count) on up to hardware_concurrency threads.
/// The first exception thrown by any task is rethrown after all workers stop.
template <class Task>
void fan_out(std::size_t count, Task task) {
  const std::size_t workers = std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

const Grid1D grid_of(const AnyProblem& problem, std::size_t intervals) {
  return std::visit([&](const auto& p) { return p.grid(intervals); }, problem);
}

}  // namespace

double cheb_norm(const GridFunction& f) {
  double worst = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) worst = std::max(worst, f.modulus(j));
  return worst;
}

double l2_norm(const GridFunction& f, double h) {
  double sum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double weight = (j == 0 || j + 1 == f.size()) ? 0.5 : 1.0;
    const double m = f.modulus(j);
    sum += weight * m * m;
  }
  return std::sqrt(h * sum);
}

ErrorReport error_report(const GridFunction& approx, const GridFunction& reference, double h) {
  const GridFunction diff = difference(approx, reference);
  ErrorReport report;
  report.c_norm = cheb_norm(diff);
  report.l2_norm = l2_norm(diff, h);
  if (diff.kind() == ComponentKind::RealPair) {
    for (int c = 0; c < 2; ++c) {
      std::vector<double> part(diff.size());
      for (std::size_t j = 0; j < part.size(); ++j) part[j] = diff.component(j, c);
      const GridFunction g(std::move(part));
      report.component_c.push_back(cheb_norm(g));
      report.component_l2.push_back(l2_norm(g, h));
    }
  } else {
    report.component_c = {report.c_norm};
    report.component_l2 = {report.l2_norm};
  }
  return report;
}

std::optional<double> observed_rate(double coarse_error, double fine_error) {
  if (!(coarse_error > 0.0) || !(fine_error > 0.0)) return std::nullopt;
  return std::log2(coarse_error / fine_error);
}

GridFunction richardson(const GridFunction& coarse, const GridFunction& fine) {
  if (coarse.kind() != fine.kind() || fine.size() != 2 * coarse.size() - 1) {
    throw IncompatibleGrids("richardson: fine grid must have exactly twice the intervals of the coarse grid");
  }
  return std::visit(
      [&](const auto& vc) -> GridFunction {
        using V = typename std::decay_t<decltype(vc)>::value_type;
        auto vf = fine.values<V>();
        std::vector<V> out(vc.size());
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = (1.0 / 15.0) * (16.0 * vf[2 * j] - vc[j]);
        return GridFunction(std::move(out));
      },
      coarse.storage());
}

double final_time_of(const AnyProblem& problem, const StudySettings& settings) {
  if (settings.final_time) return *settings.final_time;
  return std::visit([](const auto& p) { return p.final_time; }, problem);
}

RunReport run_regime(const AnyProblem& problem, std::size_t intervals, double nu, const StudySettings& settings) {
  const double final_time = final_time_of(problem, settings);
  return std::visit(
      [&](const auto& p) {
        const Grid1D grid = p.grid(intervals);
        const TimeGrid time = TimeGrid::covering(final_time, p.tau_for(nu, grid.spacing()));
        return integrate(p, grid, time, settings.predictor, settings.relaxation);
      },
      problem);
}

ReferenceSolution ReferenceSolution::fine_grid(const AnyProblem& problem, std::size_t n_ref, double nu,
                                               const StudySettings& settings, bool check_self_difference) {
  ReferenceSolution ref;
  ref.final_time_ = final_time_of(problem, settings);
  ref.n_ref_ = n_ref;
  ref.state_ = run_regime(problem, n_ref, nu, settings).state;
  ref.self_difference_ = std::numeric_limits<double>::quiet_NaN();
  if (check_self_difference) {
    const GridFunction half = run_regime(problem, n_ref / 2, nu, settings).state;
    ref.self_difference_ = cheb_norm(difference(restrict_to_coarse(ref.state_), half));
  }
  return ref;
}

ReferenceSolution ReferenceSolution::analytic(const AnyProblem& problem, double final_time) {
  const bool has_exact = std::visit([](const auto& p) { return static_cast<bool>(p.exact); }, problem);
  if (!has_exact) throw ConfigError("problem has no analytic solution");
  ReferenceSolution ref;
  ref.analytic_ = problem;
  ref.final_time_ = final_time;
  ref.self_difference_ = 0.0;
  return ref;
}

ReferenceSolution ReferenceSolution::for_problem(const AnyProblem& problem, std::size_t n_ref, double nu,
                                                 const StudySettings& settings, bool check_self_difference) {
  const bool has_exact = std::visit([](const auto& p) { return static_cast<bool>(p.exact); }, problem);
  if (has_exact) return analytic(problem, final_time_of(problem, settings));
  return fine_grid(problem, n_ref, nu, settings, check_self_difference);
}

GridFunction ReferenceSolution::on(const Grid1D& grid) const {
  if (analytic_) {
    return std::visit([&](const auto& p) { return GridFunction(sample_exact(p, grid, final_time_)); }, *analytic_);
  }
  if (grid.intervals() == 0 || n_ref_ % grid.intervals() != 0) {
    throw IncompatibleGrids("reference on N=" + std::to_string(n_ref_) + " does not contain the N=" +
                            std::to_string(grid.intervals()) + " nodes");
  }
  return restrict_by(state_, n_ref_ / grid.intervals());
}

void attach_rates(std::vector<ConvergenceRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& row = rows[i];
    row.rate.reset();
    row.mean_rate.reset();
    row.component_rates.assign(row.error.component_c.size(), std::nullopt);
    if (i == 0) continue;
    const auto& prev = rows[i - 1];
    row.rate = observed_rate(prev.error.c_norm, row.error.c_norm);
    double sum = 0.0;
    bool all = true;
    for (std::size_t c = 0; c < row.component_rates.size(); ++c) {
      row.component_rates[c] = observed_rate(prev.error.component_c[c], row.error.component_c[c]);
      if (row.component_rates[c]) {
        sum += *row.component_rates[c];
      } else {
        all = false;
      }
    }
    if (all && !row.component_rates.empty()) row.mean_rate = sum / static_cast<double>(row.component_rates.size());
  }
}

namespace {

void require_doubling(const std::vector<std::size_t>& ns) {
  for (std::size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] != 2 * ns[i - 1]) throw ConfigError("N list must be strictly doubling");
  }
}

}  // namespace

std::vector<ConvergenceRow> convergence_table(const AnyProblem& problem, double nu, const std::vector<std::size_t>& ns,
                                              const StudySettings& settings, const ReferenceSolution& reference) {
  require_doubling(ns);
  std::vector<ConvergenceRow> rows(ns.size());
  fan_out(ns.size(), [&](std::size_t i) {
    const RunReport run = run_regime(problem, ns[i], nu, settings);
    rows[i].intervals = ns[i];
    rows[i].error = error_report(run.state, reference.on(run.grid), run.grid.spacing());
  });
  attach_rates(rows);
  return rows;
}

std::vector<ConvergenceRow> richardson_table(const AnyProblem& problem, double nu, const std::vector<std::size_t>& ns,
                                             const StudySettings& settings, const ReferenceSolution& reference) {
  require_doubling(ns);
  // Runs on every N and on 2 * N_last; neighbours share the doubled runs.
  std::vector<std::size_t> all = ns;
  if (!ns.empty()) all.push_back(2 * ns.back());
  std::vector<GridFunction> states(all.size());
  fan_out(all.size(), [&](std::size_t i) { states[i] = run_regime(problem, all[i], nu, settings).state; });

  std::vector<ConvergenceRow> rows(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const Grid1D grid = grid_of(problem, ns[i]);
    rows[i].intervals = ns[i];
    rows[i].error = error_report(richardson(states[i], states[i + 1]), reference.on(grid), grid.spacing());
  }
  attach_rates(rows);
  return rows;
}

std::vector<IterationCell> iteration_study(const AnyProblem& problem, const std::vector<PredictorKind>& predictors,
                                           const std::vector<double>& nus, const std::vector<std::size_t>& ns,
                                           const std::vector<double>& deltas, const StudySettings& settings) {
  std::vector<IterationCell> cells;
  for (double nu : nus) {
    for (double delta : deltas) {
      for (std::size_t n : ns) {
        for (PredictorKind predictor : predictors) cells.push_back({predictor, nu, delta, n, 0.0});
      }
    }
  }
  fan_out(cells.size(), [&](std::size_t i) {
    auto& cell = cells[i];
    StudySettings local = settings;
    local.predictor = cell.predictor;
    local.relaxation.stop_tolerance = cell.delta;
    cell.average_iterations = run_regime(problem, cell.intervals, cell.nu, local).average_iterations();
  });
  return cells;
}

std::vector<ErrorRecord> error_vs_delta_study(const AnyProblem& problem, const std::vector<std::size_t>& ns,
                                              const std::vector<double>& nus, const std::vector<double>& deltas,
                                              const std::vector<PredictorKind>& predictors,
                                              const StudySettings& settings, const ReferenceSolution& reference) {
  std::vector<ErrorRecord> records;
  for (std::size_t n : ns) {
    for (PredictorKind predictor : predictors) {
      for (double nu : nus) {
        for (double delta : deltas) records.push_back({n, predictor, nu, delta, 0.0, true});
      }
    }
  }
  fan_out(records.size(), [&](std::size_t i) {
    auto& rec = records[i];
    StudySettings local = settings;
    local.predictor = rec.predictor;
    local.relaxation.stop_tolerance = rec.delta;
    try {
      const RunReport run = run_regime(problem, rec.intervals, rec.nu, local);
      rec.error = cheb_norm(difference(run.state, reference.on(run.grid)));
    } catch (const NonConvergence&) {
      rec.converged = false;
      rec.error = std::numeric_limits<double>::quiet_NaN();
    } catch (const SingularLinearization&) {
      rec.converged = false;
      rec.error = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return records;
}

std::vector<RegimeResult> measure_regimes(const AnyProblem& problem, const RegimeGrid& grid,
                                          const StudySettings& settings, const ReferenceSolution& reference,
                                          std::size_t repeats) {
  std::vector<RegimeResult> out;
  // Timed runs stay sequential so they do not compete for cores.
  for (PredictorKind predictor : grid.predictors) {
    for (std::size_t n : grid.ns) {
      for (double delta : grid.deltas) {
        for (double nu : grid.nus) {
          StudySettings local = settings;
          local.predictor = predictor;
          local.relaxation.stop_tolerance = delta;
          RegimeResult r;
          r.predictor = predictor;
          r.intervals = n;
          r.delta = delta;
          r.nu = nu;
          r.wall_seconds = std::numeric_limits<double>::infinity();
          try {
            for (std::size_t k = 0; k < std::max<std::size_t>(repeats, 1); ++k) {
              const RunReport run = run_regime(problem, n, nu, local);
              r.wall_seconds = std::min(r.wall_seconds, run.wall_seconds);
              if (k == 0) {
                r.error = cheb_norm(difference(run.state, reference.on(run.grid)));
                r.average_iterations = run.average_iterations();
                r.total_iterations = run.total_iterations();
              }
            }
          } catch (const NonConvergence&) {
            continue;
          } catch (const SingularLinearization&) {
            continue;
          }
          out.push_back(r);
        }
      }
    }
  }
  return out;
}

std::vector<RegimeResult> select_efficient(const std::vector<RegimeResult>& measured,
                                           const std::vector<double>& targets) {
  std::vector<RegimeResult> best;
  for (double target : targets) {
    const RegimeResult* pick = nullptr;
    for (const auto& r : measured) {
      if (!(r.error <= target)) continue;
      if (pick == nullptr || r.wall_seconds < pick->wall_seconds ||
          (r.wall_seconds == pick->wall_seconds && r.total_iterations < pick->total_iterations)) {
        pick = &r;
      }
    }
    if (pick != nullptr) {
      RegimeResult chosen = *pick;
      chosen.target_error = target;
      best.push_back(chosen);
    }
  }
  return best;
}

std::vector<RegimeResult> efficiency_search(const AnyProblem& problem, const std::vector<double>& targets,
                                            const RegimeGrid& grid, const StudySettings& settings,
                                            const ReferenceSolution& reference, std::size_t repeats) {
  return select_efficient(measure_regimes(problem, grid, settings, reference, repeats), targets);
}

}  // namespace compactfd
