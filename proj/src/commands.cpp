#include "compactfd/commands.hpp"

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "compactfd/analysis.hpp"
#include "compactfd/csv.hpp"
#include "compactfd/errors.hpp"

namespace compactfd {

namespace {

/// Default study grids for each benchmark problem.
struct StudyDefaults {
  double converge_nu = 0.1;
  double richardson_nu = 0.1;
  std::vector<std::size_t> converge_ns;
  std::vector<std::size_t> richardson_ns;
  std::vector<double> iteration_nus;
  std::vector<std::size_t> iteration_ns;
  std::vector<double> iteration_deltas;
  std::vector<double> efficiency_nus;
  std::vector<std::size_t> efficiency_ns;
  std::vector<double> efficiency_deltas;
};

StudyDefaults defaults_for(const std::string& problem) {
  StudyDefaults d;
  if (problem == "fkpp") {
    d.richardson_nu = 0.8;
    d.converge_ns = {16, 32, 64, 128, 256};
    d.richardson_ns = {16, 32, 64};
    d.iteration_nus = {0.1, 3.2};
    d.iteration_ns = {16, 32, 64, 128, 256};
    d.iteration_deltas = {1e-6, 1e-12};
    d.efficiency_nus = {0.1, 0.4, 0.8, 1.6, 3.2};
    d.efficiency_ns = {8, 16, 32, 64, 128};
    d.efficiency_deltas = {1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12};
  } else if (problem == "fhn") {
    d.converge_ns = {8, 16, 32, 64, 128};
    d.richardson_ns = {8, 16, 32};
    d.iteration_nus = {0.1, 1.6};
    d.iteration_ns = {8, 16, 32, 64, 128};
    d.iteration_deltas = {1e-2, 1e-6, 1e-12};
    d.efficiency_nus = {0.1, 0.4, 1.6};
    d.efficiency_ns = {8, 16, 32, 64};
    d.efficiency_deltas = {1e-2, 1e-4, 1e-6, 1e-8, 1e-12};
  } else {
    d.converge_ns = {32, 64, 128, 256};
    d.richardson_ns = {32, 64, 128};
    d.iteration_nus = {0.05, 0.1, 0.2, 0.4};
    d.iteration_ns = {32, 64, 128, 256, 512};
    d.iteration_deltas = {1e-8};
    d.efficiency_nus = {0.05, 0.1, 0.2};
    d.efficiency_ns = {32, 64, 128, 256};
    d.efficiency_deltas = {1e-4, 1e-6, 1e-8};
  }
  return d;
}

std::filesystem::path prepare_out(const CommandOptions& options) {
  std::filesystem::path dir(options.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + options.out_dir + ": " + ec.message());
  return dir;
}

void write_meta(const std::filesystem::path& dir, const std::string& command, const RunConfig& config,
                const ConfigEntries& extra) {
  std::ofstream meta(dir / "meta.txt", std::ios::binary);
  if (!meta) throw Error("cannot write " + (dir / "meta.txt").string());
  meta << "command=" << command << '\n';
  for (const auto& [k, v] : config.resolved()) meta << k << '=' << v << '\n';
  for (const auto& [k, v] : extra) meta << k << '=' << v << '\n';
}

/// Every compared grid must be the reference grid coarsened by a power of two.
void require_nested(std::size_t n_ref, const std::vector<std::size_t>& ns) {
  for (std::size_t n : ns) {
    if (n == 0 || n_ref % n != 0 || !std::has_single_bit(n_ref / n)) {
      throw ConfigError("N_ref=" + std::to_string(n_ref) + " is not a power-of-two multiple of N=" +
                        std::to_string(n));
    }
  }
}

void require_doubling(const std::vector<std::size_t>& ns) {
  for (std::size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] != 2 * ns[i - 1]) throw ConfigError("Ns must double from one entry to the next");
  }
}

CsvCell optional_cell(const std::optional<double>& v) { return v ? CsvCell{*v} : CsvCell{}; }

std::vector<std::string> component_names(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::RealScalar:
      return {"u"};
    case ComponentKind::RealPair:
      return {"u", "w"};
    case ComponentKind::ComplexScalar:
      return {"re", "im"};
  }
  return {};
}

CsvTable convergence_csv(const std::vector<ConvergenceRow>& rows, ComponentKind kind) {
  const bool pair = kind == ComponentKind::RealPair;
  std::vector<std::string> header{"N", "error_C", "error_L2"};
  if (pair) {
    for (const auto& c : component_names(kind)) {
      header.push_back("error_C_" + c);
      header.push_back("error_L2_" + c);
    }
  }
  header.push_back("rate");
  if (pair) {
    for (const auto& c : component_names(kind)) header.push_back("rate_" + c);
    header.push_back("mean_rate");
  }
  CsvTable table(header);
  for (const auto& r : rows) {
    std::vector<CsvCell> row{static_cast<std::int64_t>(r.intervals), r.error.c_norm, r.error.l2_norm};
    if (pair) {
      for (std::size_t c = 0; c < 2; ++c) {
        row.emplace_back(r.error.component_c.at(c));
        row.emplace_back(r.error.component_l2.at(c));
      }
    }
    row.push_back(optional_cell(r.rate));
    if (pair) {
      for (std::size_t c = 0; c < 2; ++c) {
        row.push_back(c < r.component_rates.size() ? optional_cell(r.component_rates[c]) : CsvCell{});
      }
      row.push_back(optional_cell(r.mean_rate));
    }
    table.add_row(std::move(row));
  }
  return table;
}

void log_rows(std::ostream& log, const CommandOptions& options, const std::vector<ConvergenceRow>& rows) {
  if (options.quiet) return;
  for (const auto& r : rows) {
    log << "N=" << r.intervals << " error_C=" << format_double(r.error.c_norm);
    if (r.rate) log << " rate=" << format_double(*r.rate);
    log << '\n';
  }
}

ComponentKind kind_of_problem(const AnyProblem& problem) {
  return std::visit([](const auto& p) { return kind_of<typename std::decay_t<decltype(p)>::Value>(); }, problem);
}

/// Reference runs always use the tight stopping tolerance.
StudySettings reference_settings(StudySettings settings) {
  settings.relaxation.stop_tolerance = std::min(settings.relaxation.stop_tolerance, 1e-12);
  return settings;
}

ConfigEntries reference_meta(const ReferenceSolution& reference, double nu) {
  if (reference.is_analytic()) return {{"reference", "analytic"}};
  ConfigEntries out{{"reference", "fine_grid"},
                    {"reference_N", std::to_string(reference.intervals())},
                    {"reference_nu", format_double(nu)}};
  if (!std::isnan(reference.self_difference())) {
    out.emplace_back("reference_self_difference", format_double(reference.self_difference()));
  }
  return out;
}

std::vector<double> list_or(const std::optional<std::vector<double>>& list, const std::optional<double>& single,
                            const std::vector<double>& fallback) {
  if (list) return *list;
  if (single) return {*single};
  return fallback;
}

void study_table(const std::string& command, const RunConfig& config, const CommandOptions& options,
                 std::ostream& log) {
  const bool extrapolate = command == "richardson";
  const StudyDefaults d = defaults_for(config.problem);
  if (config.tau) throw ConfigError(command + " scales tau with h^2; set nu instead of tau");
  const double nu = config.nu.value_or(extrapolate ? d.richardson_nu : d.converge_nu);
  const auto ns = config.ns.value_or(extrapolate ? d.richardson_ns : d.converge_ns);
  require_doubling(ns);

  const AnyProblem problem = config.make_problem();
  const StudySettings settings = config.study_settings();
  const bool analytic = std::visit([](const auto& p) { return static_cast<bool>(p.exact); }, problem);
  if (!analytic) {
    auto needed = ns;
    if (extrapolate && !ns.empty()) needed.push_back(2 * ns.back());
    require_nested(config.n_ref, needed);
  }
  const auto dir = prepare_out(options);
  if (!options.quiet && !analytic) log << "reference: N=" << config.n_ref << " nu=" << format_double(nu) << '\n';
  const auto reference = ReferenceSolution::for_problem(problem, config.n_ref, nu, reference_settings(settings));
  const auto rows = extrapolate ? richardson_table(problem, nu, ns, settings, reference)
                                : convergence_table(problem, nu, ns, settings, reference);
  log_rows(log, options, rows);
  convergence_csv(rows, kind_of_problem(problem)).write((dir / (command + ".csv")).string());
  auto extra = reference_meta(reference, nu);
  extra.emplace_back("study_nu", format_double(nu));
  write_meta(dir, command, config, extra);
}

}  // namespace

void cmd_run(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  const AnyProblem problem = config.make_problem();
  const auto dir = prepare_out(options);
  const auto [grid, time] = std::visit(
      [&](const auto& p) {
        const Grid1D g = p.grid(config.intervals);
        const double tau = config.tau ? *config.tau : p.tau_for(config.nu.value_or(0.1), g.spacing());
        return std::pair{g, TimeGrid::covering(p.final_time, tau)};
      },
      problem);
  ConfigEntries extra{{"steps", std::to_string(time.steps())},
                      {"tau_used", format_double(time.tau())},
                      {"final_time_reached", format_double(time.final_time())}};
  // Provenance is written before solving so failed runs still document their inputs.
  write_meta(dir, "run", config, extra);

  const RunReport report = integrate(problem, grid, time, config.predictor, config.relaxation());

  const auto names = component_names(report.state.kind());
  std::vector<std::string> header{"x"};
  for (std::size_t c = 0; c < static_cast<std::size_t>(report.state.components()); ++c) header.push_back(names[c]);
  CsvTable solution(header);
  for (std::size_t j = 0; j < report.state.size(); ++j) {
    std::vector<CsvCell> row{grid.node(j)};
    for (int c = 0; c < report.state.components(); ++c) row.emplace_back(report.state.component(j, c));
    solution.add_row(std::move(row));
  }
  solution.write((dir / "solution.csv").string());

  CsvTable stats({"step", "iterations", "max_correction"});
  for (std::size_t n = 0; n < report.steps.size(); ++n) {
    stats.add_row({static_cast<std::int64_t>(n + 1), static_cast<std::int64_t>(report.steps[n].iterations),
                   report.steps[n].final_max_correction});
  }
  stats.write((dir / "stats.csv").string());

  extra.emplace_back("total_iterations", std::to_string(report.total_iterations()));
  extra.emplace_back("average_iterations", format_double(report.average_iterations()));
  write_meta(dir, "run", config, extra);
  if (!options.quiet) {
    log << "run: N=" << grid.intervals() << " steps=" << time.steps() << " tau=" << format_double(time.tau())
        << " avg_iterations=" << format_double(report.average_iterations())
        << " wall_s=" << format_double(report.wall_seconds) << '\n';
  }
}

void cmd_converge(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  study_table("converge", config, options, log);
}

void cmd_richardson(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  study_table("richardson", config, options, log);
}

void cmd_iterations(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  if (config.tau) throw ConfigError("iterations scales tau with h^2; set nu instead of tau");
  const StudyDefaults d = defaults_for(config.problem);
  const auto nus = list_or(config.nus, config.nu, d.iteration_nus);
  const auto deltas = list_or(config.deltas, config.delta, d.iteration_deltas);
  const auto ns = config.ns.value_or(d.iteration_ns);
  const auto predictors =
      config.predictors.value_or(std::vector{PredictorKind::Euler, PredictorKind::AdamsBashforth});
  const AnyProblem problem = config.make_problem();
  const auto dir = prepare_out(options);

  const auto cells = iteration_study(problem, predictors, nus, ns, deltas, config.study_settings());
  CsvTable table({"nu", "delta", "N", "predictor", "avg_iterations"});
  for (const auto& c : cells) {
    table.add_row({c.nu, c.delta, static_cast<std::int64_t>(c.intervals), std::string(to_string(c.predictor)),
                   c.average_iterations});
    if (!options.quiet) {
      log << "nu=" << format_double(c.nu) << " delta=" << format_double(c.delta) << " N=" << c.intervals << ' '
          << to_string(c.predictor) << " avg_iterations=" << format_double(c.average_iterations) << '\n';
    }
  }
  table.write((dir / "iterations.csv").string());
  write_meta(dir, "iterations", config, {});
}

void cmd_efficiency(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  if (config.tau) throw ConfigError("efficiency scales tau with h^2; set nu instead of tau");
  const StudyDefaults d = defaults_for(config.problem);
  RegimeGrid grid;
  grid.predictors = config.predictors.value_or(std::vector{PredictorKind::Euler, PredictorKind::AdamsBashforth});
  grid.ns = config.ns.value_or(d.efficiency_ns);
  grid.deltas = config.deltas.value_or(d.efficiency_deltas);
  grid.nus = config.nus.value_or(d.efficiency_nus);
  const double reference_nu = config.nu.value_or(0.1);

  const AnyProblem problem = config.make_problem();
  const bool analytic = std::visit([](const auto& p) { return static_cast<bool>(p.exact); }, problem);
  if (!analytic) require_nested(config.n_ref, grid.ns);
  const auto dir = prepare_out(options);
  const StudySettings settings = config.study_settings();
  const auto reference =
      ReferenceSolution::for_problem(problem, config.n_ref, reference_nu, reference_settings(settings), false);

  const auto measured = measure_regimes(problem, grid, settings, reference, config.repeats);
  CsvTable regimes({"N", "predictor", "nu", "delta", "error", "time_s", "avg_iterations"});
  for (const auto& r : measured) {
    regimes.add_row({static_cast<std::int64_t>(r.intervals), std::string(to_string(r.predictor)), r.nu, r.delta,
                     r.error, r.wall_seconds, r.average_iterations});
  }
  regimes.write((dir / "regimes.csv").string());

  const auto best = select_efficient(measured, config.targets);
  CsvTable table({"target_error", "predictor", "N", "delta", "nu", "time_s", "avg_iterations", "error"});
  for (const auto& r : best) {
    table.add_row({r.target_error, std::string(to_string(r.predictor)), static_cast<std::int64_t>(r.intervals),
                   r.delta, r.nu, r.wall_seconds, r.average_iterations, r.error});
    if (!options.quiet) {
      log << "target=" << format_double(r.target_error) << ' ' << to_string(r.predictor) << " N=" << r.intervals
          << " delta=" << format_double(r.delta) << " nu=" << format_double(r.nu)
          << " time_s=" << format_double(r.wall_seconds) << " error=" << format_double(r.error) << '\n';
    }
  }
  table.write((dir / "efficiency.csv").string());
  auto extra = reference_meta(reference, reference_nu);
  extra.emplace_back("regimes_measured", std::to_string(measured.size()));
  write_meta(dir, "efficiency", config, extra);
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"run", "converge", "richardson", "iterations", "efficiency"};
  return names;
}

void run_command(const std::string& name, const RunConfig& config, const CommandOptions& options,
                 std::ostream& log) {
  if (name == "run") return cmd_run(config, options, log);
  if (name == "converge") return cmd_converge(config, options, log);
  if (name == "richardson") return cmd_richardson(config, options, log);
  if (name == "iterations") return cmd_iterations(config, options, log);
  if (name == "efficiency") return cmd_efficiency(config, options, log);
  throw ConfigError("unknown command '" + name + "'");
}

}  // namespace compactfd
