#include "compactfd/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "compactfd/csv.hpp"
#include "compactfd/errors.hpp"
#include "compactfd/problems.hpp"

namespace compactfd {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* last = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), last, value);
  if (ec != std::errc{} || p != last || text.empty()) {
    throw ConfigError("'" + key + "': expected a decimal number, got '" + text + "'");
  }
  return value;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  std::size_t value = 0;
  const char* last = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), last, value);
  if (ec != std::errc{} || p != last || text.empty()) {
    throw ConfigError("'" + key + "': expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& key, const std::string& text, Parse parse) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(parse(key, item));
  if (out.empty()) throw ConfigError("'" + key + "': empty list");
  return out;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (double v : values) out += (out.empty() ? "" : ",") + format_double(v);
  return out;
}

std::string join_counts(const std::vector<std::size_t>& values) {
  std::string out;
  for (auto v : values) out += (out.empty() ? "" : ",") + std::to_string(v);
  return out;
}

std::string one_of(const std::string& key, const std::string& value, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (value == a) return value;
  }
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw ConfigError("'" + key + "': expected one of " + list + ", got '" + value + "'");
}

}  // namespace

ConfigEntries parse_config_text(const std::string& text) {
  ConfigEntries entries;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
    entries.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return entries;
}

ConfigEntries read_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot read config file " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_config_text(buf.str());
}

std::pair<std::string, std::string> parse_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || trim(text.substr(0, eq)).empty()) {
    throw ConfigError("--set expects key=value, got '" + text + "'");
  }
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

RunConfig RunConfig::from_entries(const ConfigEntries& entries) {
  RunConfig c;
  for (const auto& [key, value] : entries) {
    const auto num = [&] { return parse_double(key, value); };
    if (key == "problem") c.problem = one_of(key, value, {"fkpp", "fhn", "nlse"});
    else if (key == "D") c.diffusion = num();
    else if (key == "epsilon") c.epsilon = num();
    else if (key == "alpha") c.alpha = num();
    else if (key == "beta") c.beta = num();
    else if (key == "mu") c.mu = num();
    else if (key == "D1") c.d1 = num();
    else if (key == "D2") c.d2 = num();
    else if (key == "U") c.velocity = num();
    else if (key == "fkpp_boundary") c.fkpp_boundary = one_of(key, value, {"initial", "zero"});
    else if (key == "jacobian") c.jacobian = one_of(key, value, {"diagonal", "block"});
    else if (key == "nonlinearity") c.nonlinearity = one_of(key, value, {"cubic", "fermi"});
    else if (key == "x_left") c.x_left = num();
    else if (key == "x_right") c.x_right = num();
    else if (key == "N") c.intervals = parse_count(key, value);
    else if (key == "nu") c.nu = num();
    else if (key == "tau") c.tau = num();
    else if (key == "T") c.final_time = num();
    else if (key == "predictor") c.predictor = parse_predictor(value);
    else if (key == "ordering") c.ordering = SweepOrdering::parse(value);
    else if (key == "delta") c.delta = num();
    else if (key == "max_iterations") c.max_iterations = parse_count(key, value);
    else if (key == "omega") c.omega = num();
    else if (key == "Ns") c.ns = parse_list<std::size_t>(key, value, parse_count);
    else if (key == "N_ref") c.n_ref = parse_count(key, value);
    else if (key == "nus") c.nus = parse_list<double>(key, value, parse_double);
    else if (key == "deltas") c.deltas = parse_list<double>(key, value, parse_double);
    else if (key == "predictors") {
      c.predictors = parse_list<PredictorKind>(key, value, [](const std::string&, const std::string& v) {
        return parse_predictor(v);
      });
    } else if (key == "targets") c.targets = parse_list<double>(key, value, parse_double);
    else if (key == "repeats") c.repeats = parse_count(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  if (c.nu && c.tau) throw ConfigError("set exactly one of nu or tau, not both");
  if (c.nu && !(*c.nu > 0.0)) throw ConfigError("nu must be positive");
  if (c.tau && !(*c.tau > 0.0)) throw ConfigError("tau must be positive");
  if (c.delta && !(*c.delta > 0.0)) throw ConfigError("delta must be positive");
  if (c.final_time && *c.final_time < 0.0) throw ConfigError("T must be non-negative");
  if (c.max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (c.intervals < 2) throw ConfigError("N must be at least 2");
  return c;
}

AnyProblem RunConfig::make_problem() const {
  AnyProblem out;
  if (problem == "fkpp") {
    auto p = fkpp(diffusion.value_or(0.01), {},
                  fkpp_boundary == "zero" ? FkppBoundary::Zero : FkppBoundary::InitialEndpoints);
    if (x_left || x_right) {
      p.x_left = x_left.value_or(p.x_left);
      p.x_right = x_right.value_or(p.x_right);
      if (fkpp_boundary != "zero") {
        p.boundary = BoundaryData<double>::values(p.initial(p.x_left), p.initial(p.x_right));
      }
    }
    out = std::move(p);
  } else if (problem == "fhn") {
    FhnParams fp;
    fp.epsilon = epsilon.value_or(fp.epsilon);
    fp.alpha = alpha.value_or(fp.alpha);
    fp.beta = beta.value_or(fp.beta);
    fp.mu = mu.value_or(fp.mu);
    fp.d1 = d1.value_or(fp.d1);
    fp.d2 = d2.value_or(fp.d2);
    auto p = fhn(fp, jacobian == "block" ? JacobianMode::Block : JacobianMode::Diagonal);
    p.x_left = x_left.value_or(p.x_left);
    p.x_right = x_right.value_or(p.x_right);
    out = std::move(p);
  } else {
    SolitonParams sp;
    sp.alpha = alpha.value_or(sp.alpha);
    sp.beta = beta.value_or(sp.beta);
    sp.velocity = velocity.value_or(sp.velocity);
    out = nlse(sp, nonlinearity == "fermi" ? NlseNonlinearity::Fermi : NlseNonlinearity::Cubic,
               x_left.value_or(-20.0), x_right.value_or(20.0));
  }
  if (final_time) std::visit([&](auto& p) { p.final_time = *final_time; }, out);
  std::visit(
      [](const auto& p) {
        if (!(p.x_right > p.x_left)) throw ConfigError("x_right must exceed x_left");
      },
      out);
  return out;
}

double RunConfig::study_nu() const {
  if (tau) throw ConfigError("this command scales tau with h^2; set nu instead of tau");
  return nu.value_or(0.1);
}

double RunConfig::stop_tolerance() const { return delta.value_or(problem == "nlse" ? 1e-8 : 1e-12); }

RelaxationConfig RunConfig::relaxation() const {
  RelaxationConfig r;
  r.ordering = ordering;
  r.stop_tolerance = stop_tolerance();
  r.max_iterations = max_iterations;
  r.omega = omega;
  return r;
}

StudySettings RunConfig::study_settings() const {
  StudySettings s;
  s.predictor = predictor;
  s.relaxation = relaxation();
  s.final_time = final_time;
  return s;
}

ConfigEntries RunConfig::resolved() const {
  ConfigEntries out;
  out.emplace_back("problem", problem);
  const AnyProblem p = make_problem();
  std::visit(
      [&](const auto& pr) {
        out.emplace_back("x_left", format_double(pr.x_left));
        out.emplace_back("x_right", format_double(pr.x_right));
        out.emplace_back("T", format_double(pr.final_time));
        out.emplace_back("component_kind", to_string(kind_of<typename std::decay_t<decltype(pr)>::Value>()));
        for (const auto& [k, v] : pr.metadata) out.emplace_back(k, v);
      },
      p);
  if (problem == "fkpp") {
    out.emplace_back("D", format_double(diffusion.value_or(0.01)));
    out.emplace_back("fkpp_boundary", fkpp_boundary);
  } else if (problem == "fhn") {
    const FhnParams d;
    out.emplace_back("epsilon", format_double(epsilon.value_or(d.epsilon)));
    out.emplace_back("alpha", format_double(alpha.value_or(d.alpha)));
    out.emplace_back("beta", format_double(beta.value_or(d.beta)));
    out.emplace_back("mu", format_double(mu.value_or(d.mu)));
    out.emplace_back("D1", format_double(d1.value_or(d.d1)));
    out.emplace_back("D2", format_double(d2.value_or(d.d2)));
    out.emplace_back("jacobian", jacobian);
  } else {
    const SolitonParams d;
    out.emplace_back("alpha", format_double(alpha.value_or(d.alpha)));
    out.emplace_back("beta", format_double(beta.value_or(d.beta)));
    out.emplace_back("U", format_double(velocity.value_or(d.velocity)));
    out.emplace_back("nonlinearity", nonlinearity);
  }
  out.emplace_back("N", std::to_string(intervals));
  if (tau) {
    out.emplace_back("tau", format_double(*tau));
  } else {
    out.emplace_back("nu", format_double(nu.value_or(0.1)));
  }
  out.emplace_back("predictor", to_string(predictor));
  out.emplace_back("ordering", ordering.to_string());
  out.emplace_back("delta", format_double(stop_tolerance()));
  out.emplace_back("max_iterations", std::to_string(max_iterations));
  out.emplace_back("omega", format_double(omega));
  if (ns) out.emplace_back("Ns", join_counts(*ns));
  out.emplace_back("N_ref", std::to_string(n_ref));
  if (nus) out.emplace_back("nus", join_doubles(*nus));
  if (deltas) out.emplace_back("deltas", join_doubles(*deltas));
  if (predictors) {
    std::string list;
    for (auto k : *predictors) list += (list.empty() ? "" : ",") + std::string(to_string(k));
    out.emplace_back("predictors", list);
  }
  out.emplace_back("targets", join_doubles(targets));
  out.emplace_back("repeats", std::to_string(repeats));
  return out;
}

}  // namespace compactfd
