#include <ostream>

#include "CLI11.hpp"
#include "compactfd/commands.hpp"
#include "compactfd/errors.hpp"

namespace compactfd {

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compact fourth-order solver for weakly nonlinear parabolic and Schroedinger-type equations"};
  app.name("compactfd");
  std::string config_path;
  std::vector<std::string> assignments;
  CommandOptions options;
  app.add_option("--config", config_path, "flat key = value configuration file");
  app.add_option("--out", options.out_dir, "output directory")->capture_default_str();
  app.add_option("--set", assignments, "key=value override, applied after the config file")->take_all();
  app.add_flag("--quiet", options.quiet, "suppress progress output");
  app.require_subcommand(1);
  for (const auto& name : command_names()) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    ConfigEntries entries;
    if (!config_path.empty()) entries = read_config_file(config_path);
    for (const auto& a : assignments) entries.push_back(parse_assignment(a));
    const RunConfig config = RunConfig::from_entries(entries);
    run_command(command, config, options, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateDomain& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace compactfd
