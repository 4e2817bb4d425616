// twinbeam: delay sweeps of the twin-beam PDC -> SFG correlation.
//
//   twinbeam --scenario fig2 --out out/fig2
//   twinbeam --config configs/default.cfg --scenario fig4
//   twinbeam --grid-check
//
// Exit status: 0 ok, 1 runtime/output failure, 2 bad configuration or usage,
// 3 grid check failed. Errors are printed to stderr as one JSON object.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "twinbeam/config.hpp"
#include "twinbeam/errors.hpp"
#include "twinbeam/run.hpp"

namespace {

int report_error(const std::string& kind, const std::string& message, int code,
                 std::size_t line = 0) {
  nlohmann::json j;
  j["error"] = {{"type", kind}, {"message", message}};
  if (line) j["error"]["line"] = line;
  std::cerr << j.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twin-beam PDC -> SFG correlation simulator"};
  std::string config_path;
  std::string scenario;
  std::string out_dir;
  bool check = false;
  app.add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
  app.add_option("--scenario", scenario, "fig2 | fig3 | fig4 | sweep")
      ->check(CLI::IsMember({"fig2", "fig3", "fig4", "sweep"}));
  app.add_option("--out", out_dir, "output directory (overrides [run] output)");
  app.add_flag("--grid-check", check, "FFT vs direct and grid-doubling report, then exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), 2);
  }

  twinbeam::RunConfig config;
  try {
    if (!config_path.empty()) config = twinbeam::load_config(config_path);
    if (!scenario.empty()) config.scenario = twinbeam::parse_scenario(scenario);
    if (!out_dir.empty()) config.output_dir = out_dir;
  } catch (const twinbeam::ConfigError& e) {
    return report_error("config", e.what(), 2, e.line());
  }

  try {
    if (check) return twinbeam::grid_check(config, std::cout) ? 0 : 3;
    twinbeam::run(config, std::cout);
  } catch (const twinbeam::OutputError& e) {
    return report_error("output", e.what(), 1);
  } catch (const twinbeam::PreconditionError& e) {
    return report_error("precondition", e.what(), 2);
  } catch (const std::exception& e) {
    return report_error("runtime", e.what(), 1);
  }
  return 0;
}
