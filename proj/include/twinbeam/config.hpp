#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "twinbeam/experiments.hpp"

namespace twinbeam {

// Run configuration file format
// -----------------------------
// Line oriented, '#' starts a comment, '[name]' opens a section, every other
// non-blank line is 'key = value'. Physical values carry a unit suffix after
// the number(s), e.g. 'delay_step = 0.5 fs' or 'defocus_list = 0 100 400 um'.
// Unknown sections and keys are errors. Sections: run, dispersion, pump,
// pdc_crystal, sfg_crystal, transfer, pinhole, sweep, grid (see configs/).

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class Scenario { fig2, fig3, fig4, sweep };

std::string_view scenario_name(Scenario s);
Scenario parse_scenario(std::string_view name);

struct RunConfig {
  Scenario scenario = Scenario::fig2;
  std::string output_dir = "out";
  ScenarioConfig physics;

  bool operator==(const RunConfig&) const = default;
};

/// Parse and validate; everything not mentioned keeps its default.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// The fully resolved configuration in the same format (SI units, shortest
/// round-trip decimal representation); parse_config(echo_config(c)) == c.
std::string echo_config(const RunConfig& config);

}  // namespace twinbeam
