#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "twinbeam/config.hpp"

namespace twinbeam {

/// Output could not be produced (unwritable directory, failed rename).
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSummary {
  std::vector<ScenarioResult> results;
  ConvergenceReport convergence;  // worst case over all results
  std::vector<std::filesystem::path> files;
};

/// Write `content` to `path` via a temporary sibling and a rename, so a
/// failure never leaves a truncated file behind.
void write_atomically(const std::filesystem::path& path, const std::string& content);

/// 9 significant digits, '.' decimal point regardless of locale.
std::string format_sig9(double v);

/// delay_fs,intensity,intensity_normalized
std::string profile_csv(const CorrelationProfile& profile);

/// Run the configured scenario, write profile CSV(s), summary.json and
/// effective.cfg into config.output_dir. Progress lines go to `log`.
RunSummary run(const RunConfig& config, std::ostream& log);

/// --grid-check: FFT vs direct report and grid-doubling report for the scenario.
bool grid_check(const RunConfig& config, std::ostream& out);

}  // namespace twinbeam
