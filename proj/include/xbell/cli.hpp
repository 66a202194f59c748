#ifndef XBELL_CLI_HPP
#define XBELL_CLI_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "xbell/bellfinder.hpp"
#include "xbell/phasematch.hpp"

namespace xbell::cli {

enum ExitStatus : int { kSuccess = 0, kUsage = 1, kNoSolution = 2, kIo = 3 };

enum class OutputFormat { Csv, Json };

struct RunConfig {
  SourceConfig source;
  OutputFormat format = OutputFormat::Csv;
  std::string output_path;  // empty means standard output
  std::optional<double> theta_p;
};

class UsageError : public std::invalid_argument {
public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// 9 significant digits, "%.9g".
std::string format_number(double value);

// Applies one `key=value` setting. Keys are the long flag names without the
// leading dashes (`pump-kev`, `miller`, ...); underscores are accepted in
// place of dashes. Throws UsageError on an unknown key or unparsable value.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

// Reads `key=value` lines; blank lines and `#` comments are skipped.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

void write_pm(std::ostream& out, const RunConfig& config,
              const std::vector<PhaseMatchSolution>& solutions);
void write_scan(std::ostream& out, const RunConfig& config, const std::array<ScanCurve, 2>& curves);
void write_bell(std::ostream& out, const RunConfig& config, const std::vector<BellPoint>& points);

// Entry point behind the `xbell` executable.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xbell::cli

#endif  // XBELL_CLI_HPP
