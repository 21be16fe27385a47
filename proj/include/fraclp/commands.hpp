#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fraclp/error.hpp"
#include "fraclp/report.hpp"
#include "fraclp/spectral.hpp"

namespace fraclp {

/// Configuration problem; the message carries "source:line: " when it came from a file.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Flat key=value campaign configuration. Values are validated when set and
/// kept as text so the metadata echo is exactly what the user wrote.
class RunConfig {
 public:
  std::string command;

  /// Throws ConfigError for unknown keys or unparsable values.
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const { return entries_; }

  double real(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::uint64_t seed() const;
  bool flag(const std::string& key, bool fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::pair<int, int>> ladder(const std::string& key,
                                          const std::vector<std::pair<int, int>>& fallback) const;
  FourierConvention convention(FourierConvention fallback) const;

  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::string> entries_;
};

/// Parses a config text; `source` names it in error messages. Duplicate keys are errors.
RunConfig parse_config(std::string_view text, const std::string& source);
RunConfig load_config(const std::filesystem::path& path);

struct CommandResult {
  ReportBundle bundle;
  bool pass = false;
  std::optional<std::string> failure;  // numerical failure report, when one stopped the run
};

const std::vector<std::string>& command_names();
/// Column documentation for --help.
std::string command_help(const std::string& name);

CommandResult cmd_kernel(const RunConfig& cfg);
CommandResult cmd_verify_l2(const RunConfig& cfg);
CommandResult cmd_estimate_constant(const RunConfig& cfg);
CommandResult cmd_scaling(const RunConfig& cfg);
CommandResult cmd_sharp(const RunConfig& cfg);
CommandResult cmd_spde(const RunConfig& cfg);

CommandResult run_command(const RunConfig& cfg);

/// Runs cfg.command and writes its bundle. Exit code: 0 all checks pass,
/// 1 a check failed or a numerical failure stopped the run, 2 bad configuration
/// (nothing written). Progress and errors go to `log`.
int execute(const RunConfig& cfg, std::ostream& log);

}  // namespace fraclp
