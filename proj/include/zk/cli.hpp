#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace zk::cli {

/// Exit statuses of the driver.
enum ExitCode : int { kOk = 0, kConfigError = 2, kInstability = 3, kIoError = 4 };

struct KeySpec {
  std::string key;
  std::string fallback;
  std::string help;
  /// Subcommands accepting the key; empty means all.
  std::vector<std::string> scope;
};

const std::vector<std::string>& subcommands();
/// The flat key schema, documented in the README.
const std::vector<KeySpec>& key_schema();
bool key_applies(const KeySpec& spec, std::string_view subcommand);

/// Lower-level form of a key: '-' becomes '_'.
std::string normalize_key(std::string_view key);

/// `key = value` lines; '#' starts a comment. Throws ConfigError with the
/// origin and line number on malformed lines.
std::map<std::string, std::string> parse_config_text(std::string_view text, const std::string& origin = "config");

class RunConfig {
 public:
  RunConfig(std::string subcommand, std::map<std::string, std::string> values);

  const std::string& subcommand() const { return subcommand_; }
  /// Explicit values merged over the schema defaults.
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string text(const std::string& key) const;
  double number(const std::string& key) const;
  /// number() restricted to [lo, hi]; ConfigError names the key otherwise.
  double number_in(const std::string& key, double lo, double hi) const;
  long long integer(const std::string& key) const;
  long long integer_in(const std::string& key, long long lo, long long hi) const;
  bool flag(const std::string& key) const;
  /// Comma-separated numbers; an empty value yields an empty list.
  std::vector<double> list(const std::string& key) const;
  bool is_set(const std::string& key) const { return explicit_.count(key) > 0; }

  std::filesystem::path output_dir() const;
  /// Canonical `key=value` lines of every explicit key, sorted.
  std::string echo() const;
  /// The same lines for every resolved key, defaults included, except
  /// output_dir.
  std::string resolved_echo() const;

 private:
  std::string subcommand_;
  std::map<std::string, std::string> explicit_;
  std::map<std::string, std::string> values_;
};

/// Executes one run and writes its artifacts. Errors are reported on err
/// and mapped to ExitCode values.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point.
int main(int argc, char** argv);

}  // namespace zk::cli
