#pragma once

// Experiment configuration: a plain-text key=value file plus command-line
// overrides, resolved against a per-command schema of typed defaults.
//
// File grammar, one entry per line:
//   key = value          applies to every command that knows `key`
//   command.key = value  applies to `command` only
//   # comment            also allowed after a value
// Keys are [A-Za-z0-9_]+. Reals accept decimal, exponent and p/q forms; lists
// are comma separated; booleans are true/false. Precedence: command line,
// then file, then defaults. Unknown keys are errors.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "resonance/error.hpp"

namespace resonance {

const char* library_version();

/// Invalid configuration (exit code 2).
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum class ValueKind { real, integer, boolean, text, real_list, integer_list };

struct KeySpec {
  std::string key;
  ValueKind kind;
  std::string default_value;
  std::string help;
};

/// Schema of a command; ConfigError for an unknown command.
const std::vector<KeySpec>& command_schema(const std::string& command);
const std::vector<std::string>& command_names();

double parse_real(const std::string& text);
std::vector<std::string> split_list(const std::string& text, char sep = ',');

class ExperimentConfig {
 public:
  /// Parses `file` (skipped when empty), then applies `overrides` in order.
  static ExperimentConfig resolve(const std::string& command, const std::filesystem::path& file,
                                  const std::vector<std::pair<std::string, std::string>>& overrides);
  /// Parses config text (for tests).
  static std::vector<std::pair<std::string, std::string>> parse_text(const std::string& text);

  const std::string& command() const { return command_; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string source(const std::string& key) const;

  double real(const std::string& key) const;
  long long integer(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  bool boolean(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<long long> integers(const std::string& key) const;

  /// Typed values of every key in schema order.
  nlohmann::ordered_json to_json() const;

 private:
  const KeySpec& spec(const std::string& key) const;
  const std::string& raw(const std::string& key) const;
  void set(const std::string& key, const std::string& value, const std::string& source);

  std::string command_;
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> sources_;
};

}  // namespace resonance
