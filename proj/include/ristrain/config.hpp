// INI-style run configuration. See configs/schema.ini for every key and its default.
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "ristrain/experiment.hpp"

namespace ristrain {

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { missing_file, syntax, schema, codebook };

  ConfigError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct CliConfig {
  ExperimentPlan plan;
  ReportFormat format = ReportFormat::csv;
  unsigned workers = 0;
  std::filesystem::path output;
  bool verbose = false;
};

/// Parses INI text. Omitted keys keep their defaults; unknown sections or keys are rejected.
CliConfig parse_config_text(const std::string& text);

/// Reads and parses a config file. Throws ConfigError.
CliConfig parse_config(const std::filesystem::path& path);

/// Parses "a,b,c" or an inclusive range "start:step:stop".
std::vector<double> parse_snr_points(const std::string& spec);

}  // namespace ristrain
