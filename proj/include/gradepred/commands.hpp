#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gradepred/selection.hpp"

namespace gradepred::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInputError = 2, kModelError = 3 };

struct RunConfig {
  std::filesystem::path out_dir = "data";
  std::filesystem::path submissions;  // default: <out_dir>/submissions.csv
  std::filesystem::path gradebook;    // default: <out_dir>/gradebook.csv
  std::filesystem::path out;          // report path; default: <out_dir>/report.md
  std::vector<std::string> models;
  Thresholds thresholds;
  bool sweep = false;
  bool normalize = false;
  bool global_prep = false;
  std::uint64_t seed = 42;
  double C = 1.0;
  int k = 5;
  double epsilon = 0.1;
  std::size_t students = 249;
  std::size_t questions = 409;
  unsigned threads = 0;  // not part of the recorded config: results never depend on it

  std::filesystem::path submissions_path() const;
  std::filesystem::path gradebook_path() const;
  std::filesystem::path report_path() const;

  nlohmann::json to_json() const;
};

// Applies keys from a JSON config (same names as the long flags, without
// dashes) unless was_set(key) reports the flag was given explicitly.
void apply_config_json(RunConfig& config, const nlohmann::json& file,
                       const std::function<bool(const std::string&)>& was_set);

Thresholds parse_thresholds(const std::string& text);

int cmd_synth(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_extract(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

// Full command-line entry point.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gradepred::cli
