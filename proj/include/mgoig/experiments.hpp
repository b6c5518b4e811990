#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mgoig/descriptors.hpp"

namespace mgoig {

struct RunOptions {
  std::optional<uint64_t> seed;        // overrides the config seed
  std::optional<CapacityMode> mode;    // overrides the config mode
  int jobs = 1;
  std::string out_dir;                 // default: $MGOIG_OUT_DIR or "."
};

struct CsvRow {
  std::string learner = "-";
  std::string g_id = "-";
  long long n = 0;
  std::string metric;
  double value = 0.0;
  std::string value_exact;  // "p/q" when the value is exact, else empty
  bool has_bound = false;
  double bound = 0.0;
  std::string bound_exact;
  int satisfied = -1;       // -1: not a check
  double ci_halfwidth = 0.0;
  bool exact_check = false; // exact-arithmetic check; failures flip the exit status
};

struct RunOutcome {
  std::string experiment_id;
  std::string csv_path;
  std::string manifest_path;
  int exact_failures = 0;
  std::vector<CsvRow> rows;
};

uint64_t config_hash(const Json& config);
std::string csv_text(const std::string& experiment_id, uint64_t seed,
                     const std::vector<CsvRow>& rows);

RunOutcome run_experiment_json(const Json& config, const RunOptions& options);
RunOutcome run_experiment_file(const std::string& config_path, const RunOptions& options);

std::string describe_json(const Json& config);
std::string describe_file(const std::string& config_path);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mgoig
