#pragma once

// The property suite: ten reproducible checks over all modules, shared by the
// acceptance test and `polyball-lab suite`.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace polyball {

enum class Status { Pass, Fail, Skipped };
const char* to_string(Status s);

struct CheckRecord {
  int id = 0;
  std::string name;
  Status status = Status::Skipped;
  double value = 0.0;       // the measured quantity (worst residual, violation count, ...)
  double threshold = 0.0;   // pass iff value <= threshold (and the time limit holds)
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;

  nlohmann::json to_json(bool with_time = true) const;
};

struct SuiteOptions {
  std::uint64_t seed = 20240611;
  int degree = 4;          // truncation D for the fixed-size checks
  double sample_scale = 1.0;  // multiplies every sample count
  bool enforce_time = true;
};

// One check by 1-based id; throws UsageError for ids outside 1..10.
CheckRecord run_check(int id, const SuiteOptions& opts);
std::vector<CheckRecord> run_suite(const SuiteOptions& opts);
inline constexpr int kCheckCount = 10;

// Fixed-width table with one line per record.
std::string summary_table(const std::vector<CheckRecord>& records);

}  // namespace polyball
