#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "polyball/suite.hpp"

namespace lab {

struct Check {
  std::string name;
  polyball::Status status = polyball::Status::Pass;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct Report {
  std::string command;
  std::vector<Check> checks;
  json result = json::object();
  std::vector<double> spectrum;                      // written to spectra.csv
  std::map<std::string, polyball::Matrix> matrices;  // written to matrices/<name>.json
  std::string summary;                               // printed after the run

  bool pass() const;
  void add(std::string name, bool ok, double value, double threshold, std::string detail = {});
  void skip(std::string name, std::string reason);
};

// Numerical rejections become failed checks carrying the module's message.
Report run_command(const RunConfig& cfg);

// report.json, spectra.csv, matrices/*.json under cfg.output_dir.
void write_outputs(const Report& report, const RunConfig& cfg, double seconds);

}  // namespace lab
