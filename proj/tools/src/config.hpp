#pragma once

// Run configuration: JSON already checked against the schema, turned into
// model objects. Semantic errors are ConfigError with a JSON pointer.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "polyball/beurling.hpp"
#include "polyball/polyball.hpp"
#include "polyball/wold.hpp"

namespace lab {

using nlohmann::json;

struct RunConfig {
  std::string command;
  json raw;
  polyball::PhaseMatrix lambda;
  std::optional<int> degree;
  polyball::Tolerances tol;
  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir = "polyball-out";

  int degree_or(int fallback) const { return degree.value_or(fallback); }
  // ConfigError at /seed when a sampled run has no seed.
  std::uint64_t require_seed(const std::string& why) const;
};

RunConfig load_config(const std::string& command, const json& doc);

polyball::Matrix parse_matrix(const json& j, const std::string& ptr);
polyball::RowTuple parse_tuple(const RunConfig& cfg, const json& j, const std::string& ptr);
polyball::StarPolynomial parse_polynomial(const polyball::PhaseMatrix& lambda, const json& j, const std::string& ptr);
polyball::TupleSpec parse_pieces(const polyball::PhaseMatrix& lambda, const json& j, const std::string& ptr);
// Columns are the listed vectors: coordinate arrays or {"word": "1|e", "aux": 0} unit vectors.
polyball::Matrix parse_vectors(const polyball::TruncatedModel& model, std::size_t aux, const json& j,
                               const std::string& ptr);

}  // namespace lab
