#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("polyball-cli-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Run lab(const std::string& args, const fs::path& dir) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + POLYBALL_LAB + "\" " + args + " > \"" + out.string() + "\" 2> \"" +
                          err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

std::string config(const std::string& name) { return std::string(POLYBALL_CONFIGS) + "/" + name; }

fs::path write_config(const fs::path& dir, const json& j) {
  const auto p = dir / "config.json";
  std::ofstream(p) << j.dump();
  return p;
}

json report(const fs::path& dir) { return json::parse(slurp(dir / "out" / "report.json")); }

std::string run_args(const std::string& cmd, const std::string& cfg, const fs::path& dir) {
  return cmd + " --config \"" + cfg + "\" --output-dir \"" + (dir / "out").string() + "\"";
}

}  // namespace

TEST_CASE("check on the torus pair") {
  const auto dir = scratch("torus");
  const auto r = lab(run_args("check", config("torus_check.json"), dir), dir);
  CHECK(r.code == 0);
  const auto rep = report(dir);
  CHECK(rep.at("pass") == true);
  CHECK(rep.at("result").at("is_member") == true);
  CHECK(rep.at("result").at("is_pure") == false);
  // C, X are unitary: every mixed defect vanishes, so the spectrum is all zeros.
  const auto csv = slurp(dir / "out" / "spectra.csv");
  CHECK(csv.rfind("index,eigenvalue\n", 0) == 0);
  CHECK(fs::exists(dir / "out" / "matrices" / "defect.json"));
  for (const auto key : {"polyball", "eigen", "nlohmann_json", "rapidjson"}) CHECK(rep.at("versions").contains(key));
}

TEST_CASE("vn on a Jordan block against the tridiagonal Toeplitz norm") {
  const auto dir = scratch("vn");
  const auto r = lab(run_args("vn", config("jordan_vn.json"), dir), dir);
  CHECK(r.code == 0);
  const auto res = report(dir).at("result");
  // ||J + J^*|| = 1 for the 2x2 Jordan block; S + S^* on degree <= D is the
  // (D+1)x(D+1) path adjacency matrix with norm 2 cos(pi / (D + 2)).
  const int d = res.at("degree");
  CHECK(res.at("lhs").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.at("rhs").get<double>() == doctest::Approx(2.0 * std::cos(std::numbers::pi / (d + 2))).epsilon(1e-12));
}

TEST_CASE("malformed lambda exits 1 with a pointer") {
  const auto dir = scratch("badlambda");
  const auto r = lab(run_args("check", config("bad_lambda.json"), dir), dir);
  CHECK(r.code == 1);
  CHECK(r.err.find("/lambda/1") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out" / "report.json"));
}

TEST_CASE("schema violations exit 1 with a pointer") {
  const auto dir = scratch("schema");
  const auto cfg = write_config(dir, json{{"n", {1}}, {"tuple", {{"builtin", "jordan"}, {"size", "two"}}}});
  const auto r = lab(run_args("check", cfg.string(), dir), dir);
  CHECK(r.code == 1);
  CHECK(r.err.find("/tuple/size") != std::string::npos);

  const auto extra = write_config(dir, json{{"n", {1}}, {"tuple", {{"builtin", "zero"}}}, {"colour", 1}});
  CHECK(lab(run_args("check", extra.string(), dir), dir).code == 1);

  const auto seedless = write_config(dir, json{{"n", {1}}, {"tuple", {{"random", json::object()}}}});
  const auto s = lab(run_args("check", seedless.string(), dir), dir);
  CHECK(s.code == 1);
  CHECK(s.err.find("/seed") != std::string::npos);
}

TEST_CASE("a failed check exits 2") {
  const auto dir = scratch("nonmember");
  const auto cfg = write_config(dir, json{{"n", {1}}, {"tuple", {{"builtin", "jordan"}, {"size", 3}, {"scale", 1.5}}}});
  const auto r = lab(run_args("check", cfg.string(), dir), dir);
  CHECK(r.code == 2);
  const auto rep = report(dir);
  CHECK(rep.at("pass") == false);
  CHECK(rep.at("result").at("is_member") == false);
}

TEST_CASE("beurling rejects Y with a negative defect") {
  // Y = projection onto the vacuum: Delta(Y) = P_C - S P_C S^* has eigenvalue -1.
  const auto dir = scratch("rejectY");
  const auto cfg = write_config(
      dir, json{{"n", {1}}, {"D", 2}, {"Y", {{"dim", 3}, {"entries", {1, 0, 0, 0, 0, 0, 0, 0, 0}}}}});
  const auto r = lab(run_args("beurling", cfg.string(), dir), dir);
  CHECK(r.code == 2);
  const auto checks = report(dir).at("checks");
  REQUIRE(checks.size() == 1);
  CHECK(checks[0].at("detail").get<std::string>().find("condition (ii)") != std::string::npos);
  const auto csv = slurp(dir / "out" / "spectra.csv");
  CHECK(csv.find(",-1") != std::string::npos);
}

TEST_CASE("every example config runs cleanly") {
  const std::pair<const char*, const char*> runs[] = {
      {"rewrite", "rewrite_cfg_b.json"},       {"berezin", "shifts_berezin.json"},
      {"dilate", "random_dilate.json"},        {"wold", "wold_three_pieces.json"},
      {"beurling", "beurling_coinvariant.json"}, {"beurling", "beurling_planted.json"}};
  for (const auto& [cmd, file] : runs) {
    CAPTURE(file);
    const auto dir = scratch(std::string(cmd) + "-" + file);
    const auto r = lab(run_args(cmd, config(file), dir), dir);
    CHECK(r.code == 0);
    CHECK(report(dir).at("pass") == true);
  }
}

TEST_CASE("suite reports are deterministic up to timing") {
  auto strip = [](json rep) {
    rep.erase("wall_time_s");
    for (auto& rec : rep.at("result").at("records")) rec.erase("wall_time_s");
    return rep;
  };
  const auto a = scratch("suite-a");
  const auto b = scratch("suite-b");
  CHECK(lab(run_args("suite", config("suite_quick.json"), a), a).code == 0);
  CHECK(lab(run_args("suite", config("suite_quick.json"), b), b).code == 0);
  const auto ra = report(a);
  CHECK(ra.at("result").at("records").size() == 5);
  CHECK(strip(ra) == strip(report(b)));
}

TEST_CASE("schemas are emitted as JSON") {
  const auto dir = scratch("emit");
  const auto r = lab("--emit-schema", dir);
  CHECK(r.code == 0);
  const auto all = json::parse(r.out);
  CHECK(all.size() == 8);
  const auto one = lab("wold --emit-schema", dir);
  CHECK(json::parse(one.out).at("required") == json{"n", "pieces"});
  CHECK(lab("", dir).code == 1);
}
