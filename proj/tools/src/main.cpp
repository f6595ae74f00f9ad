#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "polyball/errors.hpp"
#include "schema.hpp"

namespace {

// 0: all checks pass; 2: some check failed; 1: bad configuration or usage.
int execute(const std::string& command, const std::string& config_path, const std::string& output_dir) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read " << config_path << '\n';
    return 1;
  }
  std::stringstream text;
  text << in.rdbuf();
  const auto start = std::chrono::steady_clock::now();
  try {
    auto cfg = lab::load_config(command, lab::parse_and_validate(command, text.str()));
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    const auto report = lab::run_command(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    lab::write_outputs(report, cfg, seconds);
    std::cout << report.summary;
    std::cout << (report.pass() ? "PASS" : "FAIL") << "  report: " << (cfg.output_dir / "report.json").string()
              << '\n';
    return report.pass() ? 0 : 2;
  } catch (const polyball::ConfigError& e) {
    std::cerr << "config error";
    if (!e.pointer().empty()) std::cerr << " at " << e.pointer();
    std::cerr << ": " << e.what() << '\n';
    return 1;
  } catch (const polyball::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for regular Lambda-polyballs and their noncommutative Fock models"};
  app.require_subcommand(0, 1);
  bool emit_all = false;
  app.add_flag("--emit-schema", emit_all, "Print the JSON schema of every subcommand and exit");

  struct Sub {
    CLI::App* app = nullptr;
    std::string config;
    std::string output_dir;
    bool emit = false;
  };
  std::vector<Sub> subs(lab::commands().size());
  static const std::map<std::string, std::string> blurbs{
      {"check", "Membership, purity and defect spectrum of a concrete tuple"},
      {"rewrite", "Normal forms of letter words, with confluence and faithfulness checks"},
      {"vn", "von Neumann inequality ||f(T)|| <= ||f(S)||"},
      {"berezin", "Berezin kernel and transform of a tuple"},
      {"dilate", "Minimal dilation, and Brehmer moments when every n_i = 1"},
      {"wold", "Assemble a tuple from Wold pieces and recover its wandering data"},
      {"beurling", "Co-invariant and invariant subspaces of the model; Y = A A* factorizations"},
      {"suite", "The ten acceptance checks"}};
  for (std::size_t q = 0; q < subs.size(); ++q) {
    const auto& name = lab::commands()[q];
    auto& s = subs[q];
    s.app = app.add_subcommand(name, blurbs.at(name));
    s.app->add_option("--config", s.config, "JSON configuration file")->check(CLI::ExistingFile);
    s.app->add_option("--output-dir", s.output_dir, "Overrides output_dir from the configuration");
    s.app->add_flag("--emit-schema", s.emit, "Print the configuration schema and exit");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (emit_all) {
    nlohmann::json all = nlohmann::json::object();
    for (const auto& name : lab::commands()) all[name] = lab::command_schema(name);
    std::cout << all.dump(2) << '\n';
    return 0;
  }
  for (std::size_t q = 0; q < subs.size(); ++q) {
    const auto& s = subs[q];
    if (!s.app->parsed()) continue;
    const auto& name = lab::commands()[q];
    if (s.emit) {
      std::cout << lab::command_schema(name).dump(2) << '\n';
      return 0;
    }
    if (s.config.empty()) {
      std::cerr << "usage error: " << name << " needs --config\n";
      return 1;
    }
    return execute(name, s.config, s.output_dir);
  }
  std::cout << app.help();
  return 1;
}
