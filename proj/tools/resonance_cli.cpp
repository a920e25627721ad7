#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "resonance/commands.hpp"
#include "resonance/config.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::vector<std::string> params;
  std::string seed;
  std::string tol;
  unsigned threads = 1;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os << text;
  if (!os) throw resonance::Error("cannot write " + path.string());
}

int run(const std::string& command, const Flags& f) {
  using namespace resonance;
  std::vector<std::pair<std::string, std::string>> overrides;
  for (const auto& p : f.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("-p expects key=value, got '" + p + "'");
    overrides.emplace_back(p.substr(0, eq), p.substr(eq + 1));
  }
  if (!f.seed.empty()) overrides.emplace_back("seed", f.seed);
  if (!f.tol.empty()) overrides.emplace_back("tol", f.tol);
  const auto cfg = ExperimentConfig::resolve(command, f.config, overrides);
  const auto result = run_command(cfg, std::max(1u, f.threads));
  const std::string json = result.report.dump(2) + "\n";
  if (!f.out.empty()) {
    std::filesystem::create_directories(f.out);
    write_file(std::filesystem::path(f.out) / (command + ".json"), json);
    if (!result.csv.empty()) write_file(std::filesystem::path(f.out) / (command + ".csv"), result.csv);
  } else {
    std::cout << (result.csv_primary ? result.csv : json);
  }
  if (result.exit_code != kExitPass) std::cerr << command << ": checks failed (see report)\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyclotomic Dedekind zeta resonance toolkit"};
  app.set_version_flag("--version", std::string(resonance::library_version()));
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"coeffs", "coefficient table a_K(n), a(n) with the character oracle (CSV)"},
      {"gcdsum", "layered sets, weighted GCD sums and identity checks (JSON)"},
      {"kernel", "kernel transform grid and property checks (CSV + JSON)"},
      {"resonator", "resonator construction, A_d and diagnostics (JSON + CSV)"},
      {"verify", "kernel suite and convolution identities over a seeded sweep (JSON)"},
      {"hunt", "resonator-guided large-value search (JSON + CSV)"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "key=value config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "generator seed (u64)");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--tol", flags.tol, "tolerance");
    sub->add_option("--threads", flags.threads, "worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("-p,--param", flags.params, "parameter override key=value (repeatable)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : resonance::kExitInvalid;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, flags);
  } catch (const resonance::InvalidArgument& e) {
    std::cerr << command << ": invalid configuration: " << e.what() << '\n';
    return resonance::kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << command << ": " << e.what() << '\n';
    return resonance::kExitFail;
  }
}
