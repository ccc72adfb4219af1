// cavity <command> --config <path> [--out <prefix>] [--threads N]
//
// Exit status: 0 success, 1 configuration / usage error, 2 numerical flag.

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "cavity/cli/config.hpp"
#include "cavity/cli/run.hpp"
#include "cavity/errors.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kNumericalFlag = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cavity::cli;

  CLI::App app{"Scattering-channel cavity QED: amplitudes, mode counts, energies, figures"};
  std::string command, config_path, prefix;
  unsigned threads = 1;
  app.add_option("command", command,
                 "scatter | dos | count-modes | energy-scan | atom-shift | figure3 | figure4")
      ->required();
  app.add_option("-c,--config", config_path, "key = value run configuration")->required();
  app.add_option("-o,--out", prefix, "output path prefix (overrides output.prefix)");
  app.add_option("-t,--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  const auto cmd = parse_command(command);
  if (!cmd) {
    std::cerr << "error: unknown command '" << command << "'\n";
    return kConfigError;
  }

  RunConfig cfg;
  try {
    cfg = parse_config(slurp(config_path), cmd);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error in " << config_path << ":\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  if (!prefix.empty()) cfg.prefix = prefix;
  cfg.threads = threads;

  try {
    return run(cfg, std::cerr);
  } catch (const cavity::PoleError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
  } catch (const cavity::ResonanceError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
  } catch (const cavity::ContourError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
  } catch (const std::domain_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
  } catch (const std::overflow_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kNumericalFlag;
}
