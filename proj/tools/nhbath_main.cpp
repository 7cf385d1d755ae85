// nhbath — command-line front end for the non-Hermitian SSH bath simulator.
//
// Usage:
//   nhbath <experiment|configfile> [--key=value ...] [--out PREFIX]
//          [--threads N] [--validate-only]
//
// Exit status: 0 success, 2 configuration error, 3 numeric failure.

#include <cstring>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "nhbath/nhbath.hpp"

namespace {

void print_usage(std::ostream& os) {
  os << "nhbath " << nhbath::kVersion
     << " — quantum emitters coupled to a dissipative SSH photonic bath\n\n"
        "usage: nhbath <experiment|configfile> [--key=value ...] [--out PREFIX]\n"
        "              [--threads N] [--validate-only]\n\n"
        "experiments: spectrum gbz bound dressed dynamics disorder\n"
        "             fig2 fig3 fig4 fig5 figS3\n\n"
        "Config files are flat key=value lines with '#' comments; command-line\n"
        "--key=value overrides win. Unknown keys are rejected. Outputs are\n"
        "plot-ready CSV files plus a manifest.json recording every resolved\n"
        "parameter, the artifact version, and the seed.\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace nhbath;
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    print_usage(args.empty() ? std::cerr : std::cout);
    return args.empty() ? 2 : 0;
  }

  ExperimentConfig cfg;
  bool validate_only = false;
  try {
    const std::string& target = args[0];
    if (std::filesystem::exists(target) &&
        std::filesystem::is_regular_file(target)) {
      cfg = parse_config_file(target);
    } else if (known_experiments().count(target)) {
      cfg.kv["experiment"] = target;
    } else {
      throw ConfigError("'" + target +
                        "' is neither a config file nor a known experiment");
    }

    for (size_t i = 1; i < args.size(); ++i) {
      const std::string& a = args[i];
      if (a == "--validate-only") {
        validate_only = true;
      } else if (a == "--out" || a == "--threads") {
        if (i + 1 >= args.size())
          throw ConfigError("option '" + a + "' expects a value");
        cfg.kv[a.substr(2)] = args[++i];
      } else if (a.rfind("--", 0) == 0) {
        apply_override(cfg, a);
      } else {
        throw ConfigError("unexpected argument '" + a + "'");
      }
    }

    cfg.experiment();  // fail early with a clear message
    for (const auto& diag : validate(cfg))
      std::cerr << "validate: " << diag << "\n";
    if (validate_only) return 0;

    run_experiment(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numeric failure (" << e.name() << "): " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
