// Command-line driver: `verify --config <path>` and `selftest`.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fgm/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Galois module structure of formal groups: verification runs"};
  app.require_subcommand(1);

  std::string config_path, format = "json";
  std::optional<fgm::u64> seed;
  std::optional<int> precision;
  auto* verify = app.add_subcommand("verify", "run the tasks of a configuration file");
  verify->add_option("--config", config_path, "configuration (JSON)")->required();
  verify->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
  verify->add_option("--seed", seed, "seed for randomized checks");
  verify->add_option("--precision", precision, "working precision N");

  std::string self_format = "json";
  std::optional<fgm::u64> self_seed;
  auto* selftest = app.add_subcommand("selftest", "run the built-in fixtures");
  selftest->add_option("--format", self_format, "report format")->check(CLI::IsMember({"json", "text"}));
  selftest->add_option("--seed", self_seed, "seed for randomized checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*verify) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "cannot read " << config_path << "\n";
        return 1;
      }
      std::stringstream ss;
      ss << in.rdbuf();
      fgm::RunConfig cfg = fgm::parse_config(ss.str());
      if (seed) cfg.seed = *seed;
      if (precision) {
        if (*precision < 4) throw fgm::Error(fgm::ErrorCode::ConfigParseError, "precision must be at least 4");
        cfg.precision = *precision;
      }
      fgm::Report r = fgm::run(cfg);
      std::cout << fgm::emit(r, format);
      return r.exit_code();
    }
    int code = 0;
    std::cout << fgm::selftest(self_seed, self_format, code);
    return code;
  } catch (const fgm::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == fgm::ErrorCode::ConfigParseError || e.code() == fgm::ErrorCode::PrecisionTooHigh ||
                   e.code() == fgm::ErrorCode::PrecisionTooLow || e.code() == fgm::ErrorCode::NotEisenstein ||
                   e.code() == fgm::ErrorCode::NotIrreducibleResidue
               ? 1
               : 3;
  }
}
