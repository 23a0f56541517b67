#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "kothe/cli.hpp"

namespace {

int fail(int status, const std::string& msg) {
  std::cerr << "kothe: " << msg << "\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multipliers, essential norms and conjugates on Kothe sequence spaces"};
  std::string command, config_path, out, format;
  std::uint64_t seed = 0;
  app.add_option("command", command,
                 "norm | dual | mult-space | mult-norm | ess-norm | compact-check | conjugate | factorize-check | "
                 "lemma-r | verify-paper")
      ->required();
  app.add_option("--config", config_path, "JSON job file");
  app.add_option("--out", out, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  app.add_option("--format", format, "table or csv")->check(CLI::IsMember({"table", "csv"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  kothe::JobConfig cfg;
  try {
    kothe::Command cmd = kothe::parse_command(command);
    if (config_path.empty()) {
      if (cmd != kothe::Command::VerifyPaper) return fail(2, "--config is required for " + command);
      cfg.command = cmd;
    } else {
      std::ifstream f(config_path);
      if (!f) return fail(2, "cannot read " + config_path);
      std::stringstream ss;
      ss << f.rdbuf();
      cfg = kothe::parse_config_text(ss.str());
      if (cfg.command != cmd)
        return fail(2, "command '" + command + "' does not match config command '" + kothe::to_string(cfg.command) +
                           "'");
    }
  } catch (const kothe::Error& e) {
    return fail(2, e.what());
  }
  if (*seed_opt) {
    cfg.seed = seed;
    cfg.oracle.seed = seed;
  }
  if (format == "csv") cfg.format = kothe::OutputFormat::Csv;
  if (format == "table") cfg.format = kothe::OutputFormat::Table;
  if (!out.empty()) cfg.out = out;

  kothe::RunResult r = kothe::run(cfg);
  if (!r.report.error.empty()) std::cerr << "kothe: " << r.report.error << "\n";
  bool csv = cfg.format == kothe::OutputFormat::Csv;
  try {
    if (cfg.out.empty()) {
      std::cout << (csv ? kothe::format_csv(r.report) : kothe::format_table(r.report));
    } else {
      std::string path = cfg.out + "/" + kothe::report_stem(r.report) + (csv ? ".csv" : ".txt");
      csv ? kothe::emit_csv(r.report, path) : kothe::emit_table(r.report, path);
    }
  } catch (const std::exception& e) {
    return fail(3, e.what());
  }
  return r.status;
}
