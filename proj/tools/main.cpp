#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "betaproc/cli.hpp"
#include "betaproc/config.hpp"
#include "betaproc/io.hpp"

using namespace betaproc;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<std::string> format;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "experiment configuration file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "override the master seed");
  cmd->add_option("--out", o.out, "override the output directory");
  cmd->add_option("--threads", o.threads, "worker cap, 0 = all cores");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

cli::ExperimentConfig resolve(const Overrides& o) {
  auto c = cli::load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.out = *o.out;
  if (o.threads) c.threads = *o.threads;
  if (o.format) c.format = *o.format == "csv" ? cli::OutputFormat::csv : cli::OutputFormat::json;
  c.validate();
  return c;
}

int report(const cli::CommandResult& r) {
  for (const auto& l : r.lines) std::cout << l << "\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification of beta-Hermite and beta-Laguerre matrix processes"};
  app.set_version_flag("--version", std::string("betaproc ") + io::kToolVersion);
  app.require_subcommand(1);

  Overrides sample_opts, verify_opts;
  auto* sample = app.add_subcommand("sample", "simulate matrix paths and write snapshots");
  add_common(sample, sample_opts);
  auto* verify = app.add_subcommand("verify", "run the configured check and write report.json");
  add_common(verify, verify_opts);

  std::vector<std::string> plot_inputs;
  std::string plot_out = ".";
  auto* plot = app.add_subcommand("plot", "render spectral tables or curves as SVG");
  plot->add_option("inputs", plot_inputs, "files written by sample (spectral tables) or verify (curve.csv)");
  plot->add_option("--out", plot_out, "output directory");

  std::string template_out;
  auto* tmpl = app.add_subcommand("config-template", "print a configuration with every default");
  tmpl->add_option("--out", template_out, "write to this file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample) return report(cli::cmd_sample(resolve(sample_opts)));
    if (*verify) return report(cli::cmd_verify(resolve(verify_opts)));
    if (*plot) return report(cli::cmd_plot(plot_inputs, plot_out));
    if (*tmpl) {
      if (template_out.empty())
        std::cout << cli::template_text();
      else
        io::write_text_file(template_out, cli::template_text());
      return 0;
    }
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
