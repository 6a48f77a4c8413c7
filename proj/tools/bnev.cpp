// bnev: command-line front end for the inference engine, the case model and
// the DNA likelihood-ratio calculator.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bnev/cli.hpp"
#include "bnev/service.hpp"

namespace {

int emit(const bnev::cli::CommandResult& r) {
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  using bnev::cli::Format;
  CLI::App app{"Exact inference for discrete Bayesian networks and forensic evidence analysis"};
  app.require_subcommand(1);

  std::string network, scenario, freqs, mixture, profile, config, format_name = "table", watch, out_dir = "data";
  std::vector<std::string> evidence;
  int port = 8080;
  std::string host = "127.0.0.1";

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format_name, "Output format")->check(CLI::IsMember({"table", "structured"}));
  };

  auto* validate = app.add_subcommand("validate", "Parse and validate a network file");
  validate->add_option("--network,network", network, "Network file")->required();
  add_format(validate);

  auto* query = app.add_subcommand("query", "Posterior marginals given evidence");
  query->add_option("--network", network, "Network file")->required();
  query->add_option("--evidence", evidence, "Observations as variable=state")->delimiter(',');
  query->add_option("--watch", watch, "Comma-separated variables to report");
  add_format(query);

  auto* trace = app.add_subcommand("trace", "Posterior trace over a scenario");
  trace->add_option("--network", network, "Network file")->required();
  trace->add_option("--scenario", scenario, "Scenario file (omit for priors only)");
  trace->add_option("--watch", watch, "Comma-separated variables to report");
  add_format(trace);

  auto* lr = app.add_subcommand("lr", "DNA likelihood-ratio report");
  lr->add_option("--freqs", freqs, "Allele frequency CSV")->required();
  lr->add_option("--mixture", mixture, "Population mixture CSV")->required();
  lr->add_option("--profile", profile, "Crime profile CSV")->required();
  add_format(lr);

  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "Bundled walkthroughs");
  demo->add_option("name", demo_name, "Demo name")->required()->check(CLI::IsMember(bnev::cli::demo_names()));
  demo->add_option("--config", config, "CaseConfig overrides (JSON)");
  add_format(demo);

  auto* emit_cmd = app.add_subcommand("emit", "Re-emit a network file in canonical form");
  emit_cmd->add_option("--network,network", network, "Network file")->required();

  auto* export_cmd = app.add_subcommand("export", "Write the bundled data files");
  export_cmd->add_option("--dir", out_dir, "Output directory");

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--port", port, "Port");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--config", config, "CaseConfig overrides applied to bundled networks (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;  // usage errors count as parse failures
  }
  const Format format = format_name == "structured" ? Format::structured : Format::table;
  const auto watched = bnev::cli::split_list(watch);

  if (*validate) return emit(bnev::cli::cmd_validate(network, format));
  if (*query) return emit(bnev::cli::cmd_query(network, evidence, watched, format));
  if (*trace) return emit(bnev::cli::cmd_trace(network, scenario, watched, format));
  if (*lr) return emit(bnev::cli::cmd_lr(freqs, mixture, profile, format));
  if (*demo) return emit(bnev::cli::cmd_demo(demo_name, config, format));
  if (*emit_cmd) return emit(bnev::cli::cmd_emit(network));
  if (*export_cmd) return emit(bnev::cli::cmd_export(out_dir));
  if (*serve) {
    bnev::service::Options options;
    if (!config.empty()) {
      try {
        options.default_config = bnev::load_config(config);
      } catch (const bnev::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
      }
    }
    bnev::service::ApiService api(options);
    httplib::Server server;
    api.mount(server);
    std::cerr << "listening on http://" << host << ':' << port << '\n';
    return server.listen(host, port) ? 0 : 1;
  }
  return 0;
}
