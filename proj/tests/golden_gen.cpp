// Writes the golden trace files from the brute-force enumeration engine.
// Usage: golden_gen [output-dir]   (defaults to tests/golden in the source tree)

#include <filesystem>
#include <iostream>

#include "bnev/brute_force.hpp"
#include "bnev/cli.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  const fs::path source(BNEV_SOURCE_DIR);
  const fs::path out = argc > 1 ? fs::path(argv[1]) : source / "tests" / "golden";
  fs::create_directories(out);

  struct Case {
    const char* network;
    const char* scenario;  // empty: priors only
    const char* file;
  };
  const Case cases[] = {
      {"samoan-case", "full-sequence", "samoan-case.full-sequence.json"},
      {"samoan-case", "", "samoan-case.priors.json"},
      {"screening-example", "screening-positive", "screening-example.screening-positive.json"},
  };
  try {
    for (const auto& c : cases) {
      const auto doc = bnev::load_document((source / "data" / "networks" / (std::string(c.network) + ".json")).string());
      const auto net = bnev::flatten(doc);
      bnev::case_model::Scenario sc;
      if (*c.scenario)
        sc = bnev::load_scenario((source / "data" / "scenarios" / (std::string(c.scenario) + ".json")).string());
      const auto trace = bnev::case_model::run_scenario(net, sc, bnev::cli::resolve_watch(doc, net, {}), {},
                                                        bnev::brute_force_posterior);
      bnev::write_file((out / c.file).string(), bnev::render(bnev::trace_json(trace)));
      std::cout << (out / c.file).string() << '\n';
    }
  } catch (const bnev::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
