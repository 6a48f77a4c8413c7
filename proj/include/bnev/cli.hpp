#pragma once

// Command implementations behind the `bnev` executable. Each returns its exit
// status and output text instead of touching the process streams, so tests
// can call them directly.
//
// Exit codes: 0 success, 1 validation or parse failure, 2 inference error.

#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bnev/bundled.hpp"
#include "bnev/dna_io.hpp"
#include "bnev/structured.hpp"

namespace bnev::cli {

enum class Format { table, structured };

struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::zero_probability:
    case ErrorKind::state_space_overflow:
      return 2;
    default:
      return 1;
  }
}

template <typename Body>
CommandResult guarded(Format format, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    CommandResult r{exit_code_for(e.kind()), {}, {}};
    if (format == Format::structured) r.out = render(error_json(e.kind(), e.what()));
    r.err = std::string("error: ") + e.what() + "\n";
    return r;
  }
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

inline std::vector<std::string> resolve_watch(const NetworkDocument& doc, const Network& net,
                                              const std::vector<std::string>& watch) {
  if (!watch.empty()) return watch;
  if (!doc.metadata.default_watch.empty()) return doc.metadata.default_watch;
  std::vector<std::string> all;
  for (const auto& v : net.variables()) all.push_back(v.id);
  return all;
}

inline EvidenceSet parse_evidence(const std::vector<std::string>& items) {
  EvidenceSet ev;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      throw Error(ErrorKind::parse, "evidence '" + item + "' is not of the form variable=state");
    const auto var = item.substr(0, eq);
    if (ev.contains(var)) throw Error(ErrorKind::invalid_input, "variable '" + var + "' observed twice");
    ev.set(var, item.substr(eq + 1));
  }
  return ev;
}

inline CommandResult cmd_validate(const std::string& path, Format format = Format::table) {
  return guarded(format, [&] {
    const auto doc = load_document(path);
    const auto report = validate_document(doc);
    CommandResult r{report.ok() ? 0 : 1, {}, {}};
    if (format == Format::structured) r.out = render(validation_json(report));
    else r.out = report.ok() ? "ok\n" : report.to_string();
    return r;
  });
}

inline CommandResult cmd_query(const std::string& path, const std::vector<std::string>& evidence,
                               const std::vector<std::string>& watch, Format format = Format::table) {
  return guarded(format, [&] {
    const auto doc = load_document(path);
    const auto net = flatten(doc);
    const auto ev = parse_evidence(evidence);
    std::vector<Distribution> marginals;
    for (const auto& w : resolve_watch(doc, net, watch)) marginals.push_back(posterior(net, ev, w));
    CommandResult r;
    r.out = format == Format::structured ? render(marginals_json(ev, marginals)) : marginals_table(ev, marginals);
    return r;
  });
}

inline CommandResult cmd_trace(const std::string& network_path, const std::string& scenario_path,
                               const std::vector<std::string>& watch, Format format = Format::table) {
  return guarded(format, [&] {
    const auto doc = load_document(network_path);
    const auto net = flatten(doc);
    case_model::Scenario sc;
    if (!scenario_path.empty()) sc = load_scenario(scenario_path);
    const auto trace = case_model::run_scenario(net, sc, resolve_watch(doc, net, watch));
    CommandResult r;
    r.out = format == Format::structured ? render(trace_json(trace)) : trace_table(trace);
    return r;
  });
}

inline CommandResult cmd_lr(const std::string& freqs, const std::string& mixture, const std::string& profile,
                            Format format = Format::table) {
  return guarded(format, [&] {
    const auto report = dna::lr_report(dna::load_inputs(freqs, mixture, profile));
    CommandResult r;
    r.out = format == Format::structured ? render(lr_report_json(report)) : lr_report_table(report);
    return r;
  });
}

inline const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names{"screening", "samoan-sequence-one", "samoan-sequence-two"};
  return names;
}

inline CommandResult cmd_demo(const std::string& name, const std::string& config_path = {},
                              Format format = Format::table) {
  return guarded(format, [&] {
    const auto cfg = config_path.empty() ? case_model::CaseConfig{} : load_config(config_path);
    CommandResult r;
    if (name == "screening") {
      const auto net = case_model::build_screening_example();
      const double p_pos = likelihood_of_evidence(net, {{"test", "positive"}});
      const double p_d_pos = posterior(net, {{"test", "positive"}}, "disease")["present"];
      const double p_d_neg = posterior(net, {{"test", "negative"}}, "disease")["present"];
      const double lr = likelihood_ratio(net, {{"test", "positive"}}, "disease", "present", "absent");
      if (format == Format::structured) {
        ojson j;
        j["demo"] = name;
        j["p_positive"] = rounded(p_pos);
        j["p_disease_given_positive"] = rounded(p_d_pos);
        j["p_disease_given_negative"] = rounded(p_d_neg);
        j["likelihood_ratio"] = rounded(lr);
        r.out = render(j);
      } else {
        std::ostringstream out;
        out << "Screening test: prevalence 0.01, sensitivity 0.99, specificity 0.95\n"
            << "P(test positive)              = " << format_probability(p_pos) << '\n'
            << "P(disease | test positive)    = " << format_probability(p_d_pos) << '\n'
            << "P(disease | test negative)    = " << std::setprecision(6) << std::fixed << p_d_neg << '\n'
            << "LR of a positive test         = " << std::setprecision(2) << lr << '\n';
        r.out = out.str();
      }
      return r;
    }
    if (name != "samoan-sequence-one" && name != "samoan-sequence-two")
      throw Error(ErrorKind::invalid_input, "unknown demo '" + name + "'");

    const auto profile = dna::case_profile();
    const auto dna_doc = dna::dna_document(dna::case_inputs());
    const auto net = flatten(case_model::build_case_document(cfg, &dna_doc));
    const auto sc = name == "samoan-sequence-one" ? case_model::sequence_one(&profile, cfg)
                                                  : case_model::sequence_two(&profile, cfg);
    const auto trace = case_model::run_scenario(net, sc, {case_model::kHypothesis, case_model::kMurderer});
    const double guilt = trace.final_step().of(case_model::kHypothesis)["killer"];
    if (format == Format::structured) {
      ojson j;
      j["demo"] = name;
      j["final_guilt"] = rounded(guilt);
      j["trace"] = trace_json(trace);
      r.out = render(j);
    } else {
      r.out = trace_table(trace) + "final P(defendant is the killer) = " + format_probability(guilt) + "\n";
    }
    return r;
  });
}

/// Re-emits a network file in canonical form.
inline CommandResult cmd_emit(const std::string& path) {
  return guarded(Format::table, [&] { return CommandResult{0, emit_document(load_document(path)), {}}; });
}

/// Writes every bundled network, scenario and DNA input file under `dir`.
inline CommandResult cmd_export(const std::string& dir) {
  return guarded(Format::table, [&] {
    namespace fs = std::filesystem;
    std::ostringstream log;
    auto put = [&](const fs::path& p, const std::string& text) {
      fs::create_directories(p.parent_path());
      write_file(p.string(), text);
      log << p.string() << '\n';
    };
    for (const auto& b : bundled_networks())
      put(fs::path(dir) / "networks" / (b.name + ".json"), emit_document(b.build({})));
    for (const auto& sc : bundled_scenarios()) put(fs::path(dir) / "scenarios" / (sc.name + ".json"), emit_scenario(sc));
    const auto in = dna::case_inputs();
    put(fs::path(dir) / "dna" / "frequencies.csv", dna::emit_frequencies(in.freqs));
    put(fs::path(dir) / "dna" / "mixture.csv", dna::emit_mixture(in.mixture));
    put(fs::path(dir) / "dna" / "profile.csv", dna::emit_profile(in.profile));
    return CommandResult{0, log.str(), {}};
  });
}

}  // namespace bnev::cli
