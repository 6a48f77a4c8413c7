#pragma once

// The murder-case network: a prosecution/defence hypothesis with four
// conditionally independent evidence items, a three-way Murderer node, the
// defendant's statement that the killer was a Samoan, whether the defendant
// knew the DNA report beforehand, and the DNA origin indicator (either the
// full marker subnetwork or a two-state report summarising it).

#include <array>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bnev/document.hpp"
#include "bnev/dna.hpp"
#include "bnev/inference.hpp"

namespace bnev::case_model {

inline constexpr const char* kHypothesis = "hypothesis";
inline constexpr const char* kMurderer = "murderer";
inline constexpr const char* kStatement = "says_samoan";
inline constexpr const char* kKnew = "knew_report";
inline constexpr const char* kDnaReport = "dna_report";
inline constexpr const char* kOrigin = dna::kOriginVar;

struct EvidenceItem {
  std::string id;
  std::string label;
  double p_if_killer = 0;
  double p_if_witness = 0;
};

struct CaseConfig {
  double prior_killer = 0.5;
  double samoan_share = 0.01;  // P(murderer = samoan | defendant is a witness)
  double prior_knew = 0.5;

  // P(statement = true | murderer, origin, knew); murderer-major, then origin
  // (true, false), then knew (true, false).
  std::array<double, 12> statement{1, 0.05, 0, 0.05, 0.5, 0, 0, 0, 1, 1, 0.99, 1};

  // P(unknown stain is of Samoan origin | murderer). A Samoan murderer leaves it
  // with certainty. Not printed with the case tables; calibration knob for the
  // statement/DNA interaction.
  double stain_samoan_if_defendant = 0.0028;
  double stain_samoan_if_other = 0.0028;

  // Two-state stand-in for the DNA subnetwork, likelihood ratio 0.99 / 0.0033 = 300.
  double report_if_samoan = 0.99;
  double report_if_not_samoan = 0.0033;

  std::array<EvidenceItem, 4> items{{
      {"running", "Defendant was running near scene", 0.99, 0.8},
      {"blood", "Victim's blood on his clothes", 0.9, 0.8},
      {"no_one_else", "No one else seen", 0.9, 0.1},
      {"silent", "Defendant remained silent", 0.9, 0.3},
  }};

  void validate() const {
    auto check = [](double p, const std::string& what) {
      if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::invalid_input, what + " must lie in [0,1]");
    };
    check(prior_killer, "prior_killer");
    check(samoan_share, "samoan_share");
    check(prior_knew, "prior_knew");
    for (double p : statement) check(p, "statement entry");
    check(stain_samoan_if_defendant, "stain_samoan_if_defendant");
    check(stain_samoan_if_other, "stain_samoan_if_other");
    check(report_if_samoan, "report_if_samoan");
    check(report_if_not_samoan, "report_if_not_samoan");
    for (const auto& item : items) {
      check(item.p_if_killer, item.id);
      check(item.p_if_witness, item.id);
    }
  }
};

inline const std::vector<std::string> kBool{"true", "false"};

/// Case network document. When `dna` is given, its origin indicator becomes
/// the statement's DNA parent and its remaining contents (subpopulation,
/// templates, instances) are carried over; otherwise a summary report node
/// hangs off a local origin indicator.
inline NetworkDocument build_case_document(const CaseConfig& cfg, const NetworkDocument* dna = nullptr) {
  cfg.validate();
  NetworkDocument doc;
  doc.metadata = {dna ? "samoan-case-dna" : "samoan-case",
                  dna ? "Murder case with the full heterogeneous-population DNA subnetwork"
                      : "Murder case with a summary DNA report node",
                  {kHypothesis, kMurderer}};

  NetworkBuilder b;
  b.add_variable(kHypothesis, "Defendant was the killer or a witness", {"killer", "witness"});
  b.add_cpt(kHypothesis, {}, {{cfg.prior_killer, 1 - cfg.prior_killer}});
  for (const auto& item : cfg.items) {
    b.add_variable(item.id, item.label, kBool);
    b.add_cpt(item.id, {kHypothesis},
              {{item.p_if_killer, 1 - item.p_if_killer}, {item.p_if_witness, 1 - item.p_if_witness}});
  }
  b.add_variable(kMurderer, "Murderer", {"defendant", "other", "samoan"});
  b.add_cpt(kMurderer, {kHypothesis}, {{1, 0, 0}, {0, 1 - cfg.samoan_share, cfg.samoan_share}});

  if (dna) {
    const Variable* origin = nullptr;
    for (const auto& v : dna->variables)
      if (v.id == kOrigin) origin = &v;
    if (!origin || origin->states != kBool)
      throw Error(ErrorKind::invalid_input, "incompatible DNA interface: no boolean '" + std::string(kOrigin) + "'");
    b.variables().push_back(*origin);
  } else {
    b.add_variable(kOrigin, "DNA profile of unknown sample is of a Samoan?", kBool);
  }
  b.add_cpt(kOrigin, {kMurderer},
            {{cfg.stain_samoan_if_defendant, 1 - cfg.stain_samoan_if_defendant},
             {cfg.stain_samoan_if_other, 1 - cfg.stain_samoan_if_other},
             {1, 0}});

  b.add_variable(kKnew, "Defendant knew about DNA report", kBool);
  b.add_cpt(kKnew, {}, {{cfg.prior_knew, 1 - cfg.prior_knew}});

  b.add_variable(kStatement, "Defendant says killer was a Samoan", kBool);
  std::vector<std::vector<double>> rows;
  for (double p : cfg.statement) rows.push_back({p, 1 - p});
  b.add_cpt(kStatement, {kMurderer, kOrigin, kKnew}, rows);

  if (dna) {
    for (const auto& v : dna->variables)
      if (v.id != kOrigin) b.variables().push_back(v);
    for (const auto& c : dna->cpts)
      if (c.child != kOrigin) b.cpts().push_back(c);
    doc.templates = dna->templates;
    doc.instances = dna->instances;
  } else {
    b.add_variable(kDnaReport, "DNA report supports Samoan theory", kBool);
    b.add_cpt(kDnaReport, {kOrigin},
              {{cfg.report_if_samoan, 1 - cfg.report_if_samoan},
               {cfg.report_if_not_samoan, 1 - cfg.report_if_not_samoan}});
  }
  doc.variables = std::move(b.variables());
  doc.cpts = std::move(b.cpts());
  return doc;
}

inline Network build_case_network(const CaseConfig& cfg, const Network* dna = nullptr) {
  if (!dna) return flatten(build_case_document(cfg));
  const auto dna_doc = document_of(*dna);
  return flatten(build_case_document(cfg, &dna_doc));
}

/// Two-node disease screening network: prevalence 0.01, sensitivity 0.99,
/// specificity 0.95.
inline NetworkDocument screening_document() {
  NetworkDocument doc;
  doc.metadata = {"screening-example", "Disease screening test", {"disease", "test"}};
  NetworkBuilder b;
  b.add_variable("disease", "Person has the disease", {"present", "absent"});
  b.add_cpt("disease", {}, {{0.01, 0.99}});
  b.add_variable("test", "Screening test result", {"positive", "negative"});
  b.add_cpt("test", {"disease"}, {{0.99, 0.01}, {0.05, 0.95}});
  doc.variables = std::move(b.variables());
  doc.cpts = std::move(b.cpts());
  return doc;
}

inline Network build_screening_example() { return flatten(screening_document()); }

struct ScenarioStep {
  std::string variable;
  std::string state;
  std::string label;

  bool operator==(const ScenarioStep&) const = default;
};

struct Scenario {
  std::string name;
  std::vector<ScenarioStep> steps;

  EvidenceSet evidence() const {
    EvidenceSet ev;
    for (const auto& s : steps) ev.set(s.variable, s.state);
    return ev;
  }

  bool operator==(const Scenario&) const = default;
};

struct TraceStep {
  std::optional<ScenarioStep> applied;  // empty for the initial, evidence-free step
  EvidenceSet evidence;
  std::vector<Distribution> posteriors;  // in watched order

  const Distribution& of(const std::string& var) const {
    for (const auto& d : posteriors)
      if (d.variable == var) return d;
    throw Error(ErrorKind::unknown_variable, "'" + var + "' is not watched");
  }
};

struct PosteriorTrace {
  std::string network;
  std::string scenario;
  std::vector<std::string> watched;
  std::vector<TraceStep> steps;

  const TraceStep& final_step() const { return steps.back(); }
};

/// Reports which step of a scenario made the evidence impossible.
class ScenarioError : public Error {
 public:
  ScenarioError(std::size_t step, const std::string& what)
      : Error(ErrorKind::zero_probability, what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

using PosteriorEngine = std::function<Distribution(const Network&, const EvidenceSet&, const std::string&)>;

inline Distribution default_engine(const Network& net, const EvidenceSet& ev, const std::string& var) {
  return posterior(net, ev, var);
}

/// Posteriors of `watched` before any step and after each cumulative
/// instantiation; `background` evidence holds in every step.
inline PosteriorTrace run_scenario(const Network& net, const Scenario& sc, std::vector<std::string> watched,
                                   const EvidenceSet& background = {},
                                   const PosteriorEngine& engine = default_engine) {
  PosteriorTrace trace{net.name(), sc.name, std::move(watched), {}};
  for (const auto& w : trace.watched) net.index_of(w);
  background.resolve(net);

  std::set<std::string> used;
  for (const auto& [v, _] : background) used.insert(v);
  for (std::size_t i = 0; i < sc.steps.size(); ++i) {
    const auto& s = sc.steps[i];
    net.state_index(net.index_of(s.variable), s.state);
    if (!used.insert(s.variable).second)
      throw Error(ErrorKind::invalid_input, "scenario instantiates '" + s.variable + "' twice");
  }

  EvidenceSet ev = background;
  for (std::size_t i = 0; i <= sc.steps.size(); ++i) {
    TraceStep step;
    if (i > 0) {
      step.applied = sc.steps[i - 1];
      ev.set(step.applied->variable, step.applied->state);
    }
    step.evidence = ev;
    try {
      for (const auto& w : trace.watched) step.posteriors.push_back(engine(net, ev, w));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::zero_probability) throw;
      throw ScenarioError(i, "step " + std::to_string(i) + " makes the evidence impossible");
    }
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

struct KnowledgeComparison {
  PosteriorTrace uninformed;  // knew_report = false
  PosteriorTrace informed;    // knew_report = true
  double guilt_gap = 0;       // informed minus uninformed final P(killer)
};

inline KnowledgeComparison knowledge_state_compare(const Network& net, const Scenario& base,
                                                   std::vector<std::string> watched = {kHypothesis, kMurderer}) {
  for (const auto& s : base.steps)
    if (s.variable == kKnew)
      throw Error(ErrorKind::invalid_input, "base scenario must not instantiate the knowledge node");
  if (std::find(watched.begin(), watched.end(), kHypothesis) == watched.end()) watched.push_back(kHypothesis);
  KnowledgeComparison out;
  out.uninformed = run_scenario(net, base, watched, EvidenceSet{{kKnew, "false"}});
  out.informed = run_scenario(net, base, watched, EvidenceSet{{kKnew, "true"}});
  out.guilt_gap = out.informed.final_step().of(kHypothesis)["killer"] -
                  out.uninformed.final_step().of(kHypothesis)["killer"];
  return out;
}

// Scenarios used throughout the case analysis.

inline Scenario items_scenario(const CaseConfig& cfg = {}) {
  Scenario sc{"case-items", {}};
  for (const auto& item : cfg.items) sc.steps.push_back({item.id, "true", item.label});
  return sc;
}

inline std::vector<ScenarioStep> dna_steps(const dna::CrimeProfile* profile) {
  if (!profile) return {{kDnaReport, "true", "DNA report supports Samoan theory"}};
  std::vector<ScenarioStep> out;
  for (const auto& m : profile->markers)
    out.push_back({m.marker + ".genotype", dna::genotype_label(m.genotype), "DNA marker " + m.marker});
  return out;
}

/// The four case items, then the statement, then the DNA evidence.
inline Scenario full_scenario(const dna::CrimeProfile* profile = nullptr, const CaseConfig& cfg = {}) {
  Scenario sc = items_scenario(cfg);
  sc.name = profile ? "full-sequence-dna" : "full-sequence";
  sc.steps.push_back({kStatement, "true", "Defendant says killer was a Samoan"});
  for (auto& s : dna_steps(profile)) sc.steps.push_back(std::move(s));
  return sc;
}

/// The statement precedes the DNA report, so the defendant cannot have known it.
inline Scenario sequence_one(const dna::CrimeProfile* profile = nullptr, const CaseConfig& cfg = {}) {
  Scenario sc = items_scenario(cfg);
  sc.name = "sequence-one";
  sc.steps.push_back({kStatement, "true", "Defendant says killer was a Samoan"});
  sc.steps.push_back({kKnew, "false", "Statement made before the DNA report existed"});
  for (auto& s : dna_steps(profile)) sc.steps.push_back(std::move(s));
  return sc;
}

/// The DNA report appears first and the defendant learns of it before speaking.
inline Scenario sequence_two(const dna::CrimeProfile* profile = nullptr, const CaseConfig& cfg = {}) {
  Scenario sc = items_scenario(cfg);
  sc.name = "sequence-two";
  for (auto& s : dna_steps(profile)) sc.steps.push_back(std::move(s));
  sc.steps.push_back({kKnew, "true", "Defendant learns of the DNA report"});
  sc.steps.push_back({kStatement, "true", "Defendant says killer was a Samoan"});
  return sc;
}

}  // namespace bnev::case_model
