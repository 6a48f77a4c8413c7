#pragma once

// Output renderers shared by the CLI and the HTTP service. The structured
// (JSON) form is the machine contract; the table form is for people.

#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "bnev/case_model.hpp"
#include "bnev/dna.hpp"
#include "bnev/network_file.hpp"

namespace bnev {

/// Rounds to 10 significant digits so that numerically equivalent results
/// from different inference routes render identically.
inline double rounded(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return std::strtod(buf, nullptr);
}

inline std::string render(const ojson& j) { return j.dump(2) + "\n"; }

inline ojson distribution_json(const Distribution& d) {
  ojson j = ojson::object();
  for (std::size_t s = 0; s < d.states.size(); ++s) j[d.states[s]] = rounded(d.probs[s]);
  return j;
}

inline ojson evidence_json(const EvidenceSet& ev) {
  ojson j = ojson::object();
  for (const auto& [v, s] : ev) j[v] = s;
  return j;
}

inline ojson marginals_json(const EvidenceSet& ev, const std::vector<Distribution>& marginals) {
  ojson j;
  j["evidence"] = evidence_json(ev);
  j["marginals"] = ojson::object();
  for (const auto& d : marginals) j["marginals"][d.variable] = distribution_json(d);
  return j;
}

inline ojson step_json(const case_model::ScenarioStep& s) {
  ojson j;
  j["variable"] = s.variable;
  j["state"] = s.state;
  j["label"] = s.label;
  return j;
}

inline ojson trace_json(const case_model::PosteriorTrace& trace) {
  ojson j;
  j["network"] = trace.network;
  j["scenario"] = trace.scenario;
  j["watched"] = trace.watched;
  j["steps"] = ojson::array();
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    ojson sj;
    sj["step"] = i;
    sj["applied"] = s.applied ? step_json(*s.applied) : ojson(nullptr);
    sj["evidence"] = evidence_json(s.evidence);
    sj["posteriors"] = ojson::object();
    for (const auto& d : s.posteriors) sj["posteriors"][d.variable] = distribution_json(d);
    j["steps"].push_back(std::move(sj));
  }
  return j;
}

inline ojson knowledge_json(const case_model::KnowledgeComparison& k) {
  ojson j;
  j["uninformed"] = trace_json(k.uninformed);
  j["informed"] = trace_json(k.informed);
  j["guilt_gap"] = rounded(k.guilt_gap);
  return j;
}

inline ojson lr_report_json(const dna::LrReport& r) {
  ojson j;
  j["markers"] = ojson::array();
  for (const auto& m : r.markers) {
    ojson mj;
    mj["marker"] = m.marker;
    mj["p_hp"] = rounded(m.p_hp);
    mj["p_hd"] = rounded(m.p_hd);
    mj["lr"] = rounded(m.lr);
    const auto [hp, hd] = m.normalized();
    mj["p_hp_normalized"] = rounded(hp);
    mj["p_hd_normalized"] = rounded(hd);
    j["markers"].push_back(std::move(mj));
  }
  j["product_rule"] = rounded(r.product_rule);
  j["exact"] = rounded(r.exact);
  j["exact_posterior"] = rounded(r.exact_posterior);
  j["mixture"] = ojson::array();
  for (std::size_t i = 0; i < r.mixture.populations.size(); ++i)
    j["mixture"].push_back({{"population", r.mixture.populations[i]}, {"weight", r.mixture.weights[i]}});
  j["profile"] = ojson::array();
  for (const auto& m : r.profile.markers)
    j["profile"].push_back({{"marker", m.marker}, {"allele1", m.genotype.allele1}, {"allele2", m.genotype.allele2}});
  return j;
}

inline ojson validation_json(const ValidationReport& report) {
  ojson j;
  j["ok"] = report.ok();
  j["violations"] = ojson::array();
  for (const auto& v : report.violations) j["violations"].push_back({{"subject", v.subject}, {"message", v.message}});
  return j;
}

inline ojson error_json(ErrorKind kind, const std::string& message, const ValidationReport* report = nullptr) {
  ojson j;
  j["error"]["kind"] = to_string(kind);
  j["error"]["message"] = message;
  j["error"]["violations"] = report ? validation_json(*report)["violations"] : ojson::array();
  return j;
}

// Human-readable tables.

inline std::string format_probability(double p) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << p;
  return out.str();
}

inline std::string trace_table(const case_model::PosteriorTrace& trace) {
  std::vector<std::string> headers{"step", "evidence"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& d : trace.steps.front().posteriors)
    for (const auto& s : d.states) headers.push_back(d.variable + "=" + s);
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& st = trace.steps[i];
    std::vector<std::string> row{std::to_string(i),
                                 st.applied ? (st.applied->label.empty()
                                                   ? st.applied->variable + "=" + st.applied->state
                                                   : st.applied->label)
                                            : "(prior)"};
    for (const auto& d : st.posteriors)
      for (double p : d.probs) row.push_back(format_probability(p));
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> width(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    width[c] = headers[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream out;
  if (!trace.network.empty() || !trace.scenario.empty())
    out << "network: " << trace.network << "  scenario: " << trace.scenario << '\n';
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out << "  ";
      if (c == 1) out << std::left << std::setw(static_cast<int>(width[c])) << cells[c];
      else out << std::right << std::setw(static_cast<int>(width[c])) << cells[c];
    }
    out << '\n';
  };
  line(headers);
  for (const auto& r : rows) line(r);
  return out.str();
}

inline std::string marginals_table(const EvidenceSet& ev, const std::vector<Distribution>& marginals) {
  std::ostringstream out;
  out << "evidence:";
  if (ev.empty()) out << " (none)";
  for (const auto& [v, s] : ev) out << ' ' << v << '=' << s;
  out << '\n';
  for (const auto& d : marginals) {
    out << d.variable << '\n';
    for (std::size_t s = 0; s < d.states.size(); ++s)
      out << "  " << std::left << std::setw(16) << d.states[s] << format_probability(d.probs[s]) << '\n';
  }
  return out.str();
}

inline std::string lr_report_table(const dna::LrReport& r) {
  std::ostringstream out;
  out << std::left << std::setw(14) << "marker" << std::right << std::setw(12) << "Pr(E|Hp)" << std::setw(12)
      << "Pr(E|Hd)" << std::setw(12) << "LR" << '\n';
  for (const auto& m : r.markers) {
    const auto [hp, hd] = m.normalized();
    out << std::left << std::setw(14) << m.marker << std::right << std::fixed << std::setprecision(3)
        << std::setw(12) << hp << std::setw(12) << hd << std::setprecision(2) << std::setw(12) << m.lr << '\n';
  }
  out << std::left << std::setw(38) << "product rule" << std::right << std::setw(12) << std::setprecision(2)
      << r.product_rule << '\n';
  out << std::left << std::setw(14) << "exact" << std::right << std::setprecision(4) << std::setw(12)
      << r.exact_posterior << std::setw(12) << (1.0 - r.exact_posterior) << std::setprecision(2) << std::setw(12)
      << r.exact << '\n';
  out << "mixture:";
  for (std::size_t i = 0; i < r.mixture.populations.size(); ++i)
    out << ' ' << r.mixture.populations[i] << '=' << std::setprecision(4) << r.mixture.weights[i];
  out << '\n';
  return out.str();
}

}  // namespace bnev
