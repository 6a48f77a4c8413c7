#pragma once

#include <string>
#include <vector>

#include "bnev/network.hpp"
#include "bnev/oobn.hpp"

namespace bnev {

struct DocumentMetadata {
  std::string name;
  std::string description;
  std::vector<std::string> default_watch;

  bool operator==(const DocumentMetadata&) const = default;
};

/// The contents of a network file before flattening. Template instances are
/// spliced into the host variables and Cpts by flatten().
struct NetworkDocument {
  DocumentMetadata metadata;
  std::vector<Variable> variables;
  std::vector<Cpt> cpts;
  std::vector<NetworkTemplate> templates;
  std::vector<TemplateInstance> instances;

  bool operator==(const NetworkDocument&) const = default;
};

inline NetworkDocument document_of(const Network& net) {
  NetworkDocument doc;
  doc.metadata.name = net.name();
  doc.variables = net.variables();
  doc.cpts = net.cpts();
  return doc;
}

/// Validation that never throws for content problems: host violations, then
/// template violations, then instantiation failures.
inline ValidationReport validate_document(const NetworkDocument& doc) {
  Network host(doc.variables, doc.cpts, doc.metadata.name);
  ValidationReport report = validate_network(host);
  for (const auto& t : doc.templates) {
    auto r = validate_template(t);
    report.violations.insert(report.violations.end(), r.violations.begin(), r.violations.end());
  }
  if (!report.ok()) return report;
  try {
    instantiate_all(Network::create(doc.variables, doc.cpts, doc.metadata.name), doc.instances, doc.templates);
  } catch (const Error& e) {
    report.violations.push_back({doc.metadata.name, e.what()});
  }
  return report;
}

/// Builds the flat, validated Network described by `doc`.
inline Network flatten(const NetworkDocument& doc) {
  Network host = Network::create(doc.variables, doc.cpts, doc.metadata.name);
  return instantiate_all(std::move(host), doc.instances, doc.templates);
}

}  // namespace bnev
