#pragma once

// Networks and scenarios shipped with the project. The files under data/ are
// emitted from these builders (`bnev export`) and checked for byte identity.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bnev/case_model.hpp"
#include "bnev/reference_data.hpp"

namespace bnev {

struct BundledNetwork {
  std::string name;
  std::string description;
  std::function<NetworkDocument(const case_model::CaseConfig&)> build;
};

inline std::vector<BundledNetwork> bundled_networks() {
  return {
      {"samoan-case", "Murder case with a summary DNA report node",
       [](const case_model::CaseConfig& cfg) { return case_model::build_case_document(cfg); }},
      {"samoan-case-dna", "Murder case with the full heterogeneous-population DNA subnetwork",
       [](const case_model::CaseConfig& cfg) {
         const auto dna_doc = dna::dna_document(dna::case_inputs());
         return case_model::build_case_document(cfg, &dna_doc);
       }},
      {"screening-example", "Disease screening test",
       [](const case_model::CaseConfig&) { return case_model::screening_document(); }},
  };
}

inline std::optional<NetworkDocument> bundled_document(const std::string& name,
                                                       const case_model::CaseConfig& cfg = {}) {
  for (const auto& b : bundled_networks())
    if (b.name == name) return b.build(cfg);
  return std::nullopt;
}

inline std::vector<case_model::Scenario> bundled_scenarios() {
  using namespace case_model;
  const auto profile = dna::case_profile();
  return {
      items_scenario(),
      full_scenario(),
      full_scenario(&profile),
      sequence_one(&profile),
      sequence_two(&profile),
      Scenario{"screening-positive", {{"test", "positive", "Test is positive"}}},
  };
}

}  // namespace bnev
