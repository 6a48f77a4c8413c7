#pragma once

// Heterogeneous-population DNA evidence.
//
// Each typed marker becomes an instance of one marker template: maternal and
// paternal gene nodes over the profile's alleles plus an aggregated "other"
// allele, and a genotype node that is the unordered pair of the two genes.
// Gene nodes depend on the origin indicator and on a single subpopulation
// selector shared by every marker; sharing the selector is what makes the
// markers dependent, so the exact joint LR differs from the product of the
// per-marker LRs.

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bnev/document.hpp"
#include "bnev/inference.hpp"

namespace bnev::dna {

inline constexpr const char* kOriginVar = "dna_samoan";
inline constexpr const char* kSubpopulationVar = "subpopulation";
inline constexpr const char* kMarkerTemplate = "marker";
inline constexpr const char* kOtherAllele = "other";

class AlleleFrequencyTable {
 public:
  void set(const std::string& marker, const std::string& allele, const std::string& population,
           double frequency) {
    table_[marker][population][allele] = frequency;
  }

  bool has(const std::string& marker, const std::string& population, const std::string& allele) const {
    auto m = table_.find(marker);
    if (m == table_.end()) return false;
    auto p = m->second.find(population);
    return p != m->second.end() && p->second.count(allele) > 0;
  }

  double frequency(const std::string& marker, const std::string& population,
                   const std::string& allele) const {
    if (!has(marker, population, allele))
      throw Error(ErrorKind::invalid_input, "missing allele frequency for " + marker + " allele " +
                                                allele + " in population " + population);
    return table_.at(marker).at(population).at(allele);
  }

  /// (marker, allele, population, frequency) in sorted order.
  template <typename Visit>
  void for_each(Visit&& visit) const {
    for (const auto& [marker, pops] : table_)
      for (const auto& [pop, alleles] : pops)
        for (const auto& [allele, f] : alleles) visit(marker, allele, pop, f);
  }

  bool operator==(const AlleleFrequencyTable&) const = default;

 private:
  std::map<std::string, std::map<std::string, std::map<std::string, double>>> table_;
};

struct Genotype {
  std::string allele1;
  std::string allele2;

  bool homozygous() const { return allele1 == allele2; }
  bool operator==(const Genotype&) const = default;
};

struct MarkerTyping {
  std::string marker;
  Genotype genotype;

  bool operator==(const MarkerTyping&) const = default;
};

/// Observed genotypes in a fixed marker order.
struct CrimeProfile {
  std::vector<MarkerTyping> markers;

  const Genotype& at(const std::string& marker) const {
    for (const auto& m : markers)
      if (m.marker == marker) return m.genotype;
    throw Error(ErrorKind::invalid_input, "marker " + marker + " is not in the profile");
  }

  CrimeProfile only(const std::vector<std::string>& keep) const {
    CrimeProfile out;
    for (const auto& m : markers)
      if (std::find(keep.begin(), keep.end(), m.marker) != keep.end()) out.markers.push_back(m);
    return out;
  }

  bool operator==(const CrimeProfile&) const = default;
};

struct PopulationMixture {
  std::vector<std::string> populations;
  std::vector<double> weights;

  void validate() const {
    if (populations.empty() || populations.size() != weights.size())
      throw Error(ErrorKind::invalid_input, "mixture needs one weight per population");
    double sum = 0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw Error(ErrorKind::invalid_input, "mixture weights must be non-negative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
      throw Error(ErrorKind::invalid_input, "mixture weights must sum to 1");
    std::set<std::string> unique(populations.begin(), populations.end());
    if (unique.size() != populations.size())
      throw Error(ErrorKind::invalid_input, "duplicate population in mixture");
  }

  bool operator==(const PopulationMixture&) const = default;
};

struct DnaInputs {
  AlleleFrequencyTable freqs;
  PopulationMixture mixture;
  CrimeProfile profile;
  std::string origin_population = "Samoan";

  void validate() const {
    mixture.validate();
    if (profile.markers.empty()) throw Error(ErrorKind::invalid_input, "empty profile");
    std::set<std::string> seen;
    for (const auto& m : profile.markers) {
      if (!seen.insert(m.marker).second)
        throw Error(ErrorKind::invalid_input, "marker " + m.marker + " typed twice");
      for (const auto* pop : populations())
        for (const auto* allele : {&m.genotype.allele1, &m.genotype.allele2})
          freqs.frequency(m.marker, *pop, *allele);
    }
  }

  std::vector<const std::string*> populations() const {
    std::vector<const std::string*> out{&origin_population};
    for (const auto& p : mixture.populations) out.push_back(&p);
    return out;
  }
};

/// Gene-node states: distinct profile alleles in profile order, then "other".
inline std::vector<std::string> gene_states(const Genotype& g) {
  std::vector<std::string> out{g.allele1};
  if (!g.homozygous()) out.push_back(g.allele2);
  out.push_back(kOtherAllele);
  return out;
}

/// Unordered pairs i <= j of gene states, labelled "a/b".
inline std::vector<std::string> genotype_states(const std::vector<std::string>& genes) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < genes.size(); ++i)
    for (std::size_t j = i; j < genes.size(); ++j) out.push_back(genes[i] + "/" + genes[j]);
  return out;
}

inline std::string genotype_label(const Genotype& g) {
  return g.allele1 + "/" + (g.homozygous() ? g.allele1 : g.allele2);
}

/// Distribution over gene_states(g) in `population`; the unlisted remainder
/// goes to "other".
inline std::vector<double> gene_distribution(const DnaInputs& in, const std::string& marker,
                                             const std::string& population) {
  const auto& g = in.profile.at(marker);
  std::vector<double> out;
  double listed = 0;
  for (const auto& allele : gene_states(g)) {
    if (allele == kOtherAllele) break;
    out.push_back(in.freqs.frequency(marker, population, allele));
    listed += out.back();
  }
  if (listed > 1.0 + kSumTolerance)
    throw Error(ErrorKind::invalid_input, "listed frequencies for " + marker + " in " + population + " exceed 1");
  out.push_back(std::max(0.0, 1.0 - listed));
  return out;
}

/// A single-population mixture has nothing to select, so the subpopulation
/// node is left out and gene nodes depend on the origin indicator alone.
inline bool mixed(const PopulationMixture& mix) { return mix.populations.size() > 1; }

inline NetworkTemplate marker_template(const PopulationMixture& mix) {
  NetworkTemplate t;
  t.name = kMarkerTemplate;
  t.inputs = {{"origin", "DNA of unknown sample is of the origin population?", {"true", "false"}}};
  if (mixed(mix)) t.inputs.push_back({"subpopulation", "Subpopulation of the alternative contributor", mix.populations});
  const std::vector<std::string> gene_parents =
      mixed(mix) ? std::vector<std::string>{"origin", "subpopulation"} : std::vector<std::string>{"origin"};
  t.variables = {{"maternal", "Maternal gene", {}, "alleles"},
                 {"paternal", "Paternal gene", {}, "alleles"},
                 {"genotype", "Genotype", {}, "genotypes"}};
  t.cpts = {{"maternal", gene_parents, {}, "gene_frequencies"},
            {"paternal", gene_parents, {}, "gene_frequencies"},
            {"genotype", {"maternal", "paternal"}, {}, "genotype_map"}};
  t.table_slots = {"gene_frequencies", "genotype_map"};
  t.state_slots = {"alleles", "genotypes"};
  return t;
}

inline TemplateInstance marker_instance(const DnaInputs& in, const std::string& marker) {
  const auto genes = gene_states(in.profile.at(marker));
  TemplateInstance inst;
  inst.template_name = kMarkerTemplate;
  inst.instance_id = marker;
  inst.bindings = {{"origin", kOriginVar}};
  if (mixed(in.mixture)) inst.bindings["subpopulation"] = kSubpopulationVar;
  inst.states = {{"alleles", genes}, {"genotypes", genotype_states(genes)}};

  ParameterTable freqs;
  for (bool origin : {true, false})
    for (const auto& pop : in.mixture.populations)
      freqs.push_back(gene_distribution(in, marker, origin ? in.origin_population : pop));
  inst.tables["gene_frequencies"] = std::move(freqs);

  const std::size_t n = genes.size();
  const std::size_t pairs = n * (n + 1) / 2;
  auto pair_index = [n](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
  };
  ParameterTable genotype_map;
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t p = 0; p < n; ++p) {
      std::vector<double> row(pairs, 0.0);
      row[pair_index(m, p)] = 1.0;
      genotype_map.push_back(std::move(row));
    }
  inst.tables["genotype_map"] = std::move(genotype_map);
  return inst;
}

/// Document for the stand-alone DNA network: origin indicator at even prior,
/// subpopulation selector with the mixture weights (when there is more than
/// one population), one marker instance per profile marker.
inline NetworkDocument dna_document(const DnaInputs& in) {
  in.validate();
  NetworkDocument doc;
  doc.metadata = {"dna-report", "Heterogeneous-population DNA report", {kOriginVar}};
  doc.variables = {{kOriginVar, "DNA profile of unknown sample is of a Samoan?", {"true", "false"}}};
  doc.cpts = {NetworkBuilder::make_cpt(doc.variables, kOriginVar, {}, {{0.5, 0.5}})};
  if (mixed(in.mixture)) {
    doc.variables.push_back({kSubpopulationVar, "Subpopulation of the alternative contributor", in.mixture.populations});
    doc.cpts.push_back(NetworkBuilder::make_cpt(doc.variables, kSubpopulationVar, {}, {in.mixture.weights}));
  }
  doc.templates = {marker_template(in.mixture)};
  for (const auto& m : in.profile.markers) doc.instances.push_back(marker_instance(in, m.marker));
  return doc;
}

inline Network build_dna_network(const DnaInputs& in) { return flatten(dna_document(in)); }

/// Genotype observations for every typed marker.
inline EvidenceSet dna_evidence(const CrimeProfile& profile) {
  EvidenceSet ev;
  for (const auto& m : profile.markers) ev.set(m.marker + ".genotype", genotype_label(m.genotype));
  return ev;
}

struct MarkerLr {
  std::string marker;
  double p_hp = 0;  // genotype probability if the contributor is from the origin population
  double p_hd = 0;  // mixture over subpopulations of the same probability
  double lr = 0;

  /// (p_hp, p_hd) rescaled to sum to 1, as tabulated in case reports.
  std::pair<double, double> normalized() const { return {p_hp / (p_hp + p_hd), p_hd / (p_hp + p_hd)}; }
};

/// Hardy-Weinberg genotype probability within one population: p^2 or 2pq.
inline double genotype_probability(const DnaInputs& in, const std::string& marker,
                                   const std::string& population) {
  const auto& g = in.profile.at(marker);
  const double p = in.freqs.frequency(marker, population, g.allele1);
  if (g.homozygous()) return p * p;
  return 2.0 * p * in.freqs.frequency(marker, population, g.allele2);
}

inline MarkerLr per_marker_lr(const DnaInputs& in, const std::string& marker) {
  MarkerLr out{marker};
  out.p_hp = genotype_probability(in, marker, in.origin_population);
  for (std::size_t s = 0; s < in.mixture.populations.size(); ++s)
    out.p_hd += in.mixture.weights[s] * genotype_probability(in, marker, in.mixture.populations[s]);
  if (!(out.p_hd > 0.0)) throw Error(ErrorKind::zero_probability, "zero defence probability for " + marker);
  out.lr = out.p_hp / out.p_hd;
  return out;
}

/// Product of per-marker LRs; treats markers as independent, which does not
/// hold when the subpopulation is uncertain.
inline double product_rule_lr(const DnaInputs& in) {
  in.validate();
  double lr = 1.0;
  for (const auto& m : in.profile.markers) lr *= per_marker_lr(in, m.marker).lr;
  return lr;
}

/// LR for the origin indicator on the full shared-subpopulation network.
inline double exact_joint_lr(const DnaInputs& in) {
  const Network net = build_dna_network(in);
  return likelihood_ratio(net, dna_evidence(in.profile), kOriginVar, "true", "false");
}

struct LrReport {
  std::vector<MarkerLr> markers;
  double product_rule = 0;
  double exact = 0;
  double exact_posterior = 0;  // P(origin | profile) at even prior odds
  PopulationMixture mixture;
  CrimeProfile profile;
};

inline LrReport lr_report(const DnaInputs& in) {
  LrReport r;
  r.product_rule = product_rule_lr(in);
  for (const auto& m : in.profile.markers) r.markers.push_back(per_marker_lr(in, m.marker));
  r.exact = exact_joint_lr(in);
  r.exact_posterior = r.exact / (1.0 + r.exact);
  r.mixture = in.mixture;
  r.profile = in.profile;
  return r;
}

}  // namespace bnev::dna
