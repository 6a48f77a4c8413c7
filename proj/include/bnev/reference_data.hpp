#pragma once

// DNA inputs of the bundled murder case. Frequencies cover only the alleles
// seen in the crime profile; subpopulation weights come from census shares.

#include "bnev/dna.hpp"

namespace bnev::dna {

inline CrimeProfile case_profile() {
  return {{{"D2", {"18", "22"}},
           {"CSF", {"11", "14"}},
           {"D7", {"12", "12"}},
           {"D21", {"28", "34.2"}},
           {"D8", {"10", "10"}},
           {"D16", {"14", "14"}}}};
}

inline AlleleFrequencyTable case_frequencies() {
  struct Row {
    const char* marker;
    const char* allele;
    double samoan, hispanic, caucasian, afro_american;
  };
  static constexpr Row rows[] = {
      {"D2", "18", 0.12, 0.08, 0.073, 0.04},   {"D2", "22", 0.25, 0.057, 0.034, 0.14},
      {"CSF", "11", 0.39, 0.28, 0.31, 0.25},   {"CSF", "14", 0.01, 0.006, 0.01, 0.009},
      {"D7", "12", 0.22, 0.15, 0.16, 0.088},   {"D21", "28", 0.26, 0.10, 0.16, 0.25},
      {"D21", "34.2", 0.016, 0.005, 0.004, 0.003}, {"D8", "10", 0.21, 0.093, 0.1, 0.03},
      {"D16", "14", 0.12, 0.13, 0.026, 0.025},
  };
  AlleleFrequencyTable t;
  for (const auto& r : rows) {
    t.set(r.marker, r.allele, "Samoan", r.samoan);
    t.set(r.marker, r.allele, "Hispanic", r.hispanic);
    t.set(r.marker, r.allele, "Caucasian", r.caucasian);
    t.set(r.marker, r.allele, "AfroAmerican", r.afro_american);
  }
  return t;
}

/// Hispanic 35.77%, White NH 33.13%, Black NH 14.48%, renormalized over the
/// three alternative populations.
inline PopulationMixture case_mixture() {
  return {{"Hispanic", "Caucasian", "AfroAmerican"}, {0.4290, 0.3973, 0.1737}};
}

inline DnaInputs case_inputs() { return {case_frequencies(), case_mixture(), case_profile(), "Samoan"}; }

}  // namespace bnev::dna
