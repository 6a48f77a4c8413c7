#include <gtest/gtest.h>

#include <filesystem>

#include "bnev/bundled.hpp"
#include "bnev/dna_io.hpp"
#include "bnev/network_file.hpp"

namespace bnev {
namespace {

namespace fs = std::filesystem;
const fs::path kData = fs::path(BNEV_SOURCE_DIR) / "data";

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "<no error>";
}

TEST(NetworkFile, BundledDocumentsRoundTrip) {
  for (const auto& b : bundled_networks()) {
    const auto text = emit_document(b.build({}));
    const auto again = emit_document(parse_document(text));
    EXPECT_EQ(again, text) << b.name;
    EXPECT_TRUE(validate_document(parse_document(text)).ok()) << b.name;
  }
}

TEST(NetworkFile, CheckedInFilesMatchBuilders) {
  for (const auto& b : bundled_networks()) {
    const auto path = kData / "networks" / (b.name + ".json");
    ASSERT_TRUE(fs::exists(path)) << path;
    const auto on_disk = read_file(path.string());
    EXPECT_EQ(on_disk, emit_document(b.build({}))) << b.name;
    EXPECT_EQ(emit_document(load_document(path.string())), on_disk) << b.name;
  }
  for (const auto& sc : bundled_scenarios()) {
    const auto path = kData / "scenarios" / (sc.name + ".json");
    ASSERT_TRUE(fs::exists(path)) << path;
    EXPECT_EQ(read_file(path.string()), emit_scenario(sc));
    EXPECT_EQ(load_scenario(path.string()), sc);
  }
  const auto in = dna::case_inputs();
  const auto loaded = dna::load_inputs((kData / "dna" / "frequencies.csv").string(),
                                       (kData / "dna" / "mixture.csv").string(),
                                       (kData / "dna" / "profile.csv").string());
  EXPECT_EQ(loaded.freqs, in.freqs);
  EXPECT_EQ(loaded.mixture, in.mixture);
  EXPECT_EQ(loaded.profile, in.profile);
}

TEST(NetworkFile, FlattenedFileMatchesBuilder) {
  const auto doc = load_document((kData / "networks" / "samoan-case-dna.json").string());
  const auto from_file = flatten(doc);
  const auto dna_doc = dna::dna_document(dna::case_inputs());
  const auto built = flatten(case_model::build_case_document({}, &dna_doc));
  ASSERT_EQ(from_file.size(), built.size());
  for (std::size_t v = 0; v < built.size(); ++v) {
    EXPECT_EQ(from_file.variable(v), built.variable(v));
    const auto a = from_file.table_of(v), b = built.table_of(v);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
}

TEST(NetworkFile, ParseErrorsCarryPaths) {
  EXPECT_NE(error_of([] { parse_document("{"); }).find("network file"), std::string::npos);
  EXPECT_NE(error_of([] { parse_document(R"({"format": "other/9"})"); }).find("format"), std::string::npos);
  EXPECT_NE(error_of([] { parse_document(R"({"variables": [{"id": "A", "states": "t"}]})"); })
                .find("variables[0].states"),
            std::string::npos);
  EXPECT_NE(error_of([] {
              parse_document(R"({"variables": [{"id": "A", "states": ["t","f"]}],
                                 "cpts": [{"child": "A", "parents": [], "rows": [{"given": [], "p": [0.5, "x"]}]}]})");
            }).find("cpts[0].rows[0].p"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_document(R"({"cpts": [{"parents": []}]})"); }).find("cpts[0]"), std::string::npos);
  EXPECT_NE(error_of([] { load_document("/nonexistent/net.json"); }).find("cannot open"), std::string::npos);
}

TEST(NetworkFile, SchemaValidButInvalidNetworkParses) {
  const auto doc = parse_document(R"({"variables": [{"id": "A", "states": ["t","f"]}],
      "cpts": [{"child": "A", "parents": [], "rows": [{"given": [], "p": [0.5, 0.6]}]}]})");
  const auto report = validate_document(doc);
  EXPECT_TRUE(report.mentions("row sum ≠ 1"));
  EXPECT_THROW(flatten(doc), Error);
}

TEST(ConfigOverrides, AppliesKnownFieldsAndRejectsOthers) {
  const auto cfg = apply_config_overrides({}, ojson::parse(R"({"prior_killer": 0.3, "items": {"blood": [0.7, 0.6]},
                                                             "statement": [1,0,0,0,0,0,0,0,1,1,1,1]})"));
  EXPECT_DOUBLE_EQ(cfg.prior_killer, 0.3);
  EXPECT_DOUBLE_EQ(cfg.items[1].p_if_killer, 0.7);
  EXPECT_DOUBLE_EQ(cfg.statement[1], 0.0);
  EXPECT_THROW(apply_config_overrides({}, ojson::parse(R"({"prior": 0.3})")), Error);
  EXPECT_THROW(apply_config_overrides({}, ojson::parse(R"({"statement": [1, 2]})")), Error);
  EXPECT_THROW(apply_config_overrides({}, ojson::parse(R"({"items": {"alibi": [0.5, 0.5]}})")), Error);
  EXPECT_THROW(apply_config_overrides({}, ojson::parse(R"({"samoan_share": 2})")), Error);
}

TEST(DnaCsv, RoundTripAndLineNumbers) {
  const auto in = dna::case_inputs();
  EXPECT_EQ(dna::parse_frequencies(dna::emit_frequencies(in.freqs)), in.freqs);
  EXPECT_EQ(dna::parse_mixture(dna::emit_mixture(in.mixture)), in.mixture);
  EXPECT_EQ(dna::parse_profile(dna::emit_profile(in.profile)), in.profile);

  EXPECT_NE(error_of([] { dna::parse_mixture("population,weight\nA,0.5\nB,zero\n"); }).find("line 3"),
            std::string::npos);
  EXPECT_NE(error_of([] { dna::parse_profile("marker,allele\nD2,18\n"); }).find("expected header"),
            std::string::npos);
  EXPECT_NE(error_of([] { dna::parse_frequencies("marker,allele,population,frequency\nD2,18,X,1.5\n"); })
                .find("(0,1]"),
            std::string::npos);
  EXPECT_THROW(dna::parse_mixture("population,weight\nA,0.5\nB,0.4\n"), Error);
  EXPECT_THROW(dna::parse_profile("marker,allele1,allele2\n"), Error);
}

TEST(DnaJson, UploadFormMatchesCsvInputs) {
  const auto in = dna::case_inputs();
  ojson j;
  in.freqs.for_each([&](const std::string& m, const std::string& a, const std::string& p, double f) {
    j["frequencies"].push_back({{"marker", m}, {"allele", a}, {"population", p}, {"frequency", f}});
  });
  for (std::size_t i = 0; i < in.mixture.populations.size(); ++i)
    j["mixture"].push_back({{"population", in.mixture.populations[i]}, {"weight", in.mixture.weights[i]}});
  for (const auto& m : in.profile.markers)
    j["profile"].push_back({{"marker", m.marker}, {"allele1", m.genotype.allele1}, {"allele2", m.genotype.allele2}});
  const auto parsed = dna::inputs_from_json(j);
  EXPECT_EQ(parsed.freqs, in.freqs);
  EXPECT_EQ(parsed.mixture, in.mixture);
  EXPECT_EQ(parsed.profile, in.profile);
  EXPECT_EQ(parsed.origin_population, "Samoan");
}

}  // namespace
}  // namespace bnev
