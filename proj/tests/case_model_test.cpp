#include <gtest/gtest.h>

#include <random>

#include "bnev/brute_force.hpp"
#include "bnev/case_model.hpp"
#include "bnev/reference_data.hpp"

namespace bnev::case_model {
namespace {

double killer(const TraceStep& s) { return s.of(kHypothesis)["killer"]; }

const Network& summary_net() {
  static const Network net = build_case_network({});
  return net;
}

const Network& dna_net() {
  static const Network net = [] {
    const auto dna_doc = dna::dna_document(dna::case_inputs());
    return flatten(build_case_document({}, &dna_doc));
  }();
  return net;
}

TEST(CaseNetwork, PriorMarginals) {
  const auto& net = summary_net();
  EXPECT_NEAR(prior_marginal(net, "blood")["true"], 0.85, 1e-12);
  const auto m = prior_marginal(net, kMurderer);
  EXPECT_NEAR(m["defendant"], 0.5, 1e-12);
  EXPECT_NEAR(m["other"], 0.495, 1e-12);
  EXPECT_NEAR(m["samoan"], 0.005, 1e-12);
  EXPECT_NEAR(prior_marginal(net, kHypothesis)["killer"], 0.5, 1e-12);
}

TEST(CaseNetwork, ItemTraceMatchesOddsProduct) {
  // Items are conditionally independent given the hypothesis, so the
  // posterior odds are the prior odds times each item's likelihood ratio.
  const CaseConfig cfg;
  const auto trace = run_scenario(summary_net(), items_scenario(cfg), {kHypothesis});
  ASSERT_EQ(trace.steps.size(), 5u);
  double odds = cfg.prior_killer / (1 - cfg.prior_killer);
  EXPECT_NEAR(killer(trace.steps[0]), 0.5, 1e-12);
  for (std::size_t i = 0; i < cfg.items.size(); ++i) {
    odds *= cfg.items[i].p_if_killer / cfg.items[i].p_if_witness;
    EXPECT_NEAR(killer(trace.steps[i + 1]), odds / (1 + odds), 1e-12) << cfg.items[i].id;
  }
  const double expected[] = {0.553, 0.582, 0.926, 0.974};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(killer(trace.steps[i + 1]), expected[i], 0.005);
}

TEST(CaseNetwork, FullDnaNetworkReproducesItemTrace) {
  const auto a = run_scenario(summary_net(), items_scenario(), {kHypothesis});
  const auto b = run_scenario(dna_net(), items_scenario(), {kHypothesis});
  for (std::size_t i = 0; i < a.steps.size(); ++i) EXPECT_NEAR(killer(a.steps[i]), killer(b.steps[i]), 1e-12);
}

TEST(CaseNetwork, SummaryTraceAgreesWithBruteForce) {
  const auto sc = full_scenario();
  const auto ve = run_scenario(summary_net(), sc, {kHypothesis, kMurderer});
  const auto bf = run_scenario(summary_net(), sc, {kHypothesis, kMurderer}, {}, brute_force_posterior);
  for (std::size_t i = 0; i < ve.steps.size(); ++i)
    for (std::size_t w = 0; w < 2; ++w)
      for (std::size_t s = 0; s < ve.steps[i].posteriors[w].probs.size(); ++s)
        EXPECT_NEAR(ve.steps[i].posteriors[w].probs[s], bf.steps[i].posteriors[w].probs[s], 1e-12);
}

TEST(CaseNetwork, StatementRaisesAndDnaLowersGuilt) {
  const auto t = run_scenario(summary_net(), full_scenario(), {kHypothesis});
  ASSERT_EQ(t.steps.size(), 7u);
  EXPECT_GT(killer(t.steps[5]), killer(t.steps[4]));
  EXPECT_LT(killer(t.steps[6]), killer(t.steps[5]));
}

TEST(KnowledgeState, GuiltBandsOnFullDnaNetwork) {
  const auto profile = dna::case_profile();
  Scenario base = full_scenario(&profile);
  const auto cmp = knowledge_state_compare(dna_net(), base);
  const double uninformed = killer(cmp.uninformed.final_step());
  const double informed = killer(cmp.informed.final_step());
  EXPECT_GE(uninformed, 0.25);
  EXPECT_LE(uninformed, 0.45);
  EXPECT_GT(informed, 0.85);
  EXPECT_NEAR(cmp.guilt_gap, informed - uninformed, 1e-15);
}

TEST(KnowledgeState, SequencesMatchComparison) {
  const auto profile = dna::case_profile();
  const auto one = run_scenario(dna_net(), sequence_one(&profile), {kHypothesis});
  const auto two = run_scenario(dna_net(), sequence_two(&profile), {kHypothesis});
  const auto cmp = knowledge_state_compare(dna_net(), full_scenario(&profile));
  EXPECT_NEAR(killer(one.final_step()), killer(cmp.uninformed.final_step()), 1e-12);
  EXPECT_NEAR(killer(two.final_step()), killer(cmp.informed.final_step()), 1e-12);
}

TEST(KnowledgeState, MonotoneOverEvidenceSubsets) {
  const auto profile = dna::case_profile();
  const auto items = items_scenario().steps;
  std::vector<std::vector<ScenarioStep>> tails{{}, dna_steps(&profile)};
  tails.push_back({{kStatement, "true", ""}});
  for (auto& s : dna_steps(&profile)) tails.back().push_back(s);
  for (unsigned mask = 0; mask < 16; ++mask) {
    for (const auto& tail : tails) {
      Scenario sc;
      for (unsigned i = 0; i < 4; ++i)
        if (mask & (1u << i)) sc.steps.push_back(items[i]);
      sc.steps.insert(sc.steps.end(), tail.begin(), tail.end());
      const auto cmp = knowledge_state_compare(dna_net(), sc);
      EXPECT_GE(cmp.guilt_gap, -1e-12) << "mask " << mask << " tail " << tail.size();
    }
  }
}

TEST(KnowledgeState, StatementWithoutDnaReversesTheGap) {
  // Knowing of a report that has not been seen makes a Samoan claim from a
  // guilty defendant unlikely, so the informed posterior is lower here.
  Scenario sc = items_scenario();
  sc.steps.push_back({kStatement, "true", ""});
  EXPECT_LT(knowledge_state_compare(dna_net(), sc).guilt_gap, 0.0);
}

TEST(Scenario, OrderOfFullEvidenceDoesNotMatter) {
  const auto profile = dna::case_profile();
  auto sc = sequence_one(&profile);
  const double reference = killer(run_scenario(dna_net(), sc, {kHypothesis}).final_step());
  std::mt19937 rng(5);
  for (int k = 0; k < 10; ++k) {
    std::shuffle(sc.steps.begin(), sc.steps.end(), rng);
    EXPECT_NEAR(killer(run_scenario(dna_net(), sc, {kHypothesis}).final_step()), reference, 1e-9);
  }
}

TEST(Scenario, RejectsDuplicatesAndReportsImpossibleStep) {
  Scenario dup{"dup", {{"running", "true", ""}, {"running", "false", ""}}};
  EXPECT_THROW(run_scenario(summary_net(), dup, {kHypothesis}), Error);
  EXPECT_THROW(run_scenario(summary_net(), {"bg", {{"running", "true", ""}}}, {kHypothesis},
                            {{"running", "true"}}),
               Error);

  // Murderer = defendant forces the hypothesis to killer.
  Scenario impossible{"x", {{"running", "true", ""}, {kMurderer, "defendant", ""}, {kHypothesis, "witness", ""}}};
  try {
    run_scenario(summary_net(), impossible, {kHypothesis});
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.step(), 3u);
    EXPECT_EQ(e.kind(), ErrorKind::zero_probability);
  }
  EXPECT_THROW(run_scenario(summary_net(), {}, {"nope"}), Error);
}

TEST(Config, ValidatesAndFeedsNetwork) {
  CaseConfig bad;
  bad.prior_killer = 1.5;
  EXPECT_THROW(build_case_network(bad), Error);

  CaseConfig cfg;
  cfg.items[0].p_if_killer = 0.5;
  cfg.items[0].p_if_witness = 0.5;
  const auto net = build_case_network(cfg);
  EXPECT_NEAR(posterior(net, {{"running", "true"}}, kHypothesis)["killer"], 0.5, 1e-12);
}

TEST(Screening, BayesByHand) {
  const auto net = build_screening_example();
  const double p_e = 0.99 * 0.01 + 0.05 * 0.99;
  EXPECT_NEAR(likelihood_of_evidence(net, {{"test", "positive"}}), p_e, 1e-15);
  EXPECT_NEAR(posterior(net, {{"test", "positive"}}, "disease")["present"], 0.0099 / p_e, 1e-15);
  EXPECT_NEAR(p_e, 0.0594, 1e-4);
  EXPECT_NEAR(0.0099 / p_e, 0.1667, 1e-4);
}

TEST(CaseDocument, RejectsIncompatibleDnaInterface) {
  NetworkDocument dna;
  dna.variables = {{kOrigin, "", {"yes", "no"}}};
  EXPECT_THROW(build_case_document({}, &dna), Error);
}

}  // namespace
}  // namespace bnev::case_model
