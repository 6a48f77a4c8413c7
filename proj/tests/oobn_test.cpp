#include <gtest/gtest.h>

#include "bnev/document.hpp"
#include "bnev/inference.hpp"
#include "bnev/oobn.hpp"

namespace bnev {
namespace {

NetworkTemplate sensor_template() {
  NetworkTemplate t;
  t.name = "sensor";
  t.inputs = {{"cause", "", {"t", "f"}}};
  t.variables = {{"reading", "Sensor reading", {}, "readings"}};
  t.cpts = {{"reading", {"cause"}, {}, "accuracy"}};
  t.table_slots = {"accuracy"};
  t.state_slots = {"readings"};
  return t;
}

Network host() {
  NetworkBuilder b;
  b.add_variable("H", "", {"t", "f"});
  b.add_cpt("H", {}, {{0.2, 0.8}});
  return b.build("host");
}

TemplateInstance sensor(std::string id, std::vector<double> if_true, std::vector<double> if_false) {
  TemplateInstance i;
  i.template_name = "sensor";
  i.instance_id = std::move(id);
  i.bindings = {{"cause", "H"}};
  i.tables = {{"accuracy", {std::move(if_true), std::move(if_false)}}};
  i.states = {{"readings", {"hit", "miss"}}};
  return i;
}

TEST(Template, ValidTemplatePasses) { EXPECT_TRUE(validate_template(sensor_template()).ok()); }

TEST(Template, ValidationCatchesStructuralErrors) {
  auto t = sensor_template();
  t.cpts[0].parents = {"nowhere"};
  t.table_slots.push_back("unused");
  EXPECT_TRUE(validate_template(t).mentions("unknown parent 'nowhere'"));
  EXPECT_TRUE(validate_template(t).mentions("parameter slot not referenced"));

  auto cyc = sensor_template();
  cyc.variables.push_back({"x", "", {"a", "b"}, {}});
  cyc.cpts[0].parents = {"cause", "x"};
  cyc.cpts.push_back({"x", {"reading"}, {}, {}});
  EXPECT_TRUE(validate_template(cyc).mentions("cycle detected"));
}

TEST(Instantiate, NamespacesIdsAndMatchesHandBuiltNetwork) {
  const auto t = sensor_template();
  auto net = instantiate_all(host(), {sensor("s1", {0.9, 0.1}, {0.3, 0.7}), sensor("s2", {0.6, 0.4}, {0.1, 0.9})},
                             {t});
  ASSERT_TRUE(net.find("s1.reading"));
  ASSERT_TRUE(net.find("s2.reading"));
  EXPECT_EQ(net.variable("s1.reading").states, (std::vector<std::string>{"hit", "miss"}));

  NetworkBuilder b;
  b.add_variable("H", "", {"t", "f"}).add_variable("r1", "", {"hit", "miss"}).add_variable("r2", "", {"hit", "miss"});
  b.add_cpt("H", {}, {{0.2, 0.8}});
  b.add_cpt("r1", {"H"}, {{0.9, 0.1}, {0.3, 0.7}});
  b.add_cpt("r2", {"H"}, {{0.6, 0.4}, {0.1, 0.9}});
  auto flat = b.build();

  const auto a = posterior(net, {{"s1.reading", "hit"}, {"s2.reading", "miss"}}, "H");
  const auto e = posterior(flat, {{"r1", "hit"}, {"r2", "miss"}}, "H");
  EXPECT_NEAR(a["t"], e["t"], 1e-15);
  // 0.2*0.9*0.4 / (0.2*0.9*0.4 + 0.8*0.3*0.9)
  EXPECT_NEAR(a["t"], 0.072 / (0.072 + 0.216), 1e-15);
}

TEST(Instantiate, FixedRowsNeedNoSlot) {
  NetworkTemplate t;
  t.name = "fixed";
  t.inputs = {{"cause", "", {"t", "f"}}};
  t.variables = {{"echo", "", {"t", "f"}, {}}};
  t.cpts = {{"echo", {"cause"}, {{{"t"}, {1, 0}}, {{"f"}, {0, 1}}}, {}}};
  TemplateInstance i{"fixed", "e", {{"cause", "H"}}, {}, {}};
  auto net = instantiate(host(), i, t);
  EXPECT_NEAR(prior_marginal(net, "e.echo")["t"], 0.2, 1e-15);
}

void expect_template_error(const std::function<void()>& f, const std::string& fragment) {
  try {
    f();
    FAIL() << "expected invalid_template containing " << fragment;
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_template);
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(Instantiate, Errors) {
  const auto t = sensor_template();
  auto unbound = sensor("s", {0.9, 0.1}, {0.3, 0.7});
  unbound.bindings.clear();
  expect_template_error([&] { instantiate(host(), unbound, t); }, "unbound interface input 'cause'");

  auto no_table = sensor("s", {0.9, 0.1}, {0.3, 0.7});
  no_table.tables.clear();
  expect_template_error([&] { instantiate(host(), no_table, t); }, "unbound slot 'accuracy'");

  auto no_states = sensor("s", {0.9, 0.1}, {0.3, 0.7});
  no_states.states.clear();
  expect_template_error([&] { instantiate(host(), no_states, t); }, "unbound slot 'readings'");

  auto mismatch = t;
  mismatch.inputs[0].states = {"yes", "no"};
  expect_template_error([&] { instantiate(host(), sensor("s", {0.9, 0.1}, {0.3, 0.7}), mismatch); },
                        "state-space mismatch");

  auto once = instantiate(host(), sensor("s", {0.9, 0.1}, {0.3, 0.7}), t);
  expect_template_error([&] { instantiate(once, sensor("s", {0.9, 0.1}, {0.3, 0.7}), t); }, "id collision");

  expect_template_error([&] { instantiate(host(), sensor("s", {0.9, 0.2}, {0.3, 0.7}), t); }, "row sum");
  expect_template_error([&] { instantiate(host(), sensor("s", {0.9, 0.1, 0.0}, {0.3, 0.7}), t); }, "");

  auto wrong = sensor("s", {0.9, 0.1}, {0.3, 0.7});
  wrong.template_name = "other";
  expect_template_error([&] { instantiate_all(host(), {wrong}, {t}); }, "unknown template 'other'");
}

TEST(Document, FlattenAppliesInstancesAndReportsErrors) {
  NetworkDocument doc = document_of(host());
  doc.templates = {sensor_template()};
  doc.instances = {sensor("s1", {0.9, 0.1}, {0.3, 0.7})};
  EXPECT_TRUE(validate_document(doc).ok());
  auto net = flatten(doc);
  EXPECT_EQ(net.size(), 2u);

  doc.instances[0].bindings = {{"cause", "missing"}};
  EXPECT_FALSE(validate_document(doc).ok());
  EXPECT_THROW(flatten(doc), Error);
}

}  // namespace
}  // namespace bnev
