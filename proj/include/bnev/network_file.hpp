#pragma once

// JSON network files, scenario files and case-config overrides.
//
// Emission is canonical (fixed key order, two-space indent, trailing
// newline), so a file written by emit_document re-emits byte-identically
// after parse_document.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bnev/case_model.hpp"
#include "bnev/document.hpp"

namespace bnev {

using ojson = nlohmann::ordered_json;

inline constexpr const char* kNetworkFormat = "bnev-network/1";
inline constexpr const char* kScenarioFormat = "bnev-scenario/1";

namespace detail {

[[noreturn]] inline void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::parse, path + ": " + what);
}

inline const ojson& field(const ojson& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path, "missing field '" + key + "'");
  return *it;
}

inline std::string as_string(const ojson& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  return j.get<std::string>();
}

inline double as_number(const ojson& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

inline std::vector<std::string> as_strings(const ojson& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_string(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<double> as_numbers(const ojson& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::string optional_string(const ojson& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  return it == obj.end() ? std::string{} : as_string(*it, path + "." + key);
}

template <typename Fn>
void for_each_item(const ojson& obj, const std::string& key, const std::string& path, Fn&& fn) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  const std::string p = path.empty() ? key : path + "." + key;
  if (!it->is_array()) schema_error(p, "expected an array");
  for (std::size_t i = 0; i < it->size(); ++i) fn((*it)[i], p + "[" + std::to_string(i) + "]");
}

inline Variable parse_variable(const ojson& j, const std::string& path) {
  return {as_string(field(j, "id", path), path + ".id"), optional_string(j, "label", path),
          as_strings(field(j, "states", path), path + ".states")};
}

inline std::vector<CptRow> parse_rows(const ojson& j, const std::string& path) {
  std::vector<CptRow> rows;
  if (!j.is_array()) schema_error(path, "expected an array of rows");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    rows.push_back({as_strings(field(j[i], "given", p), p + ".given"), as_numbers(field(j[i], "p", p), p + ".p")});
  }
  return rows;
}

inline ojson emit_variable(const Variable& v) {
  ojson j;
  j["id"] = v.id;
  j["label"] = v.label;
  j["states"] = v.states;
  return j;
}

inline ojson emit_rows(const std::vector<CptRow>& rows) {
  ojson out = ojson::array();
  for (const auto& r : rows) {
    ojson row;
    row["given"] = r.given;
    row["p"] = r.probs;
    out.push_back(std::move(row));
  }
  return out;
}

inline ojson parse_json_text(const std::string& text, const std::string& what) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, what + ": " + e.what());
  }
}

}  // namespace detail

inline NetworkDocument document_from_json(const ojson& j) {
  using namespace detail;
  if (!j.is_object()) schema_error("document", "expected an object");
  if (auto f = j.find("format"); f != j.end() && *f != kNetworkFormat)
    schema_error("format", "unsupported format " + f->dump());

  NetworkDocument doc;
  if (auto m = j.find("metadata"); m != j.end()) {
    doc.metadata.name = optional_string(*m, "name", "metadata");
    doc.metadata.description = optional_string(*m, "description", "metadata");
    if (auto w = m->find("default_watch"); w != m->end())
      doc.metadata.default_watch = as_strings(*w, "metadata.default_watch");
  }
  for_each_item(j, "variables", "", [&](const ojson& v, const std::string& p) {
    doc.variables.push_back(parse_variable(v, p));
  });
  for_each_item(j, "cpts", "", [&](const ojson& c, const std::string& p) {
    doc.cpts.push_back({as_string(field(c, "child", p), p + ".child"),
                        as_strings(field(c, "parents", p), p + ".parents"),
                        parse_rows(field(c, "rows", p), p + ".rows")});
  });
  for_each_item(j, "templates", "", [&](const ojson& t, const std::string& p) {
    NetworkTemplate tmpl;
    tmpl.name = as_string(field(t, "name", p), p + ".name");
    for_each_item(t, "inputs", p, [&](const ojson& v, const std::string& q) {
      tmpl.inputs.push_back(parse_variable(v, q));
    });
    for_each_item(t, "variables", p, [&](const ojson& v, const std::string& q) {
      TemplateVariable tv;
      tv.id = as_string(field(v, "id", q), q + ".id");
      tv.label = optional_string(v, "label", q);
      tv.states_slot = optional_string(v, "states_slot", q);
      if (tv.states_slot.empty()) tv.states = as_strings(field(v, "states", q), q + ".states");
      tmpl.variables.push_back(std::move(tv));
    });
    for_each_item(t, "cpts", p, [&](const ojson& c, const std::string& q) {
      TemplateCpt tc;
      tc.child = as_string(field(c, "child", q), q + ".child");
      tc.parents = as_strings(field(c, "parents", q), q + ".parents");
      tc.table_slot = optional_string(c, "table_slot", q);
      if (tc.table_slot.empty()) tc.rows = parse_rows(field(c, "rows", q), q + ".rows");
      tmpl.cpts.push_back(std::move(tc));
    });
    if (auto s = t.find("table_slots"); s != t.end()) tmpl.table_slots = as_strings(*s, p + ".table_slots");
    if (auto s = t.find("state_slots"); s != t.end()) tmpl.state_slots = as_strings(*s, p + ".state_slots");
    doc.templates.push_back(std::move(tmpl));
  });
  for_each_item(j, "instances", "", [&](const ojson& i, const std::string& p) {
    TemplateInstance inst;
    inst.template_name = as_string(field(i, "template", p), p + ".template");
    inst.instance_id = as_string(field(i, "id", p), p + ".id");
    if (auto b = i.find("bindings"); b != i.end()) {
      if (!b->is_object()) schema_error(p + ".bindings", "expected an object");
      for (const auto& [k, v] : b->items()) inst.bindings[k] = as_string(v, p + ".bindings." + k);
    }
    if (auto s = i.find("states"); s != i.end()) {
      if (!s->is_object()) schema_error(p + ".states", "expected an object");
      for (const auto& [k, v] : s->items()) inst.states[k] = as_strings(v, p + ".states." + k);
    }
    if (auto t = i.find("tables"); t != i.end()) {
      if (!t->is_object()) schema_error(p + ".tables", "expected an object");
      for (const auto& [k, v] : t->items()) {
        const std::string q = p + ".tables." + k;
        if (!v.is_array()) schema_error(q, "expected an array of rows");
        ParameterTable table;
        for (std::size_t r = 0; r < v.size(); ++r) table.push_back(as_numbers(v[r], q + "[" + std::to_string(r) + "]"));
        inst.tables[k] = std::move(table);
      }
    }
    doc.instances.push_back(std::move(inst));
  });
  return doc;
}

inline ojson document_to_json(const NetworkDocument& doc) {
  using namespace detail;
  ojson j;
  j["format"] = kNetworkFormat;
  j["metadata"]["name"] = doc.metadata.name;
  j["metadata"]["description"] = doc.metadata.description;
  j["metadata"]["default_watch"] = doc.metadata.default_watch;
  j["variables"] = ojson::array();
  for (const auto& v : doc.variables) j["variables"].push_back(emit_variable(v));
  j["cpts"] = ojson::array();
  for (const auto& c : doc.cpts) {
    ojson cj;
    cj["child"] = c.child;
    cj["parents"] = c.parents;
    cj["rows"] = emit_rows(c.rows);
    j["cpts"].push_back(std::move(cj));
  }
  j["templates"] = ojson::array();
  for (const auto& t : doc.templates) {
    ojson tj;
    tj["name"] = t.name;
    tj["inputs"] = ojson::array();
    for (const auto& v : t.inputs) tj["inputs"].push_back(emit_variable(v));
    tj["variables"] = ojson::array();
    for (const auto& v : t.variables) {
      ojson vj;
      vj["id"] = v.id;
      vj["label"] = v.label;
      if (v.states_slot.empty()) vj["states"] = v.states;
      else vj["states_slot"] = v.states_slot;
      tj["variables"].push_back(std::move(vj));
    }
    tj["cpts"] = ojson::array();
    for (const auto& c : t.cpts) {
      ojson cj;
      cj["child"] = c.child;
      cj["parents"] = c.parents;
      if (c.table_slot.empty()) cj["rows"] = emit_rows(c.rows);
      else cj["table_slot"] = c.table_slot;
      tj["cpts"].push_back(std::move(cj));
    }
    tj["table_slots"] = t.table_slots;
    tj["state_slots"] = t.state_slots;
    j["templates"].push_back(std::move(tj));
  }
  j["instances"] = ojson::array();
  for (const auto& i : doc.instances) {
    ojson ij;
    ij["template"] = i.template_name;
    ij["id"] = i.instance_id;
    ij["bindings"] = ojson::object();
    for (const auto& [k, v] : i.bindings) ij["bindings"][k] = v;
    ij["states"] = ojson::object();
    for (const auto& [k, v] : i.states) ij["states"][k] = v;
    ij["tables"] = ojson::object();
    for (const auto& [k, v] : i.tables) ij["tables"][k] = v;
    j["instances"].push_back(std::move(ij));
  }
  return j;
}

inline NetworkDocument parse_document(const std::string& text) {
  return document_from_json(detail::parse_json_text(text, "network file"));
}

inline std::string emit_document(const NetworkDocument& doc) { return document_to_json(doc).dump(2) + "\n"; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::invalid_input, "cannot write '" + path + "'");
  out << text;
}

inline NetworkDocument load_document(const std::string& path) {
  try {
    return parse_document(read_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

// Scenario files.

inline case_model::Scenario scenario_from_json(const ojson& j) {
  using namespace detail;
  if (auto f = j.find("format"); f != j.end() && *f != kScenarioFormat)
    schema_error("format", "unsupported format " + f->dump());
  case_model::Scenario sc;
  sc.name = optional_string(j, "name", "scenario");
  for_each_item(j, "steps", "", [&](const ojson& s, const std::string& p) {
    sc.steps.push_back({as_string(field(s, "variable", p), p + ".variable"),
                        as_string(field(s, "state", p), p + ".state"), optional_string(s, "label", p)});
  });
  return sc;
}

inline std::string emit_scenario(const case_model::Scenario& sc) {
  ojson j;
  j["format"] = kScenarioFormat;
  j["name"] = sc.name;
  j["steps"] = ojson::array();
  for (const auto& s : sc.steps) {
    ojson sj;
    sj["variable"] = s.variable;
    sj["state"] = s.state;
    sj["label"] = s.label;
    j["steps"].push_back(std::move(sj));
  }
  return j.dump(2) + "\n";
}

inline case_model::Scenario load_scenario(const std::string& path) {
  try {
    return scenario_from_json(detail::parse_json_text(read_file(path), "scenario file"));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

// CaseConfig overrides: any subset of the fields below.

inline case_model::CaseConfig apply_config_overrides(case_model::CaseConfig cfg, const ojson& j) {
  using namespace detail;
  if (!j.is_object()) schema_error("config", "expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string p = "config." + key;
    if (key == "prior_killer") cfg.prior_killer = as_number(value, p);
    else if (key == "samoan_share") cfg.samoan_share = as_number(value, p);
    else if (key == "prior_knew") cfg.prior_knew = as_number(value, p);
    else if (key == "stain_samoan_if_defendant") cfg.stain_samoan_if_defendant = as_number(value, p);
    else if (key == "stain_samoan_if_other") cfg.stain_samoan_if_other = as_number(value, p);
    else if (key == "report_if_samoan") cfg.report_if_samoan = as_number(value, p);
    else if (key == "report_if_not_samoan") cfg.report_if_not_samoan = as_number(value, p);
    else if (key == "statement") {
      auto values = as_numbers(value, p);
      if (values.size() != cfg.statement.size()) schema_error(p, "expected 12 entries");
      std::copy(values.begin(), values.end(), cfg.statement.begin());
    } else if (key == "items") {
      if (!value.is_object()) schema_error(p, "expected an object");
      for (const auto& [id, pair] : value.items()) {
        auto it = std::find_if(cfg.items.begin(), cfg.items.end(), [&](const auto& item) { return item.id == id; });
        if (it == cfg.items.end()) schema_error(p + "." + id, "unknown evidence item");
        auto values = as_numbers(pair, p + "." + id);
        if (values.size() != 2) schema_error(p + "." + id, "expected [p_if_killer, p_if_witness]");
        it->p_if_killer = values[0];
        it->p_if_witness = values[1];
      }
    } else {
      schema_error(p, "unknown config field");
    }
  }
  cfg.validate();
  return cfg;
}

inline case_model::CaseConfig load_config(const std::string& path) {
  try {
    return apply_config_overrides({}, detail::parse_json_text(read_file(path), "config file"));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

}  // namespace bnev
