#pragma once

// Template networks ("classes" in object-oriented Bayesian networks).
//
// A template declares interface inputs that the host network supplies. Its
// internal variables and Cpts may use those inputs as parents. Parameter
// slots are filled per instance: a table slot holds a whole Cpt body (rows in
// canonical parent order) and a state slot holds a variable's state labels.
// Instantiation flattens eagerly into a plain Network with internal ids
// renamed to "<instance>.<id>".

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bnev/network.hpp"

namespace bnev {

struct TemplateVariable {
  std::string id;
  std::string label;
  std::vector<std::string> states;  // used when states_slot is empty
  std::string states_slot;

  bool operator==(const TemplateVariable&) const = default;
};

struct TemplateCpt {
  std::string child;
  std::vector<std::string> parents;
  std::vector<CptRow> rows;  // used when table_slot is empty
  std::string table_slot;

  bool operator==(const TemplateCpt&) const = default;
};

struct NetworkTemplate {
  std::string name;
  std::vector<Variable> inputs;
  std::vector<TemplateVariable> variables;
  std::vector<TemplateCpt> cpts;
  std::vector<std::string> table_slots;
  std::vector<std::string> state_slots;

  bool operator==(const NetworkTemplate&) const = default;
};

using ParameterTable = std::vector<std::vector<double>>;

struct TemplateInstance {
  std::string template_name;
  std::string instance_id;
  std::map<std::string, std::string> bindings;  // interface input -> host variable
  std::map<std::string, ParameterTable> tables;
  std::map<std::string, std::vector<std::string>> states;

  bool operator==(const TemplateInstance&) const = default;
};

inline ValidationReport validate_template(const NetworkTemplate& tmpl) {
  ValidationReport report;
  auto add = [&](const std::string& subject, std::string msg) {
    report.violations.push_back({tmpl.name + ":" + subject, std::move(msg)});
  };

  std::set<std::string> inputs, internals;
  for (const auto& in : tmpl.inputs)
    if (!inputs.insert(in.id).second) add(in.id, "duplicate interface input");
  for (const auto& v : tmpl.variables) {
    if (inputs.count(v.id) || !internals.insert(v.id).second) add(v.id, "duplicate variable id");
    if (v.states_slot.empty() && v.states.size() < 2) add(v.id, "fewer than two states");
    if (!v.states_slot.empty() &&
        std::find(tmpl.state_slots.begin(), tmpl.state_slots.end(), v.states_slot) == tmpl.state_slots.end())
      add(v.id, "undeclared state slot '" + v.states_slot + "'");
  }

  std::map<std::string, std::vector<std::string>> parents;
  std::set<std::string> used_slots;
  for (const auto& c : tmpl.cpts) {
    if (!internals.count(c.child)) {
      add(c.child, "Cpt for unknown internal variable");
      continue;
    }
    if (parents.count(c.child)) add(c.child, "more than one Cpt");
    for (const auto& p : c.parents)
      if (!inputs.count(p) && !internals.count(p)) add(c.child, "unknown parent '" + p + "'");
    parents[c.child] = c.parents;
    if (!c.table_slot.empty()) {
      used_slots.insert(c.table_slot);
      if (std::find(tmpl.table_slots.begin(), tmpl.table_slots.end(), c.table_slot) == tmpl.table_slots.end())
        add(c.child, "undeclared table slot '" + c.table_slot + "'");
    }
  }
  for (const auto& v : tmpl.variables) {
    if (!v.states_slot.empty()) used_slots.insert(v.states_slot);
    if (!parents.count(v.id)) add(v.id, "missing Cpt");
  }
  for (const auto& s : tmpl.table_slots)
    if (!used_slots.count(s)) add(s, "parameter slot not referenced by any Cpt");
  for (const auto& s : tmpl.state_slots)
    if (!used_slots.count(s)) add(s, "state slot not referenced by any variable");

  // Internal graph must be acyclic; inputs are sources.
  std::map<std::string, int> mark;
  std::set<std::string> reported;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    mark[v] = 1;
    for (const auto& p : parents[v]) {
      if (!internals.count(p)) continue;
      if (mark[p] == 1) {
        if (reported.insert(p).second) add(p, "cycle detected");
      } else if (mark[p] == 0) {
        visit(p);
      }
    }
    mark[v] = 2;
  };
  for (const auto& v : internals)
    if (mark[v] == 0) visit(v);
  return report;
}

/// Flattens one template instance into `host`, returning a new validated
/// Network. Any binding, slot or Cpt problem throws Error(invalid_template).
inline Network instantiate(const Network& host, const TemplateInstance& inst,
                           const NetworkTemplate& tmpl) {
  auto fail = [&](const std::string& msg) -> Error {
    return Error(ErrorKind::invalid_template, "instance '" + inst.instance_id + "' of '" + tmpl.name + "': " + msg);
  };
  if (inst.template_name != tmpl.name) throw fail("template name mismatch");
  if (auto report = validate_template(tmpl); !report.ok()) throw fail(report.to_string());

  std::map<std::string, std::string> rename;
  for (const auto& in : tmpl.inputs) {
    auto b = inst.bindings.find(in.id);
    if (b == inst.bindings.end()) throw fail("unbound interface input '" + in.id + "'");
    auto h = host.find(b->second);
    if (!h) throw fail("binding of '" + in.id + "' names unknown host variable '" + b->second + "'");
    if (host.variable(*h).states != in.states)
      throw fail("state-space mismatch between input '" + in.id + "' and host variable '" + b->second + "'");
    rename[in.id] = b->second;
  }
  for (const auto& [input, _] : inst.bindings)
    if (std::none_of(tmpl.inputs.begin(), tmpl.inputs.end(), [&](const Variable& v) { return v.id == input; }))
      throw fail("binding for undeclared input '" + input + "'");
  for (const auto& s : tmpl.table_slots)
    if (!inst.tables.count(s)) throw fail("unbound slot '" + s + "'");
  for (const auto& s : tmpl.state_slots)
    if (!inst.states.count(s)) throw fail("unbound slot '" + s + "'");

  std::vector<Variable> variables = host.variables();
  std::vector<Cpt> cpts = host.cpts();
  for (const auto& v : tmpl.variables) {
    std::string id = inst.instance_id + "." + v.id;
    if (host.find(id)) throw fail("id collision on '" + id + "'");
    rename[v.id] = id;
    variables.push_back({id, v.label, v.states_slot.empty() ? v.states : inst.states.at(v.states_slot)});
  }
  for (const auto& c : tmpl.cpts) {
    std::vector<std::string> parents;
    for (const auto& p : c.parents) parents.push_back(rename.at(p));
    if (c.table_slot.empty()) {
      cpts.push_back({rename.at(c.child), std::move(parents), c.rows});
    } else {
      try {
        cpts.push_back(NetworkBuilder::make_cpt(variables, rename.at(c.child), std::move(parents),
                                                inst.tables.at(c.table_slot)));
      } catch (const Error& e) {
        throw fail(e.what());
      }
    }
  }
  try {
    return Network::create(std::move(variables), std::move(cpts), host.name());
  } catch (const Error& e) {
    throw fail(e.what());
  }
}

/// Applies instances in order; templates are looked up by name.
inline Network instantiate_all(Network host, const std::vector<TemplateInstance>& instances,
                               const std::vector<NetworkTemplate>& templates) {
  for (const auto& inst : instances) {
    auto t = std::find_if(templates.begin(), templates.end(),
                          [&](const NetworkTemplate& x) { return x.name == inst.template_name; });
    if (t == templates.end())
      throw Error(ErrorKind::invalid_template, "unknown template '" + inst.template_name + "'");
    host = instantiate(host, inst, *t);
  }
  return host;
}

}  // namespace bnev
