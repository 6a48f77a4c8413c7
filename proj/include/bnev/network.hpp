#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bnev/error.hpp"

namespace bnev {

/// Tolerance used when checking that a CPT row or a distribution sums to one.
inline constexpr double kSumTolerance = 1e-9;

struct Variable {
  std::string id;
  std::string label;
  std::vector<std::string> states;

  std::optional<std::size_t> state_index(std::string_view state) const {
    auto it = std::find(states.begin(), states.end(), state);
    if (it == states.end()) return std::nullopt;
    return static_cast<std::size_t>(it - states.begin());
  }

  bool operator==(const Variable&) const = default;
};

/// One row of a conditional probability table: the parent states it is
/// conditioned on (in the Cpt's parent order) and a distribution over the
/// child's states.
struct CptRow {
  std::vector<std::string> given;
  std::vector<double> probs;

  bool operator==(const CptRow&) const = default;
};

struct Cpt {
  std::string child;
  std::vector<std::string> parents;
  std::vector<CptRow> rows;

  bool operator==(const Cpt&) const = default;
};

struct Violation {
  std::string subject;  // offending variable or Cpt id
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  bool mentions(std::string_view message) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) {
      return v.message.find(message) != std::string::npos;
    });
  }

  std::string to_string() const {
    if (ok()) return "ok";
    std::ostringstream out;
    for (const auto& v : violations) out << v.subject << ": " << v.message << '\n';
    return out.str();
  }
};

namespace detail {

// Mixed-radix iteration helper: advances `digits` (last digit fastest).
// Returns false once every combination has been visited.
inline bool next_combination(std::vector<std::size_t>& digits, std::span<const std::size_t> radix) {
  for (std::size_t d = digits.size(); d-- > 0;) {
    if (++digits[d] < radix[d]) return true;
    digits[d] = 0;
  }
  return false;
}

}  // namespace detail

class Network;
ValidationReport validate_network(const Network& net);

/// A directed acyclic graph of discrete variables with one Cpt per variable.
///
/// The plain constructor stores its inputs verbatim so that malformed networks
/// can still be inspected by validate_network. Inference requires a network
/// built through Network::create, which validates, renormalizes every row and
/// compiles the tables into index form. A created network is immutable and
/// safe to share between threads.
class Network {
 public:
  Network() = default;

  Network(std::vector<Variable> variables, std::vector<Cpt> cpts, std::string name = {})
      : name_(std::move(name)), variables_(std::move(variables)), cpts_(std::move(cpts)) {
    for (std::size_t i = 0; i < variables_.size(); ++i) index_.emplace(variables_[i].id, i);
  }

  /// Validates and compiles; throws Error(invalid_network) listing every
  /// violation when the inputs are malformed.
  static Network create(std::vector<Variable> variables, std::vector<Cpt> cpts,
                        std::string name = {}) {
    Network net(std::move(variables), std::move(cpts), std::move(name));
    auto report = validate_network(net);
    if (!report.ok()) throw Error(ErrorKind::invalid_network, report.to_string());
    net.compile();
    return net;
  }

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  bool compiled() const { return compiled_; }

  std::size_t size() const { return variables_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Cpt>& cpts() const { return cpts_; }
  const Variable& variable(std::size_t index) const { return variables_.at(index); }

  std::optional<std::size_t> find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(std::string_view id) const {
    if (auto i = find(id)) return *i;
    throw Error(ErrorKind::unknown_variable, "unknown variable '" + std::string(id) + "'");
  }

  const Variable& variable(std::string_view id) const { return variables_[index_of(id)]; }

  std::size_t state_index(std::size_t var, std::string_view state) const {
    if (auto s = variables_[var].state_index(state)) return *s;
    throw Error(ErrorKind::unknown_state, "variable '" + variables_[var].id +
                                              "' has no state '" + std::string(state) + "'");
  }

  std::size_t cardinality(std::size_t var) const { return variables_[var].states.size(); }

  /// Parent indices of `var` in Cpt order. Requires compiled().
  std::span<const std::size_t> parents_of(std::size_t var) const { return tables_[var].parents; }

  /// Flat table of `var`: one block of cardinality(var) entries per parent
  /// combination, combinations enumerated with the last parent fastest.
  std::span<const double> table_of(std::size_t var) const { return tables_[var].values; }

  /// The Cpt of `var` as stored (renormalized once compiled).
  const Cpt& cpt_of(std::size_t var) const { return cpts_[tables_.at(var).cpt]; }

  /// Variable indices with parents before children.
  std::span<const std::size_t> topological_order() const { return topo_; }

 private:
  struct Table {
    std::size_t cpt = 0;
    std::vector<std::size_t> parents;
    std::vector<double> values;
  };

  void compile() {
    tables_.assign(variables_.size(), {});
    for (std::size_t c = 0; c < cpts_.size(); ++c) {
      auto& cpt = cpts_[c];
      const std::size_t child = index_of(cpt.child);
      Table& table = tables_[child];
      table.cpt = c;
      std::vector<std::size_t> radix;
      for (const auto& p : cpt.parents) {
        table.parents.push_back(index_of(p));
        radix.push_back(cardinality(table.parents.back()));
      }
      const std::size_t card = cardinality(child);
      std::size_t combos = 1;
      for (auto r : radix) combos *= r;
      table.values.assign(combos * card, 0.0);
      for (auto& row : cpt.rows) {
        double sum = 0;
        for (double p : row.probs) sum += p;
        for (double& p : row.probs) p /= sum;
        std::size_t offset = 0;
        for (std::size_t k = 0; k < row.given.size(); ++k)
          offset = offset * radix[k] + state_index(table.parents[k], row.given[k]);
        std::copy(row.probs.begin(), row.probs.end(), table.values.begin() + offset * card);
      }
    }
    // Kahn's algorithm; validation already guarantees acyclicity.
    std::vector<std::size_t> indegree(variables_.size(), 0);
    std::vector<std::vector<std::size_t>> children(variables_.size());
    for (std::size_t v = 0; v < variables_.size(); ++v) {
      indegree[v] = tables_[v].parents.size();
      for (auto p : tables_[v].parents) children[p].push_back(v);
    }
    topo_.clear();
    for (std::size_t v = 0; v < variables_.size(); ++v)
      if (indegree[v] == 0) topo_.push_back(v);
    for (std::size_t i = 0; i < topo_.size(); ++i)
      for (auto c : children[topo_[i]])
        if (--indegree[c] == 0) topo_.push_back(c);
    compiled_ = true;
  }

  std::string name_;
  std::vector<Variable> variables_;
  std::vector<Cpt> cpts_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Table> tables_;
  std::vector<std::size_t> topo_;
  bool compiled_ = false;
};

inline ValidationReport validate_network(const Network& net) {
  ValidationReport report;
  auto add = [&](const std::string& subject, std::string message) {
    report.violations.push_back({subject, std::move(message)});
  };

  const auto& vars = net.variables();
  std::map<std::string, std::size_t> ids;
  for (const auto& v : vars) {
    if (v.id.empty()) add(v.id, "empty variable id");
    if (!ids.emplace(v.id, 0).second) add(v.id, "duplicate variable id");
    if (v.states.size() < 2) add(v.id, "fewer than two states");
    std::vector<std::string> sorted = v.states;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      add(v.id, "duplicate state label");
  }

  std::map<std::string, std::vector<std::string>> parents_of;
  for (const auto& cpt : net.cpts()) {
    auto child = net.find(cpt.child);
    if (!child) {
      add(cpt.child, "Cpt for unknown variable");
      continue;
    }
    if (++ids[cpt.child] > 1) {
      add(cpt.child, "more than one Cpt");
      continue;
    }
    bool parents_ok = true;
    std::vector<std::size_t> parent_index;
    for (const auto& p : cpt.parents) {
      auto pi = net.find(p);
      if (!pi) {
        add(cpt.child, "unknown parent '" + p + "'");
        parents_ok = false;
      } else {
        parent_index.push_back(*pi);
      }
    }
    {
      auto sorted = cpt.parents;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        add(cpt.child, "duplicate parent");
        parents_ok = false;
      }
    }
    parents_of[cpt.child] = cpt.parents;
    if (!parents_ok) continue;

    const std::size_t card = net.cardinality(*child);
    std::vector<std::size_t> radix;
    std::size_t combos = 1;
    for (auto p : parent_index) {
      radix.push_back(net.cardinality(p));
      combos *= radix.back();
    }
    std::vector<int> seen(combos, 0);
    for (const auto& row : cpt.rows) {
      if (row.given.size() != cpt.parents.size()) {
        add(cpt.child, "row has wrong number of parent states");
        continue;
      }
      std::size_t offset = 0;
      bool row_ok = true;
      for (std::size_t k = 0; k < row.given.size(); ++k) {
        auto s = vars[parent_index[k]].state_index(row.given[k]);
        if (!s) {
          add(cpt.child, "row refers to unknown state '" + row.given[k] + "' of '" +
                             cpt.parents[k] + "'");
          row_ok = false;
          break;
        }
        offset = offset * radix[k] + *s;
      }
      if (!row_ok) continue;
      if (++seen[offset] == 2) add(cpt.child, "duplicate row for a parent combination");
      if (row.probs.size() != card) {
        add(cpt.child, "row length differs from number of child states");
        continue;
      }
      double sum = 0;
      bool entries_ok = true;
      for (double p : row.probs) {
        if (!std::isfinite(p) || p < 0 || p > 1) entries_ok = false;
        sum += p;
      }
      if (!entries_ok) add(cpt.child, "probability outside [0,1]");
      if (std::abs(sum - 1.0) > kSumTolerance) {
        std::ostringstream msg;
        msg << "row sum ≠ 1 (" << sum << ")";
        add(cpt.child, msg.str());
      }
    }
    if (std::count(seen.begin(), seen.end(), 0) > 0)
      add(cpt.child, "missing row for a parent combination");
  }
  for (const auto& v : vars)
    if (ids.count(v.id) && ids[v.id] == 0) add(v.id, "missing Cpt");

  // Cycle detection by iterative DFS over declared parent links.
  enum class Mark { none, active, done };
  std::map<std::string, Mark> mark;
  std::vector<std::string> reported;
  for (const auto& [start, _] : parents_of) {
    if (mark[start] != Mark::none) continue;
    std::vector<std::pair<std::string, std::size_t>> stack{{start, 0}};
    mark[start] = Mark::active;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& ps = parents_of[node];
      if (next < ps.size()) {
        const std::string p = ps[next++];
        if (!parents_of.count(p)) continue;
        if (mark[p] == Mark::active) {
          if (std::find(reported.begin(), reported.end(), p) == reported.end()) {
            reported.push_back(p);
            add(p, "cycle detected");
          }
        } else if (mark[p] == Mark::none) {
          mark[p] = Mark::active;
          stack.emplace_back(p, 0);
        }
      } else {
        mark[node] = Mark::done;
        stack.pop_back();
      }
    }
  }
  return report;
}

/// Hard observations: variable id -> observed state label.
class EvidenceSet {
 public:
  EvidenceSet() = default;
  EvidenceSet(std::initializer_list<std::pair<const std::string, std::string>> init)
      : obs_(init) {}

  void set(std::string variable, std::string state) { obs_[std::move(variable)] = std::move(state); }
  bool erase(const std::string& variable) { return obs_.erase(variable) > 0; }
  bool contains(const std::string& variable) const { return obs_.count(variable) > 0; }
  std::optional<std::string> get(const std::string& variable) const {
    auto it = obs_.find(variable);
    if (it == obs_.end()) return std::nullopt;
    return it->second;
  }
  bool empty() const { return obs_.empty(); }
  std::size_t size() const { return obs_.size(); }
  auto begin() const { return obs_.begin(); }
  auto end() const { return obs_.end(); }

  /// Union where entries of `other` take precedence.
  EvidenceSet merged(const EvidenceSet& other) const {
    EvidenceSet out = *this;
    for (const auto& [v, s] : other) out.set(v, s);
    return out;
  }

  /// Per-variable observed state index (or nullopt); throws on unknown ids/states.
  std::vector<std::optional<std::size_t>> resolve(const Network& net) const {
    std::vector<std::optional<std::size_t>> out(net.size());
    for (const auto& [v, s] : obs_) {
      auto i = net.index_of(v);
      out[i] = net.state_index(i, s);
    }
    return out;
  }

  bool operator==(const EvidenceSet&) const = default;

 private:
  std::map<std::string, std::string> obs_;
};

struct Distribution {
  std::string variable;
  std::vector<std::string> states;
  std::vector<double> probs;

  double operator[](std::string_view state) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i] == state) return probs[i];
    throw Error(ErrorKind::unknown_state, "distribution of '" + variable + "' has no state '" +
                                              std::string(state) + "'");
  }

  bool valid(double tolerance = kSumTolerance) const {
    double sum = 0;
    for (double p : probs) {
      if (!(p >= 0.0 && p <= 1.0)) return false;
      sum += p;
    }
    return std::abs(sum - 1.0) <= tolerance;
  }
};

/// Incremental construction helper. Cpts are given as rows in canonical
/// parent-combination order (last parent fastest); parent states are looked
/// up from variables added earlier.
class NetworkBuilder {
 public:
  NetworkBuilder& add_variable(std::string id, std::string label, std::vector<std::string> states) {
    variables_.push_back({std::move(id), std::move(label), std::move(states)});
    return *this;
  }

  NetworkBuilder& add_cpt(std::string child, std::vector<std::string> parents,
                          const std::vector<std::vector<double>>& rows) {
    cpts_.push_back(make_cpt(variables_, std::move(child), std::move(parents), rows));
    return *this;
  }

  std::vector<Variable>& variables() { return variables_; }
  std::vector<Cpt>& cpts() { return cpts_; }

  Network build(std::string name = {}) const { return Network::create(variables_, cpts_, std::move(name)); }

  static Cpt make_cpt(std::span<const Variable> vars, std::string child,
                      std::vector<std::string> parents, const std::vector<std::vector<double>>& rows) {
    auto states_of = [&](const std::string& id) -> const std::vector<std::string>& {
      for (const auto& v : vars)
        if (v.id == id) return v.states;
      throw Error(ErrorKind::unknown_variable, "unknown parent '" + id + "'");
    };
    std::vector<std::size_t> radix;
    std::vector<const std::vector<std::string>*> labels;
    for (const auto& p : parents) {
      labels.push_back(&states_of(p));
      radix.push_back(labels.back()->size());
    }
    Cpt cpt{std::move(child), std::move(parents), {}};
    std::vector<std::size_t> digits(radix.size(), 0);
    std::size_t r = 0;
    do {
      if (r >= rows.size())
        throw Error(ErrorKind::invalid_network, "too few rows for Cpt of '" + cpt.child + "'");
      CptRow row;
      for (std::size_t k = 0; k < digits.size(); ++k) row.given.push_back((*labels[k])[digits[k]]);
      row.probs = rows[r++];
      cpt.rows.push_back(std::move(row));
    } while (detail::next_combination(digits, radix));
    if (r != rows.size())
      throw Error(ErrorKind::invalid_network, "too many rows for Cpt of '" + cpt.child + "'");
    return cpt;
  }

 private:
  std::vector<Variable> variables_;
  std::vector<Cpt> cpts_;
};

}  // namespace bnev
