#pragma once

// Random network and evidence generators for property tests.

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "bnev/network.hpp"

namespace bnev::testing {

struct RandomNetworkOptions {
  std::size_t min_vars = 1;
  std::size_t max_vars = 12;
  std::size_t max_states = 4;
  std::size_t max_parents = 3;
  double max_joint = 1 << 20;  // keeps brute-force enumeration fast
  double zero_entry_rate = 0.1;
};

inline Network random_network(std::mt19937& rng, const RandomNetworkOptions& opt = {}) {
  std::uniform_int_distribution<std::size_t> nvars(opt.min_vars, opt.max_vars);
  const std::size_t n = nvars(rng);

  // Ids are shuffled so lexical order is unrelated to topological order.
  std::vector<std::size_t> names(n);
  std::iota(names.begin(), names.end(), 0);
  std::shuffle(names.begin(), names.end(), rng);

  std::vector<std::size_t> cards;
  double joint = 1;
  std::uniform_int_distribution<std::size_t> card(2, opt.max_states);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = card(rng);
    while (c > 2 && joint * c > opt.max_joint) --c;
    cards.push_back(c);
    joint *= c;
  }

  NetworkBuilder b;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> states;
    for (std::size_t s = 0; s < cards[i]; ++s) states.push_back("s" + std::to_string(s));
    b.add_variable("v" + std::to_string(names[i]), "", states);
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> candidates(i);
    std::iota(candidates.begin(), candidates.end(), 0);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, std::min(opt.max_parents, i))(rng);
    std::vector<std::string> parents;
    std::size_t combos = 1;
    for (std::size_t p = 0; p < k; ++p) {
      parents.push_back(b.variables()[candidates[p]].id);
      combos *= cards[candidates[p]];
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < combos; ++r) {
      std::vector<double> row(cards[i]);
      double sum = 0;
      for (auto& x : row) {
        x = unit(rng) < opt.zero_entry_rate ? 0.0 : unit(rng) + 1e-3;
        sum += x;
      }
      if (sum == 0) row[0] = sum = 1;
      for (auto& x : row) x /= sum;
      rows.push_back(std::move(row));
    }
    b.add_cpt(b.variables()[i].id, parents, rows);
  }
  return b.build("random");
}

inline EvidenceSet random_evidence(std::mt19937& rng, const Network& net, std::size_t max_observed) {
  EvidenceSet ev;
  std::vector<std::size_t> order(net.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t k = std::uniform_int_distribution<std::size_t>(0, std::min(max_observed, net.size()))(rng);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& v = net.variable(order[i]);
    ev.set(v.id, v.states[std::uniform_int_distribution<std::size_t>(0, v.states.size() - 1)(rng)]);
  }
  return ev;
}

// Reference enumeration written against the declared Cpt rows rather than the
// compiled tables, so it shares no indexing code with the engine.
class JointOracle {
 public:
  explicit JointOracle(const Network& net) : net_(net) {
    for (const auto& cpt : net.cpts()) {
      auto& rows = rows_[cpt.child];
      parents_[cpt.child] = cpt.parents;
      for (const auto& r : cpt.rows) rows[r.given] = r.probs;
    }
  }

  // Sum of the joint over configurations matching ev, split by the state of `var`.
  std::vector<double> mass(const EvidenceSet& ev, const std::string& var) const {
    const auto& vars = net_.variables();
    std::vector<double> out(net_.variable(var).states.size(), 0.0);
    std::map<std::string, std::size_t> assign;
    for (const auto& v : vars) assign[v.id] = 0;
    while (true) {
      bool consistent = true;
      for (const auto& [k, s] : ev)
        if (net_.variable(k).states[assign[k]] != s) consistent = false;
      if (consistent) {
        double w = 1;
        for (const auto& v : vars) {
          std::vector<std::string> given;
          for (const auto& p : parents_.at(v.id)) given.push_back(net_.variable(p).states[assign[p]]);
          const auto& probs = rows_.at(v.id).at(given);
          double row_sum = 0;
          for (double x : probs) row_sum += x;
          w *= probs[assign[v.id]] / row_sum;
        }
        out[assign[var]] += w;
      }
      std::size_t k = vars.size();
      while (k > 0) {
        const auto& id = vars[k - 1].id;
        if (++assign[id] < vars[k - 1].states.size()) break;
        assign[id] = 0;
        --k;
      }
      if (k == 0) return out;
    }
  }

  double likelihood(const EvidenceSet& ev) const {
    double total = 0;
    for (double m : mass(ev, net_.variable(0).id)) total += m;
    return total;
  }

 private:
  const Network& net_;
  std::map<std::string, std::vector<std::string>> parents_;
  std::map<std::string, std::map<std::vector<std::string>, std::vector<double>>> rows_;
};

}  // namespace bnev::testing
