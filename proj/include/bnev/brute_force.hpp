#pragma once

// Reference inference by full enumeration of the joint distribution. Shares
// nothing with the elimination engine beyond the compiled Cpt tables; used as
// the oracle in tests and for golden-file generation.

#include <cstddef>
#include <string>
#include <vector>

#include "bnev/network.hpp"

namespace bnev {

inline constexpr double kBruteForceLimit = 1e7;

namespace detail {

// Calls visit(weight, assignment) for every joint configuration consistent
// with the evidence.
template <typename Visit>
void enumerate_joint(const Network& net, const EvidenceSet& ev, Visit&& visit) {
  if (!net.compiled()) throw Error(ErrorKind::invalid_network, "network has not been validated");
  const auto observed = ev.resolve(net);
  double space = 1;
  for (std::size_t v = 0; v < net.size(); ++v) space *= static_cast<double>(net.cardinality(v));
  if (space > kBruteForceLimit)
    throw Error(ErrorKind::state_space_overflow, "joint state space exceeds 10^7 configurations");

  std::vector<std::size_t> free_vars;
  std::vector<std::size_t> assignment(net.size(), 0);
  for (std::size_t v = 0; v < net.size(); ++v) {
    if (observed[v]) assignment[v] = *observed[v];
    else free_vars.push_back(v);
  }

  while (true) {
    double weight = 1.0;
    for (std::size_t v = 0; v < net.size() && weight != 0.0; ++v) {
      std::size_t row = 0;
      for (auto p : net.parents_of(v)) row = row * net.cardinality(p) + assignment[p];
      weight *= net.table_of(v)[row * net.cardinality(v) + assignment[v]];
    }
    visit(weight, assignment);

    std::size_t k = free_vars.size();
    while (k > 0) {
      auto v = free_vars[k - 1];
      if (++assignment[v] < net.cardinality(v)) break;
      assignment[v] = 0;
      --k;
    }
    if (k == 0) return;
  }
}

}  // namespace detail

inline double brute_force_likelihood(const Network& net, const EvidenceSet& ev) {
  double total = 0;
  detail::enumerate_joint(net, ev, [&](double w, const auto&) { total += w; });
  return total;
}

inline Distribution brute_force_posterior(const Network& net, const EvidenceSet& ev,
                                          const std::string& var) {
  const auto q = net.index_of(var);
  std::vector<double> mass(net.cardinality(q), 0.0);
  detail::enumerate_joint(net, ev, [&](double w, const std::vector<std::size_t>& a) { mass[a[q]] += w; });
  double total = 0;
  for (double m : mass) total += m;
  if (!(total > 0.0)) throw Error(ErrorKind::zero_probability, "evidence has zero probability");
  Distribution d{var, net.variable(q).states, {}};
  for (double m : mass) d.probs.push_back(m / total);
  return d;
}

}  // namespace bnev
