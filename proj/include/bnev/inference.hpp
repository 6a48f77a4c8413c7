#pragma once

// Exact inference by variable elimination.
//
// Probabilities stay in linear space. Every factor produced by summing out a
// variable is renormalized and its mass is accumulated in a log-scale term,
// which keeps products of many small genotype probabilities away from
// underflow while the result remains an exact conditional.

#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bnev/factor.hpp"
#include "bnev/network.hpp"

namespace bnev {

namespace detail {

inline void require_compiled(const Network& net) {
  if (!net.compiled())
    throw Error(ErrorKind::invalid_network, "network has not been validated");
}

using Observed = std::vector<std::optional<std::size_t>>;

/// Min-fill ordering over the moral graph of the evidence-reduced factors;
/// ties go to the lexically smallest variable id.
inline std::vector<std::size_t> min_fill_order(const Network& net, const Observed& observed,
                                               std::optional<std::size_t> keep) {
  const std::size_t n = net.size();
  std::vector<std::set<std::size_t>> adj(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::size_t> scope;
    for (auto p : net.parents_of(v))
      if (!observed[p]) scope.push_back(p);
    if (!observed[v]) scope.push_back(v);
    for (auto a : scope)
      for (auto b : scope)
        if (a != b) adj[a].insert(b);
  }

  std::vector<bool> pending(n, false);
  std::size_t remaining = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (observed[v] || (keep && *keep == v)) continue;
    pending[v] = true;
    ++remaining;
  }

  std::vector<std::size_t> order;
  order.reserve(remaining);
  while (remaining > 0) {
    std::size_t best = n;
    std::size_t best_fill = std::numeric_limits<std::size_t>::max();
    for (std::size_t v = 0; v < n; ++v) {
      if (!pending[v]) continue;
      std::size_t fill = 0;
      for (auto a = adj[v].begin(); a != adj[v].end(); ++a)
        for (auto b = std::next(a); b != adj[v].end(); ++b)
          if (!adj[*a].count(*b)) ++fill;
      if (fill < best_fill || (fill == best_fill && net.variable(v).id < net.variable(best).id)) {
        best = v;
        best_fill = fill;
      }
    }
    for (auto a : adj[best]) {
      for (auto b : adj[best])
        if (a != b) adj[a].insert(b);
      adj[a].erase(best);
    }
    adj[best].clear();
    pending[best] = false;
    --remaining;
    order.push_back(best);
  }
  return order;
}

struct Elimination {
  std::vector<Factor> factors;  // what is left after the order is exhausted
  double log_scale = 0.0;
  bool impossible = false;      // some factor vanished: P(evidence) = 0
};

inline Elimination eliminate(const Network& net, const Observed& observed,
                             std::span<const std::size_t> order) {
  Elimination out;
  for (std::size_t v = 0; v < net.size(); ++v) out.factors.push_back(cpt_factor(net, v, observed));

  for (auto var : order) {
    Factor product;
    std::vector<Factor> rest;
    for (auto& f : out.factors) {
      if (f.contains(var)) product = multiply(product, f);
      else rest.push_back(std::move(f));
    }
    Factor reduced = sum_out(product, var);
    const double mass = reduced.sum();
    if (!(mass > 0.0)) {
      out.impossible = true;
      return out;
    }
    for (double& x : reduced.values()) x /= mass;
    out.log_scale += std::log(mass);
    rest.push_back(std::move(reduced));
    out.factors = std::move(rest);
  }
  return out;
}

inline std::vector<std::size_t> resolve_order(const Network& net, std::span<const std::string> ids) {
  std::vector<std::size_t> out;
  for (const auto& id : ids) out.push_back(net.index_of(id));
  return out;
}

inline void check_order(const Network& net, const Observed& observed, std::size_t query,
                        std::span<const std::size_t> order) {
  std::vector<int> count(net.size(), 0);
  for (auto v : order) ++count[v];
  for (std::size_t v = 0; v < net.size(); ++v) {
    const int want = (observed[v] || v == query) ? 0 : 1;
    if (count[v] != want)
      throw Error(ErrorKind::invalid_input,
                  "elimination order must list every non-query, unobserved variable exactly once");
  }
}

inline Distribution posterior_with_order(const Network& net, const Observed& observed,
                                         std::size_t query, std::span<const std::size_t> order) {
  const auto& qv = net.variable(query);
  Distribution dist{qv.id, qv.states, std::vector<double>(qv.states.size(), 0.0)};

  Elimination elim = eliminate(net, observed, order);
  if (!elim.impossible) {
    Factor joint;
    for (const auto& f : elim.factors) joint = multiply(joint, f);
    const double mass = joint.sum();
    if (mass > 0.0) {
      if (observed[query]) {
        dist.probs[*observed[query]] = 1.0;
      } else {
        for (std::size_t s = 0; s < dist.probs.size(); ++s) dist.probs[s] = joint.values()[s] / mass;
      }
      return dist;
    }
  }
  throw Error(ErrorKind::zero_probability, "evidence has zero probability");
}

}  // namespace detail

/// Deterministic min-fill elimination order for a query, excluding the query
/// and observed variables.
inline std::vector<std::string> elimination_order(const Network& net, const std::string& query,
                                                  const EvidenceSet& ev) {
  detail::require_compiled(net);
  const auto observed = ev.resolve(net);
  const auto q = net.index_of(query);
  std::vector<std::string> out;
  for (auto v : detail::min_fill_order(net, observed, q)) out.push_back(net.variable(v).id);
  return out;
}

/// Exact P(var | ev). Throws zero_probability when P(ev) = 0.
inline Distribution posterior(const Network& net, const EvidenceSet& ev, const std::string& var) {
  detail::require_compiled(net);
  const auto observed = ev.resolve(net);
  const auto q = net.index_of(var);
  const auto order = detail::min_fill_order(net, observed, q);
  return detail::posterior_with_order(net, observed, q, order);
}

/// Same as posterior() with a caller-supplied elimination order.
inline Distribution posterior(const Network& net, const EvidenceSet& ev, const std::string& var,
                              std::span<const std::string> order) {
  detail::require_compiled(net);
  const auto observed = ev.resolve(net);
  const auto q = net.index_of(var);
  const auto resolved = detail::resolve_order(net, order);
  detail::check_order(net, observed, q, resolved);
  return detail::posterior_with_order(net, observed, q, resolved);
}

inline Distribution prior_marginal(const Network& net, const std::string& var) {
  return posterior(net, EvidenceSet{}, var);
}

/// P(ev), summing the joint over every configuration consistent with ev.
inline double likelihood_of_evidence(const Network& net, const EvidenceSet& ev) {
  detail::require_compiled(net);
  const auto observed = ev.resolve(net);
  const auto order = detail::min_fill_order(net, observed, std::nullopt);
  auto elim = detail::eliminate(net, observed, order);
  if (elim.impossible) return 0.0;
  double log_p = elim.log_scale;
  for (const auto& f : elim.factors) {
    const double c = f.sum();
    if (!(c > 0.0)) return 0.0;
    log_p += std::log(c);
  }
  return std::min(1.0, std::exp(log_p));
}

/// P(ev | hyp = s1) / P(ev | hyp = s2).
inline double likelihood_ratio(const Network& net, const EvidenceSet& ev, const std::string& hyp,
                               const std::string& s1, const std::string& s2) {
  detail::require_compiled(net);
  const auto h = net.index_of(hyp);
  net.state_index(h, s1);
  net.state_index(h, s2);
  if (ev.contains(hyp))
    throw Error(ErrorKind::invalid_input, "evidence already instantiates '" + hyp + "'");

  auto conditional = [&](const std::string& state) {
    EvidenceSet only{{hyp, state}};
    const double p_h = likelihood_of_evidence(net, only);
    if (!(p_h > 0.0))
      throw Error(ErrorKind::zero_probability, "'" + hyp + "=" + state + "' has zero probability");
    return likelihood_of_evidence(net, ev.merged(only)) / p_h;
  };
  const double num = conditional(s1);
  const double den = conditional(s2);
  if (!(den > 0.0))
    throw Error(ErrorKind::zero_probability,
                "evidence is impossible under '" + hyp + "=" + s2 + "'");
  return num / den;
}

}  // namespace bnev
