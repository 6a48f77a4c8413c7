#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bnev/network.hpp"

namespace bnev {

/// Non-negative table over a sorted set of variable indices, stored row-major
/// with the last variable varying fastest.
class Factor {
 public:
  Factor() : values_{1.0} {}

  Factor(std::vector<std::size_t> vars, std::vector<std::size_t> cards, std::vector<double> values)
      : vars_(std::move(vars)), cards_(std::move(cards)), values_(std::move(values)) {}

  const std::vector<std::size_t>& vars() const { return vars_; }
  const std::vector<std::size_t>& cards() const { return cards_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool contains(std::size_t var) const { return std::binary_search(vars_.begin(), vars_.end(), var); }

  double sum() const {
    double s = 0;
    for (double v : values_) s += v;
    return s;
  }

  /// Stride of each variable in `scope` within this factor (0 when absent).
  std::vector<std::size_t> strides_in(std::span<const std::size_t> scope) const {
    std::vector<std::size_t> own(vars_.size());
    std::size_t stride = 1;
    for (std::size_t d = vars_.size(); d-- > 0;) {
      own[d] = stride;
      stride *= cards_[d];
    }
    std::vector<std::size_t> out(scope.size(), 0);
    for (std::size_t i = 0; i < scope.size(); ++i) {
      auto it = std::lower_bound(vars_.begin(), vars_.end(), scope[i]);
      if (it != vars_.end() && *it == scope[i]) out[i] = own[it - vars_.begin()];
    }
    return out;
  }

 private:
  std::vector<std::size_t> vars_;
  std::vector<std::size_t> cards_;
  std::vector<double> values_;
};

/// Factor for the Cpt of `var`, with observed variables fixed and dropped.
inline Factor cpt_factor(const Network& net, std::size_t var,
                         std::span<const std::optional<std::size_t>> observed) {
  auto parents = net.parents_of(var);
  std::vector<std::size_t> family(parents.begin(), parents.end());
  family.push_back(var);

  // Strides of each family member inside the flat Cpt table.
  std::vector<std::size_t> table_stride(family.size());
  std::size_t stride = 1;
  for (std::size_t d = family.size(); d-- > 0;) {
    table_stride[d] = stride;
    stride *= net.cardinality(family[d]);
  }

  std::size_t base = 0;
  std::vector<std::pair<std::size_t, std::size_t>> free;  // (var, stride in table)
  for (std::size_t d = 0; d < family.size(); ++d) {
    if (observed[family[d]]) base += *observed[family[d]] * table_stride[d];
    else free.emplace_back(family[d], table_stride[d]);
  }
  std::sort(free.begin(), free.end());

  std::vector<std::size_t> vars, cards, src_stride;
  for (auto [v, s] : free) {
    vars.push_back(v);
    cards.push_back(net.cardinality(v));
    src_stride.push_back(s);
  }
  std::size_t size = 1;
  for (auto c : cards) size *= c;

  auto table = net.table_of(var);
  std::vector<double> values(size);
  std::vector<std::size_t> digits(vars.size(), 0);
  std::size_t src = base;
  for (std::size_t i = 0; i < size; ++i) {
    values[i] = table[src];
    for (std::size_t d = digits.size(); d-- > 0;) {
      src += src_stride[d];
      if (++digits[d] < cards[d]) break;
      src -= src_stride[d] * cards[d];
      digits[d] = 0;
    }
  }
  return Factor(std::move(vars), std::move(cards), std::move(values));
}

inline Factor multiply(const Factor& a, const Factor& b) {
  std::vector<std::size_t> vars, cards;
  std::size_t i = 0, j = 0;
  while (i < a.vars().size() || j < b.vars().size()) {
    if (j == b.vars().size() || (i < a.vars().size() && a.vars()[i] < b.vars()[j])) {
      vars.push_back(a.vars()[i]);
      cards.push_back(a.cards()[i++]);
    } else if (i == a.vars().size() || b.vars()[j] < a.vars()[i]) {
      vars.push_back(b.vars()[j]);
      cards.push_back(b.cards()[j++]);
    } else {
      vars.push_back(a.vars()[i]);
      cards.push_back(a.cards()[i++]);
      ++j;
    }
  }
  const auto sa = a.strides_in(vars);
  const auto sb = b.strides_in(vars);
  std::size_t size = 1;
  for (auto c : cards) size *= c;

  std::vector<double> values(size);
  std::vector<std::size_t> digits(vars.size(), 0);
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k < size; ++k) {
    values[k] = a.values()[ia] * b.values()[ib];
    for (std::size_t d = digits.size(); d-- > 0;) {
      ia += sa[d];
      ib += sb[d];
      if (++digits[d] < cards[d]) break;
      ia -= sa[d] * cards[d];
      ib -= sb[d] * cards[d];
      digits[d] = 0;
    }
  }
  return Factor(std::move(vars), std::move(cards), std::move(values));
}

inline Factor sum_out(const Factor& f, std::size_t var) {
  std::vector<std::size_t> vars, cards;
  for (std::size_t d = 0; d < f.vars().size(); ++d) {
    if (f.vars()[d] == var) continue;
    vars.push_back(f.vars()[d]);
    cards.push_back(f.cards()[d]);
  }
  Factor out(vars, cards, {});
  std::size_t size = 1;
  for (auto c : cards) size *= c;
  out.values().assign(size, 0.0);

  const auto so = out.strides_in(f.vars());
  std::vector<std::size_t> digits(f.vars().size(), 0);
  std::size_t io = 0;
  for (double v : f.values()) {
    out.values()[io] += v;
    for (std::size_t d = digits.size(); d-- > 0;) {
      io += so[d];
      if (++digits[d] < f.cards()[d]) break;
      io -= so[d] * f.cards()[d];
      digits[d] = 0;
    }
  }
  return out;
}

}  // namespace bnev
