#include "pwdist/sampling.h"

#include <cmath>

namespace pwdist {

AliasTable::AliasTable(std::span<const double> weights)
    : prob_(weights.size()), alias_(weights.size()) {
  if (weights.empty()) throw ArgumentError("alias table needs at least one weight");
  if (weights.size() > UINT32_MAX) throw ArgumentError("alias table too large");
  CompensatedSum total;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ArgumentError("weights must be finite and >= 0");
    total += w;
  }
  if (!(total.value() > 0.0)) throw ArgumentError("weights must have a positive sum");

  const double n = static_cast<double>(weights.size());
  std::vector<double> scaled(weights.size());
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    scaled[i] = weights[i] * n / total.value();
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (auto i : large) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
  for (auto i : small) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
}

std::size_t AliasTable::sample(Rng& rng) const {
  const std::size_t column = rng.below(prob_.size());
  return rng.uniform01() < prob_[column] ? column : alias_[column];
}

std::vector<std::uint64_t> sample_counts(const AliasTable& table, std::uint64_t draws,
                                         Rng& rng) {
  std::vector<std::uint64_t> counts(table.size(), 0);
  for (std::uint64_t i = 0; i < draws; ++i) ++counts[table.sample(rng)];
  return counts;
}

std::vector<double> zipf_weights(double s, std::uint64_t n) {
  std::vector<double> w(n);
  for (std::uint64_t r = 1; r <= n; ++r) w[r - 1] = std::pow(static_cast<double>(r), -s);
  return w;
}

}  // namespace pwdist
