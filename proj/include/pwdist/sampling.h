// Discrete sampling over finite weight vectors (Vose's alias method).

#ifndef PWDIST_SAMPLING_H_
#define PWDIST_SAMPLING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "pwdist/common.h"

namespace pwdist {

class AliasTable {
 public:
  // Weights must be non-negative with a positive sum.
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const { return prob_.size(); }

  // Index in [0, size()) drawn with probability weight[i] / sum.
  std::size_t sample(Rng& rng) const;

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

// Draws `draws` samples and returns the hit count per index.
std::vector<std::uint64_t> sample_counts(const AliasTable& table, std::uint64_t draws,
                                         Rng& rng);

// Truncated Zipf weights r^-s for r = 1..n (unnormalized).
std::vector<double> zipf_weights(double s, std::uint64_t n);

}  // namespace pwdist

#endif  // PWDIST_SAMPLING_H_
