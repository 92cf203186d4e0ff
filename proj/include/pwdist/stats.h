// Guesswork and entropy statistics of finite password distributions.

#ifndef PWDIST_STATS_H_
#define PWDIST_STATS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "pwdist/ingest.h"
#include "pwdist/zipf_fit.h"

namespace pwdist {

enum class ModelKind { kUniform, kEmpirical, kZipf };

std::string_view model_kind_name(ModelKind kind);

// P_1..P_N, most probable first.
class ProbabilityModel {
 public:
  // Checks sum == 1 (within 1e-9), entries in (0, 1] and non-increasing.
  // Throws ArgumentError otherwise.
  ProbabilityModel(std::vector<double> probs, ModelKind kind,
                   std::optional<double> normalizer = std::nullopt);

  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  ModelKind kind() const { return kind_; }
  std::optional<double> normalizer() const { return normalizer_; }

 private:
  std::vector<double> probs_;
  ModelKind kind_;
  std::optional<double> normalizer_;
};

// f_i / total_users, in table order.
ProbabilityModel empirical_model(const RankFrequencyTable& table);
ProbabilityModel uniform_model(std::uint64_t n);
// P_i = K i^-s with K = 1 / sum_{i<=n} i^-s.
ProbabilityModel zipf_model(double s, std::uint64_t n);

// G = sum i P_i.
double guesswork(std::span<const double> probs);

struct AlphaGuesswork {
  std::uint64_t r_alpha = 0;
  double g_alpha = 0.0;
};

// r_alpha is the first rank whose cumulative probability reaches alpha and
// g_alpha = sum_{i <= r_alpha} i P_i. alpha == 1 always stops at the last
// rank. Requires 0 < alpha <= 1.
AlphaGuesswork alpha_guesswork(std::span<const double> probs, double alpha);

// Entropies in bits. 0 log 0 is taken as 0.
double shannon_entropy(std::span<const double> probs);
double min_entropy(std::span<const double> probs);
double renyi_half_entropy(std::span<const double> probs);

struct GuessStats {
  double guesswork_g = 0.0;
  double alpha = 0.85;
  std::uint64_t r_alpha = 0;
  double alpha_guesswork = 0.0;
  double shannon_h = 0.0;
  double min_entropy = 0.0;
  double renyi_r = 0.0;
};

inline constexpr double kDefaultAlpha = 0.85;

// All statistics in one pass over the model.
GuessStats compute_stats(const ProbabilityModel& model, double alpha = kDefaultAlpha);

struct ModelStats {
  ModelKind kind;
  GuessStats stats;
};

// Uniform over distinct_count, the empirical table, and Zipf(fit.s) truncated
// at distinct_count, in that order.
std::array<ModelStats, 3> stats_report(const RankFrequencyTable& table, const ZipfFit& fit,
                                       double alpha = kDefaultAlpha);

// Rows uniform/empirical/zipf; columns G, G_alpha, r_alpha, H, min_entropy,
// renyi_R.
void write_stats_tsv(std::ostream& out, std::span<const ModelStats> rows);

}  // namespace pwdist

#endif  // PWDIST_STATS_H_
