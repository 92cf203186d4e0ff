#include "pwdist/stats.h"

#include <algorithm>
#include <cmath>

#include "pwdist/common.h"

namespace pwdist {

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kUniform: return "uniform";
    case ModelKind::kEmpirical: return "empirical";
    case ModelKind::kZipf: return "zipf";
  }
  return "unknown";
}

ProbabilityModel::ProbabilityModel(std::vector<double> probs, ModelKind kind,
                                   std::optional<double> normalizer)
    : probs_(std::move(probs)), kind_(kind), normalizer_(normalizer) {
  if (probs_.empty()) throw ArgumentError("probability model must be non-empty");
  CompensatedSum total;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!(p > 0.0 && p <= 1.0)) throw ArgumentError("probabilities must lie in (0, 1]");
    if (i > 0 && p > probs_[i - 1]) throw ArgumentError("probabilities must be non-increasing");
    total += p;
  }
  if (std::abs(total.value() - 1.0) > 1e-9) throw ArgumentError("probabilities must sum to 1");
}

ProbabilityModel empirical_model(const RankFrequencyTable& table) {
  const double users = static_cast<double>(table.total_users());
  std::vector<double> probs;
  probs.reserve(table.distinct_count());
  for (const auto& e : table.entries()) probs.push_back(static_cast<double>(e.count) / users);
  return ProbabilityModel(std::move(probs), ModelKind::kEmpirical);
}

ProbabilityModel uniform_model(std::uint64_t n) {
  if (n < 1) throw ArgumentError("uniform model needs n >= 1");
  return ProbabilityModel(std::vector<double>(n, 1.0 / static_cast<double>(n)),
                          ModelKind::kUniform);
}

ProbabilityModel zipf_model(double s, std::uint64_t n) {
  if (n < 1) throw ArgumentError("zipf model needs n >= 1");
  if (!(s >= 0.0)) throw ArgumentError("zipf model needs s >= 0");
  std::vector<double> probs(n);
  CompensatedSum total;
  for (std::uint64_t i = 1; i <= n; ++i) {
    probs[i - 1] = std::pow(static_cast<double>(i), -s);
    total += probs[i - 1];
  }
  const double k = 1.0 / total.value();
  for (auto& p : probs) p *= k;
  return ProbabilityModel(std::move(probs), ModelKind::kZipf, k);
}

double guesswork(std::span<const double> probs) {
  CompensatedSum g;
  for (std::size_t i = 0; i < probs.size(); ++i) g += static_cast<double>(i + 1) * probs[i];
  return g.value();
}

AlphaGuesswork alpha_guesswork(std::span<const double> probs, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ArgumentError("alpha must be in (0, 1]");
  if (probs.empty()) throw ArgumentError("alpha-guesswork of an empty model");
  if (alpha == 1.0) return {probs.size(), guesswork(probs)};
  CompensatedSum cumulative, g;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cumulative += probs[i];
    g += static_cast<double>(i + 1) * probs[i];
    if (cumulative.value() >= alpha) return {i + 1, g.value()};
  }
  return {probs.size(), g.value()};
}

double shannon_entropy(std::span<const double> probs) {
  CompensatedSum h;
  for (double p : probs) {
    if (p > 0.0) h += -p * std::log2(p);
  }
  return h.value();
}

double min_entropy(std::span<const double> probs) {
  if (probs.empty()) throw ArgumentError("min-entropy of an empty model");
  return -std::log2(*std::max_element(probs.begin(), probs.end()));
}

double renyi_half_entropy(std::span<const double> probs) {
  CompensatedSum root_sum;
  for (double p : probs) root_sum += std::sqrt(p);
  return 2.0 * std::log2(root_sum.value());
}

GuessStats compute_stats(const ProbabilityModel& model, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ArgumentError("alpha must be in (0, 1]");
  const auto& probs = model.probs();
  GuessStats out;
  out.alpha = alpha;
  CompensatedSum g, h, root_sum, cumulative;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    g += static_cast<double>(i + 1) * p;
    h += -p * std::log2(p);
    root_sum += std::sqrt(p);
    if (out.r_alpha == 0 && alpha < 1.0) {
      cumulative += p;
      if (cumulative.value() >= alpha) {
        out.r_alpha = i + 1;
        out.alpha_guesswork = g.value();
      }
    }
  }
  out.guesswork_g = g.value();
  if (out.r_alpha == 0) {
    out.r_alpha = probs.size();
    out.alpha_guesswork = out.guesswork_g;
  }
  out.shannon_h = h.value();
  out.min_entropy = -std::log2(probs.front());
  out.renyi_r = 2.0 * std::log2(root_sum.value());
  return out;
}

std::array<ModelStats, 3> stats_report(const RankFrequencyTable& table, const ZipfFit& fit,
                                       double alpha) {
  const auto n = table.distinct_count();
  return {{
      {ModelKind::kUniform, compute_stats(uniform_model(n), alpha)},
      {ModelKind::kEmpirical, compute_stats(empirical_model(table), alpha)},
      {ModelKind::kZipf, compute_stats(zipf_model(fit.s, n), alpha)},
  }};
}

void write_stats_tsv(std::ostream& out, std::span<const ModelStats> rows) {
  out << "model\tG\tG_alpha\tr_alpha\tH\tmin_entropy\trenyi_R\n";
  for (const auto& row : rows) {
    const auto& s = row.stats;
    out << model_kind_name(row.kind) << '\t' << format_double(s.guesswork_g) << '\t'
        << format_double(s.alpha_guesswork) << '\t' << s.r_alpha << '\t'
        << format_double(s.shannon_h) << '\t' << format_double(s.min_entropy) << '\t'
        << format_double(s.renyi_r) << '\n';
  }
}

}  // namespace pwdist
