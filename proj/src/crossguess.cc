#include "pwdist/crossguess.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "pwdist/common.h"

namespace pwdist {

GuessOrdering::GuessOrdering(std::vector<std::string> guesses, std::string source_label)
    : guesses_(std::move(guesses)), source_label_(std::move(source_label)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(guesses_.size());
  for (const auto& g : guesses_) {
    if (!seen.insert(g).second) throw ArgumentError("duplicate guess in ordering: " + g);
  }
}

GuessOrdering GuessOrdering::from_table(const RankFrequencyTable& table,
                                        std::string source_label) {
  std::vector<std::string> guesses;
  guesses.reserve(table.distinct_count());
  for (const auto& e : table.entries()) guesses.push_back(e.password);
  return GuessOrdering(std::move(guesses), std::move(source_label));
}

std::string_view curve_metric_name(CurveMetric metric) {
  return metric == CurveMetric::kUsers ? "users" : "distinct";
}

CurveMetric parse_curve_metric(std::string_view tag) {
  if (tag == "users") return CurveMetric::kUsers;
  if (tag == "distinct" || tag == "distinct-passwords") return CurveMetric::kDistinctPasswords;
  throw ArgumentError("unknown curve metric: " + std::string(tag));
}

GuessCurve::GuessCurve(CurveMetric metric, std::uint64_t denominator)
    : metric_(metric), denominator_(denominator) {
  if (denominator_ == 0) throw ArgumentError("curve denominator must be positive");
}

void GuessCurve::push(std::uint64_t cumulative) {
  if (cumulative < last_) throw ArgumentError("guess curve must be non-decreasing");
  if (cumulative > denominator_) throw ArgumentError("guess curve exceeds its denominator");
  if (metric_ == CurveMetric::kDistinctPasswords && cumulative > last_ + 1) {
    throw ArgumentError("distinct-password curve may gain at most 1 per guess");
  }
  ++length_;
  if (length_ == 1 || cumulative != last_) {
    points_.push_back({length_, cumulative});
    pending_ = false;
  } else {
    pending_ = true;
  }
  last_ = cumulative;
}

void GuessCurve::finish() {
  if (pending_) points_.push_back({length_, last_});
  pending_ = false;
}

std::uint64_t GuessCurve::value_at(std::uint64_t t) const {
  if (t == 0 || points_.empty()) return 0;
  auto it = std::upper_bound(points_.begin(), points_.end(), t,
                             [](std::uint64_t v, const CurvePoint& p) { return v < p.t; });
  return std::prev(it)->cumulative;
}

GuessCurve self_curve(const RankFrequencyTable& table, CurveMetric metric) {
  const bool users = metric == CurveMetric::kUsers;
  GuessCurve curve(metric, users ? table.total_users() : table.distinct_count());
  std::uint64_t cumulative = 0;
  for (const auto& e : table.entries()) {
    cumulative += users ? e.count : 1;
    curve.push(cumulative);
  }
  curve.finish();
  return curve;
}

GuessCurve cross_curve(const GuessOrdering& reference, const RankFrequencyTable& target,
                       CurveMetric metric) {
  std::unordered_map<std::string_view, std::uint64_t> counts;
  counts.reserve(target.distinct_count());
  for (const auto& e : target.entries()) counts.emplace(e.password, e.count);

  const bool users = metric == CurveMetric::kUsers;
  GuessCurve curve(metric, users ? target.total_users() : target.distinct_count());
  std::uint64_t cumulative = 0;
  for (const auto& guess : reference.guesses()) {
    auto it = counts.find(guess);
    if (it != counts.end()) cumulative += users ? it->second : 1;
    curve.push(cumulative);
  }
  curve.finish();
  return curve;
}

GuessOrdering dictionary_ordering(std::span<const std::string> words, std::string source_label) {
  std::vector<std::string> sorted(words.begin(), words.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return GuessOrdering(std::move(sorted), std::move(source_label));
}

RankFrequencyTable truncate_reaggregate(const RankFrequencyTable& table, std::size_t max_len,
                                        std::uint64_t tie_break_seed) {
  if (max_len < 1) throw ArgumentError("truncation length must be >= 1");
  std::unordered_map<std::string, std::uint64_t> merged;
  merged.reserve(table.distinct_count());
  for (const auto& e : table.entries()) {
    merged[e.password.substr(0, max_len)] += e.count;
  }
  std::vector<RankEntry> counted;
  counted.reserve(merged.size());
  for (auto& [password, count] : merged) counted.push_back({password, count});
  return rank_counts(std::move(counted), tie_break_seed);
}

void write_curve_tsv(std::ostream& out, const GuessCurve& curve, bool log_spaced) {
  out << "t\tcumulative\tfraction\n";
  const double denom = static_cast<double>(curve.denominator());
  auto row = [&](std::uint64_t t, std::uint64_t c) {
    out << t << '\t' << c << '\t' << format_double(static_cast<double>(c) / denom) << '\n';
  };
  const auto& points = curve.points();
  if (!log_spaced) {
    std::size_t next = 0;
    std::uint64_t current = 0;
    for (std::uint64_t t = 1; t <= curve.length(); ++t) {
      while (next < points.size() && points[next].t <= t) current = points[next++].cumulative;
      row(t, current);
    }
    return;
  }
  std::uint64_t previous = 0;
  for (int k = 0;; ++k) {
    const auto t = static_cast<std::uint64_t>(std::llround(std::pow(10.0, k / 20.0)));
    if (t > curve.length()) break;
    if (t == previous) continue;
    row(t, curve.value_at(t));
    previous = t;
  }
  if (curve.length() > 0 && previous != curve.length()) {
    row(curve.length(), curve.value_at(curve.length()));
  }
}

}  // namespace pwdist
