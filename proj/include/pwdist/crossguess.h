// How well one ranking guesses another list: C(t), C(t||sigma) and the
// distinct-password variant.

#ifndef PWDIST_CROSSGUESS_H_
#define PWDIST_CROSSGUESS_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pwdist/ingest.h"

namespace pwdist {

// An ordered list of unique guesses.
class GuessOrdering {
 public:
  GuessOrdering() = default;
  // Throws ArgumentError on duplicate guesses.
  GuessOrdering(std::vector<std::string> guesses, std::string source_label);

  // The table's own rank order.
  static GuessOrdering from_table(const RankFrequencyTable& table, std::string source_label);

  const std::vector<std::string>& guesses() const { return guesses_; }
  const std::string& source_label() const { return source_label_; }
  std::size_t size() const { return guesses_.size(); }

 private:
  std::vector<std::string> guesses_;
  std::string source_label_;
};

enum class CurveMetric { kUsers, kDistinctPasswords };

std::string_view curve_metric_name(CurveMetric metric);
CurveMetric parse_curve_metric(std::string_view tag);

struct CurvePoint {
  std::uint64_t t = 0;
  std::uint64_t cumulative = 0;

  bool operator==(const CurvePoint&) const = default;
};

// Cumulative successes after t = 1..length guesses, stored sparsely: a point
// for every t where the cumulative value changes, plus t = 1 and t = length.
class GuessCurve {
 public:
  GuessCurve(CurveMetric metric, std::uint64_t denominator);

  // Appends the cumulative value after the next guess. Values must not
  // decrease and must not exceed the denominator.
  void push(std::uint64_t cumulative);
  // Marks the end of the guess sequence; keeps the final point.
  void finish();

  CurveMetric metric() const { return metric_; }
  std::uint64_t denominator() const { return denominator_; }
  std::uint64_t length() const { return length_; }
  const std::vector<CurvePoint>& points() const { return points_; }

  // Cumulative value after t guesses (0 for t == 0, the final value past
  // the end).
  std::uint64_t value_at(std::uint64_t t) const;
  std::uint64_t final_value() const { return last_; }

  bool operator==(const GuessCurve&) const = default;

 private:
  CurveMetric metric_;
  std::uint64_t denominator_;
  std::uint64_t length_ = 0;
  std::uint64_t last_ = 0;
  std::vector<CurvePoint> points_;
  bool pending_ = false;  // last pushed point not yet stored
};

GuessCurve self_curve(const RankFrequencyTable& table, CurveMetric metric);

// Guesses the target in the reference order; a guess absent from the target
// scores 0.
GuessCurve cross_curve(const GuessOrdering& reference, const RankFrequencyTable& target,
                       CurveMetric metric);

// Unique words in byte-wise lexical order.
GuessOrdering dictionary_ordering(std::span<const std::string> words,
                                  std::string source_label = "dictionary");

// Truncates every password to max_len bytes, merges the counts of passwords
// that collide and re-ranks.
RankFrequencyTable truncate_reaggregate(const RankFrequencyTable& table, std::size_t max_len,
                                        std::uint64_t tie_break_seed);

// Header `t\tcumulative\tfraction`. Dense output lists every t; log-spaced
// output keeps about 20 points per decade plus both endpoints.
void write_curve_tsv(std::ostream& out, const GuessCurve& curve, bool log_spaced = false);

}  // namespace pwdist

#endif  // PWDIST_CROSSGUESS_H_
