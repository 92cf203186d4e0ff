// Corpus parsing, cleanup and rank-frequency tables.

#ifndef PWDIST_INGEST_H_
#define PWDIST_INGEST_H_

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pwdist {

enum class CorpusFormat {
  kUserTabPassword,
  kPasswordPerLine,
};

CorpusFormat parse_corpus_format(std::string_view tag);
std::string_view corpus_format_name(CorpusFormat format);

struct CredentialRecord {
  std::string user;
  std::string password;
  std::uint64_t line_no = 0;  // 1-based physical line in the source

  bool operator==(const CredentialRecord&) const = default;
};

struct ParseResult {
  std::vector<CredentialRecord> records;
  std::uint64_t malformed_lines = 0;
};

// One record per accepted line. Lines end with LF; a trailing CR is
// stripped. In user-tab-password mode the first TAB separates the user from
// the password and lines without a TAB are counted as malformed and skipped.
// Password-per-line records get synthetic users "u<line_no>".
// Throws InputError (with the byte offset reached) if the stream fails.
ParseResult parse_corpus(std::istream& in, CorpusFormat format);

// True when the password is empty or made only of whitespace bytes.
bool is_blank_password(std::string_view password);

// Drops blank passwords, then keeps the highest-line_no record of each user.
// The result is ordered by line_no. Idempotent.
std::vector<CredentialRecord> cleanup(std::span<const CredentialRecord> records);

struct RankEntry {
  std::string password;
  std::uint64_t count = 0;

  bool operator==(const RankEntry&) const = default;
};

// Passwords ranked by descending use count; rank 1 is entries()[0].
class RankFrequencyTable {
 public:
  // Validates the table invariants (non-empty, positive non-increasing
  // counts, unique passwords). Throws InputError on violation.
  RankFrequencyTable(std::vector<RankEntry> entries, std::uint64_t tie_break_seed);

  const std::vector<RankEntry>& entries() const { return entries_; }
  std::uint64_t total_users() const { return total_users_; }
  std::uint64_t distinct_count() const { return entries_.size(); }
  std::uint64_t tie_break_seed() const { return tie_break_seed_; }

  // f_i for i = 1..distinct_count.
  std::vector<std::uint64_t> counts() const;

  bool operator==(const RankFrequencyTable&) const = default;

 private:
  std::vector<RankEntry> entries_;
  std::uint64_t total_users_ = 0;
  std::uint64_t tie_break_seed_ = 0;
};

// Sorts (password, count) pairs by descending count. Equal-count runs are
// put in a pseudo-random order keyed by the seed and the password bytes, so
// the result does not depend on the input order.
RankFrequencyTable rank_counts(std::vector<RankEntry> counted, std::uint64_t tie_break_seed);

// Groups cleaned records by password. Throws InputError on empty input.
RankFrequencyTable build_table(std::span<const CredentialRecord> records,
                               std::uint64_t tie_break_seed);

// Table with synthetic passwords "p1".."pN" for the given counts, which must
// already be non-increasing. Handy for fixtures and synthetic experiments.
RankFrequencyTable table_from_counts(std::span<const std::uint64_t> counts,
                                     std::uint64_t tie_break_seed = 0);

struct CountOfCountsEntry {
  std::uint64_t k = 0;    // multiplicity
  std::uint64_t n_k = 0;  // passwords used by exactly k users

  bool operator==(const CountOfCountsEntry&) const = default;
};

struct CountOfCounts {
  std::vector<CountOfCountsEntry> pairs;  // k strictly increasing

  std::uint64_t total_users() const;
  std::uint64_t distinct_count() const;
};

CountOfCounts count_of_counts(const RankFrequencyTable& table);
CountOfCounts count_of_counts(std::span<const std::uint64_t> counts);

struct IngestSummary {
  std::uint64_t parsed_records = 0;
  std::uint64_t malformed_lines = 0;
  std::uint64_t kept_records = 0;
};

// parse_corpus + cleanup + build_table. Password-per-line input is folded
// straight into counts since every line is its own user.
RankFrequencyTable ingest_stream(std::istream& in, CorpusFormat format,
                                 std::uint64_t tie_break_seed,
                                 IngestSummary* summary = nullptr);

}  // namespace pwdist

#endif  // PWDIST_INGEST_H_
