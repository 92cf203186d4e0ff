// TSV serialization shared by every export.
//
// Free-text fields (passwords, user ids) are escaped so that arbitrary bytes
// round-trip: backslash -> "\\", TAB -> "\t", LF -> "\n", CR -> "\r".

#ifndef PWDIST_TSV_H_
#define PWDIST_TSV_H_

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pwdist/ingest.h"

namespace pwdist {

std::string tsv_escape(std::string_view field);
// Throws InputError on a dangling or unknown escape.
std::string tsv_unescape(std::string_view field);

// Splits a line on TAB without unescaping.
std::vector<std::string_view> split_tabs(std::string_view line);

// Header `rank\tcount\tpassword`, then ranks 1..distinct_count. When
// max_ranks is non-zero only the first max_ranks rows are written.
void write_table_tsv(std::ostream& out, const RankFrequencyTable& table,
                     std::uint64_t max_ranks = 0);
RankFrequencyTable read_table_tsv(std::istream& in, std::uint64_t tie_break_seed = 0);

// Header `k\tn_k`.
void write_count_of_counts_tsv(std::ostream& out, const CountOfCounts& counts);

}  // namespace pwdist

#endif  // PWDIST_TSV_H_
