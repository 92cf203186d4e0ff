#include "pwdist/ingest.h"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "pwdist/common.h"

namespace pwdist {

CorpusFormat parse_corpus_format(std::string_view tag) {
  if (tag == "user-tab-password") return CorpusFormat::kUserTabPassword;
  if (tag == "password-per-line") return CorpusFormat::kPasswordPerLine;
  throw ArgumentError("unknown corpus format: " + std::string(tag));
}

std::string_view corpus_format_name(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::kUserTabPassword:
      return "user-tab-password";
    case CorpusFormat::kPasswordPerLine:
      return "password-per-line";
  }
  return "unknown";
}

namespace {

// Calls fn(line, line_no) for each LF-terminated line, CR stripped.
template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::uint64_t line_no = 0;
  std::uint64_t offset = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::uint64_t consumed = line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fn(line, line_no);
    offset += consumed;
  }
  if (in.bad()) throw InputError("unreadable corpus stream", offset);
}

}  // namespace

ParseResult parse_corpus(std::istream& in, CorpusFormat format) {
  ParseResult result;
  for_each_line(in, [&](std::string& line, std::uint64_t line_no) {
    if (format == CorpusFormat::kPasswordPerLine) {
      result.records.push_back({"u" + std::to_string(line_no), std::move(line), line_no});
      return;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      ++result.malformed_lines;
      return;
    }
    result.records.push_back({line.substr(0, tab), line.substr(tab + 1), line_no});
  });
  return result;
}

bool is_blank_password(std::string_view password) {
  return std::all_of(password.begin(), password.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r';
  });
}

std::vector<CredentialRecord> cleanup(std::span<const CredentialRecord> records) {
  // Index of the kept record per user; later line numbers win.
  std::unordered_map<std::string_view, std::size_t> last;
  last.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (is_blank_password(r.password)) continue;
    auto [it, inserted] = last.try_emplace(r.user, i);
    if (!inserted && records[it->second].line_no <= r.line_no) it->second = i;
  }
  std::vector<std::size_t> keep;
  keep.reserve(last.size());
  for (const auto& [user, index] : last) keep.push_back(index);
  std::sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) {
    if (records[a].line_no != records[b].line_no) {
      return records[a].line_no < records[b].line_no;
    }
    return a < b;
  });
  std::vector<CredentialRecord> out;
  out.reserve(keep.size());
  for (std::size_t i : keep) out.push_back(records[i]);
  return out;
}

RankFrequencyTable::RankFrequencyTable(std::vector<RankEntry> entries,
                                       std::uint64_t tie_break_seed)
    : entries_(std::move(entries)), tie_break_seed_(tie_break_seed) {
  if (entries_.empty()) throw InputError("rank-frequency table must be non-empty");
  std::unordered_map<std::string_view, bool> seen;
  seen.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.count == 0) throw InputError("rank-frequency counts must be positive");
    if (i > 0 && e.count > entries_[i - 1].count) {
      throw InputError("rank-frequency counts must be non-increasing");
    }
    if (!seen.emplace(e.password, true).second) {
      throw InputError("duplicate password in rank-frequency table");
    }
    total_users_ += e.count;
  }
}

std::vector<std::uint64_t> RankFrequencyTable::counts() const {
  std::vector<std::uint64_t> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.count);
  return out;
}

RankFrequencyTable rank_counts(std::vector<RankEntry> counted, std::uint64_t tie_break_seed) {
  const std::uint64_t salt = splitmix64(tie_break_seed);
  std::vector<std::pair<std::uint64_t, std::size_t>> keys;
  keys.reserve(counted.size());
  for (std::size_t i = 0; i < counted.size(); ++i) {
    keys.emplace_back(fmix64(fnv1a64(counted[i].password) ^ salt), i);
  }
  std::sort(keys.begin(), keys.end(), [&](const auto& a, const auto& b) {
    const auto& ea = counted[a.second];
    const auto& eb = counted[b.second];
    if (ea.count != eb.count) return ea.count > eb.count;
    if (a.first != b.first) return a.first < b.first;
    return ea.password < eb.password;
  });
  std::vector<RankEntry> sorted;
  sorted.reserve(counted.size());
  for (const auto& [key, index] : keys) sorted.push_back(std::move(counted[index]));
  return RankFrequencyTable(std::move(sorted), tie_break_seed);
}

RankFrequencyTable build_table(std::span<const CredentialRecord> records,
                               std::uint64_t tie_break_seed) {
  if (records.empty()) throw InputError("no records to build a table from");
  std::unordered_map<std::string_view, std::uint64_t> counts;
  for (const auto& r : records) ++counts[r.password];
  std::vector<RankEntry> counted;
  counted.reserve(counts.size());
  for (const auto& [password, count] : counts) {
    counted.push_back({std::string(password), count});
  }
  return rank_counts(std::move(counted), tie_break_seed);
}

RankFrequencyTable table_from_counts(std::span<const std::uint64_t> counts,
                                     std::uint64_t tie_break_seed) {
  std::vector<RankEntry> entries;
  entries.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    entries.push_back({"p" + std::to_string(i + 1), counts[i]});
  }
  return RankFrequencyTable(std::move(entries), tie_break_seed);
}

std::uint64_t CountOfCounts::total_users() const {
  std::uint64_t total = 0;
  for (const auto& p : pairs) total += p.k * p.n_k;
  return total;
}

std::uint64_t CountOfCounts::distinct_count() const {
  std::uint64_t total = 0;
  for (const auto& p : pairs) total += p.n_k;
  return total;
}

CountOfCounts count_of_counts(std::span<const std::uint64_t> counts) {
  std::vector<std::uint64_t> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());
  CountOfCounts out;
  for (std::uint64_t k : sorted) {
    if (!out.pairs.empty() && out.pairs.back().k == k) {
      ++out.pairs.back().n_k;
    } else {
      out.pairs.push_back({k, 1});
    }
  }
  return out;
}

CountOfCounts count_of_counts(const RankFrequencyTable& table) {
  return count_of_counts(table.counts());
}

RankFrequencyTable ingest_stream(std::istream& in, CorpusFormat format,
                                 std::uint64_t tie_break_seed, IngestSummary* summary) {
  IngestSummary local;
  if (format == CorpusFormat::kPasswordPerLine) {
    std::unordered_map<std::string, std::uint64_t> counts;
    for_each_line(in, [&](std::string& line, std::uint64_t) {
      ++local.parsed_records;
      if (is_blank_password(line)) return;
      ++local.kept_records;
      ++counts[line];
    });
    if (summary) *summary = local;
    if (counts.empty()) throw InputError("corpus contains no usable passwords");
    std::vector<RankEntry> counted;
    counted.reserve(counts.size());
    for (auto& [password, count] : counts) counted.push_back({password, count});
    return rank_counts(std::move(counted), tie_break_seed);
  }
  ParseResult parsed = parse_corpus(in, format);
  local.parsed_records = parsed.records.size();
  local.malformed_lines = parsed.malformed_lines;
  const auto cleaned = cleanup(parsed.records);
  local.kept_records = cleaned.size();
  if (summary) *summary = local;
  if (cleaned.empty()) throw InputError("corpus contains no usable passwords");
  return build_table(cleaned, tie_break_seed);
}

}  // namespace pwdist
