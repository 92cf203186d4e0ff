#include "pwdist/tsv.h"

#include <charconv>

#include "pwdist/common.h"

namespace pwdist {

std::string tsv_escape(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (char c : field) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string tsv_unescape(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\') {
      out.push_back(field[i]);
      continue;
    }
    if (++i == field.size()) throw InputError("dangling escape in TSV field");
    switch (field[i]) {
      case '\\': out.push_back('\\'); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: throw InputError("unknown escape in TSV field");
    }
  }
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

void write_table_tsv(std::ostream& out, const RankFrequencyTable& table,
                     std::uint64_t max_ranks) {
  out << "rank\tcount\tpassword\n";
  std::uint64_t rank = 0;
  for (const auto& e : table.entries()) {
    if (max_ranks != 0 && rank == max_ranks) break;
    out << ++rank << '\t' << e.count << '\t' << tsv_escape(e.password) << '\n';
  }
}

namespace {

std::uint64_t parse_u64(std::string_view text, std::uint64_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("bad integer on table line " + std::to_string(line_no));
  }
  return value;
}

}  // namespace

RankFrequencyTable read_table_tsv(std::istream& in, std::uint64_t tie_break_seed) {
  std::string line;
  std::uint64_t line_no = 0;
  std::vector<RankEntry> entries;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "rank\tcount\tpassword") throw InputError("missing table header");
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw InputError("table line " + std::to_string(line_no) + " needs 3 fields");
    }
    const auto rank = parse_u64(fields[0], line_no);
    if (rank != entries.size() + 1) {
      throw InputError("table ranks must run 1..N (line " + std::to_string(line_no) + ")");
    }
    entries.push_back({tsv_unescape(fields[2]), parse_u64(fields[1], line_no)});
  }
  if (in.bad()) throw InputError("unreadable table stream");
  if (line_no == 0) throw InputError("empty table file");
  return RankFrequencyTable(std::move(entries), tie_break_seed);
}

void write_count_of_counts_tsv(std::ostream& out, const CountOfCounts& counts) {
  out << "k\tn_k\n";
  for (const auto& p : counts.pairs) out << p.k << '\t' << p.n_k << '\n';
}

}  // namespace pwdist
