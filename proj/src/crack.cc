#include "pwdist/crack.h"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "pwdist/common.h"
#include "pwdist/tsv.h"

namespace pwdist {

std::uint64_t HashScheme::salt_space() const {
  std::uint64_t space = 1;
  for (std::size_t i = 0; i < salt_length; ++i) space *= salt_alphabet.size();
  return space;
}

std::uint64_t trunc8_mix64(std::string_view salt, std::string_view password) {
  return fmix64(fnv1a64(password, fnv1a64(salt)));
}

namespace {

constexpr std::string_view kAlnum =
    "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";

std::string big_endian_bytes(std::uint64_t value) {
  std::string out(8, '\0');
  for (int i = 7; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<char>(value & 0xff);
    value >>= 8;
  }
  return out;
}

// Salt number `index` written in base |alphabet|.
std::string salt_from_index(const HashScheme& scheme, std::uint64_t index) {
  std::string salt(scheme.salt_length, '\0');
  const std::uint64_t base = scheme.salt_alphabet.size();
  for (std::size_t i = scheme.salt_length; i-- > 0;) {
    salt[i] = scheme.salt_alphabet[index % base];
    index /= base;
  }
  return salt;
}

}  // namespace

HashScheme builtin_scheme(std::string_view tag) {
  if (tag == "trunc8-mix64") {
    HashScheme scheme;
    scheme.name = "trunc8-mix64";
    scheme.truncate_len = 8;
    scheme.salt_alphabet = std::string(kAlnum);
    scheme.salt_length = 2;
    scheme.hash = [](std::string_view salt, std::string_view password) {
      return big_endian_bytes(trunc8_mix64(salt, password));
    };
    return scheme;
  }
  throw ArgumentError("unknown hash scheme: " + std::string(tag));
}

std::vector<std::string> generate_salts(const HashScheme& scheme, std::uint64_t salt_seed,
                                        std::uint64_t salt_count) {
  const std::uint64_t space = scheme.salt_space();
  if (salt_count < 1) throw ArgumentError("salt_count must be >= 1");
  if (salt_count > space) {
    throw ArgumentError("salt_count exceeds the scheme's " + std::to_string(space) + " salts");
  }
  // Partial Fisher-Yates over salt indices.
  std::vector<std::uint64_t> indices(space);
  std::iota(indices.begin(), indices.end(), 0);
  Rng rng(derive_seed(salt_seed, 0));
  std::vector<std::string> salts;
  salts.reserve(salt_count);
  for (std::uint64_t i = 0; i < salt_count; ++i) {
    const auto j = i + rng.below(space - i);
    std::swap(indices[i], indices[j]);
    salts.push_back(salt_from_index(scheme, indices[i]));
  }
  return salts;
}

std::vector<HashedEntry> hash_corpus(std::span<const CredentialRecord> records,
                                     const HashScheme& scheme, std::uint64_t salt_seed,
                                     std::uint64_t salt_count) {
  const auto salts = generate_salts(scheme, salt_seed, salt_count);
  Rng rng(derive_seed(salt_seed, 1));
  std::vector<HashedEntry> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    const auto& salt = salts[rng.below(salts.size())];
    out.push_back({r.user, salt, scheme.digest(salt, r.password)});
  }
  return out;
}

namespace {

struct SaltBucket {
  std::string salt;
  std::unordered_map<std::string, std::vector<std::size_t>> by_digest;
};

}  // namespace

CrackReport crack(std::span<const HashedEntry> entries, const GuessOrdering& ordering,
                  const HashScheme& scheme) {
  if (entries.empty()) throw ArgumentError("no hashed entries to crack");

  std::vector<SaltBucket> buckets;
  {
    std::unordered_map<std::string_view, std::size_t> bucket_of;
    std::vector<std::string> salts;
    for (const auto& e : entries) {
      if (bucket_of.emplace(e.salt, 0).second) salts.push_back(e.salt);
    }
    std::sort(salts.begin(), salts.end());
    buckets.resize(salts.size());
    for (std::size_t i = 0; i < salts.size(); ++i) buckets[i].salt = salts[i];
    for (std::size_t i = 0; i < salts.size(); ++i) bucket_of[buckets[i].salt] = i;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      buckets[bucket_of[entries[i].salt]].by_digest[entries[i].digest].push_back(i);
    }
  }

  CrackReport report;
  std::vector<std::uint64_t> users_after, distinct_after;
  users_after.reserve(ordering.size());
  distinct_after.reserve(ordering.size());
  std::unordered_set<std::string> tried;
  std::uint64_t users = 0, distinct = 0;

  for (const auto& guess : ordering.guesses()) {
    const std::string effective(scheme.effective(guess));
    if (tried.insert(effective).second) {
      bool hit = false;
      for (auto& bucket : buckets) {
        ++report.hash_evaluations;
        auto it = bucket.by_digest.find(scheme.hash(bucket.salt, effective));
        if (it == bucket.by_digest.end()) continue;
        for (std::size_t index : it->second) {
          report.cracked.push_back({entries[index].user, guess});
        }
        users += it->second.size();
        hit = true;
        bucket.by_digest.erase(it);
      }
      if (hit) ++distinct;
      std::erase_if(buckets, [](const SaltBucket& b) { return b.by_digest.empty(); });
    }
    users_after.push_back(users);
    distinct_after.push_back(distinct);
  }

  report.uncracked_count = entries.size() - users;
  report.curve_users = GuessCurve(CurveMetric::kUsers, entries.size());
  for (auto c : users_after) report.curve_users.push(c);
  report.curve_users.finish();
  report.curve_distinct =
      GuessCurve(CurveMetric::kDistinctPasswords, distinct + report.uncracked_count);
  for (auto c : distinct_after) report.curve_distinct.push(c);
  report.curve_distinct.finish();
  return report;
}

void write_hashes_tsv(std::ostream& out, std::span<const HashedEntry> entries) {
  out << "user\tsalt-hex\tdigest-hex\n";
  for (const auto& e : entries) {
    out << tsv_escape(e.user) << '\t' << to_hex(e.salt) << '\t' << to_hex(e.digest) << '\n';
  }
}

std::vector<HashedEntry> read_hashes_tsv(std::istream& in) {
  std::vector<HashedEntry> entries;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "user\tsalt-hex\tdigest-hex") throw InputError("missing hash corpus header");
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw InputError("hash corpus line " + std::to_string(line_no) + " needs 3 fields");
    }
    entries.push_back({tsv_unescape(fields[0]), from_hex(fields[1]), from_hex(fields[2])});
  }
  if (in.bad()) throw InputError("unreadable hash corpus stream");
  if (line_no == 0) throw InputError("empty hash corpus file");
  return entries;
}

void write_cracked_tsv(std::ostream& out, std::span<const CrackedUser> cracked) {
  out << "user\tpassword\n";
  for (const auto& c : cracked) {
    out << tsv_escape(c.user) << '\t' << tsv_escape(c.password) << '\n';
  }
}

}  // namespace pwdist
