// Offline cracking harness: salted hash corpora and guess-ordering attacks
// against them.

#ifndef PWDIST_CRACK_H_
#define PWDIST_CRACK_H_

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pwdist/crossguess.h"
#include "pwdist/ingest.h"

namespace pwdist {

struct HashedEntry {
  std::string user;
  std::string salt;
  std::string digest;

  bool operator==(const HashedEntry&) const = default;
};

struct HashScheme {
  std::string name;
  std::optional<std::size_t> truncate_len;
  std::string salt_alphabet;
  std::size_t salt_length = 0;
  // Receives the already-truncated password.
  std::function<std::string(std::string_view salt, std::string_view password)> hash;

  // The password as the scheme sees it.
  std::string_view effective(std::string_view password) const {
    return truncate_len ? password.substr(0, *truncate_len) : password;
  }
  std::string digest(std::string_view salt, std::string_view password) const {
    return hash(salt, effective(password));
  }
  std::uint64_t salt_space() const;
};

// trunc8-mix64: passwords truncated to 8 bytes; salts are 2 characters from
// [0-9A-Za-z] (3844 salts); the digest is the big-endian 8-byte value of
//   fmix64(fnv1a64(password, fnv1a64(salt)))
// where fnv1a64 is 64-bit FNV-1a (offset 0xcbf29ce484222325, prime
// 0x100000001b3) and fmix64 the MurmurHash3 finalizer. Hashing an empty
// salt and password gives 0xefd01f60ba992926.
std::uint64_t trunc8_mix64(std::string_view salt, std::string_view password);

// Throws ArgumentError for unknown tags.
HashScheme builtin_scheme(std::string_view tag);

// salt_count distinct salts chosen from the scheme's salt space.
std::vector<std::string> generate_salts(const HashScheme& scheme, std::uint64_t salt_seed,
                                        std::uint64_t salt_count);

// Each record gets a salt drawn uniformly from generate_salts(...).
std::vector<HashedEntry> hash_corpus(std::span<const CredentialRecord> records,
                                     const HashScheme& scheme, std::uint64_t salt_seed,
                                     std::uint64_t salt_count);

struct CrackedUser {
  std::string user;
  std::string password;

  bool operator==(const CrackedUser&) const = default;
};

struct CrackReport {
  GuessCurve curve_users{CurveMetric::kUsers, 1};
  // Denominator: distinct passwords cracked plus every uncracked user, i.e.
  // the count if all uncracked passwords were unique.
  GuessCurve curve_distinct{CurveMetric::kDistinctPasswords, 1};
  std::vector<CrackedUser> cracked;
  std::uint64_t uncracked_count = 0;
  std::uint64_t hash_evaluations = 0;
};

// Tries the guesses in order. Guesses that truncate to something already
// tried cost nothing and gain nothing. Each guess is hashed once per salt
// that still has uncracked entries. Throws ArgumentError on an empty corpus.
CrackReport crack(std::span<const HashedEntry> entries, const GuessOrdering& ordering,
                  const HashScheme& scheme);

// Header `user\tsalt-hex\tdigest-hex`.
void write_hashes_tsv(std::ostream& out, std::span<const HashedEntry> entries);
std::vector<HashedEntry> read_hashes_tsv(std::istream& in);
// Header `user\tpassword`.
void write_cracked_tsv(std::ostream& out, std::span<const CrackedUser> cracked);

}  // namespace pwdist

#endif  // PWDIST_CRACK_H_
