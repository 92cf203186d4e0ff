// Metropolis-Hastings gate for password selection.
//
// Each new user is compared against a password x drawn uniformly from every
// proposal seen so far. The user's proposal x' is accepted when
//   u * P(x) <= F(x) * P(x'),   u ~ Uniform[0, F(x')],
// where F counts how often each password has been proposed (F(x') is read
// before it is incremented) and P is the target weight. With constant
// weights this is the plain rule u <= F(x), which pushes the accepted
// passwords towards a uniform distribution. x and F(x) stay fixed while the
// same user is re-asked.

#ifndef PWDIST_MH_UNIFORM_H_
#define PWDIST_MH_UNIFORM_H_

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "pwdist/common.h"
#include "pwdist/ingest.h"
#include "pwdist/stats.h"

namespace pwdist {

class CountMinSketch {
 public:
  // Row seeds are derived from master_seed.
  CountMinSketch(std::size_t width, std::size_t depth, std::uint64_t master_seed);

  void increment(std::string_view key);
  // Minimum over rows; never below the true count.
  std::uint64_t query(std::string_view key) const;

  std::size_t width() const { return width_; }
  std::size_t depth() const { return seeds_.size(); }
  const std::vector<std::uint64_t>& seeds() const { return seeds_; }

 private:
  std::size_t cell(std::size_t row, std::uint64_t key_hash) const;

  std::size_t width_;
  std::vector<std::uint64_t> seeds_;
  std::vector<std::uint64_t> cells_;
};

enum class StoreBackend { kExact, kCountMin };

std::string_view store_backend_name(StoreBackend backend);
StoreBackend parse_store_backend(std::string_view tag);

inline constexpr std::size_t kDefaultSketchWidth = std::size_t{1} << 18;
inline constexpr std::size_t kDefaultSketchDepth = 4;

struct StoreConfig {
  StoreBackend backend = StoreBackend::kExact;
  std::size_t width = kDefaultSketchWidth;
  std::size_t depth = kDefaultSketchDepth;
  std::uint64_t seed = kDefaultSeed;
};

// F(.): proposal counts, exact or sketched. Single writer.
class FrequencyStore {
 public:
  static FrequencyStore exact();
  static FrequencyStore count_min(std::size_t width, std::size_t depth, std::uint64_t seed);
  static FrequencyStore from_config(const StoreConfig& config);

  StoreBackend backend() const;
  void increment(std::string_view key);
  std::uint64_t query(std::string_view key) const;
  std::uint64_t total() const { return total_; }

 private:
  using Exact = std::unordered_map<std::string, std::uint64_t>;
  explicit FrequencyStore(std::variant<Exact, CountMinSketch> impl) : impl_(std::move(impl)) {}

  std::variant<Exact, CountMinSketch> impl_;
  std::uint64_t total_ = 0;
};

// P(.) up to normalization. 0 bans a password, values in (0, 1) soft-ban it.
class TargetWeight {
 public:
  TargetWeight() = default;  // constant 1
  TargetWeight(std::unordered_set<std::string> banned,
               std::unordered_map<std::string, double> soft);

  double operator()(std::string_view password) const;

 private:
  std::unordered_set<std::string> banned_;
  std::unordered_map<std::string, double> soft_;
};

// Banned list: one password per line. Soft-ban list: password TAB weight.
std::unordered_set<std::string> read_ban_list(std::istream& in);
std::unordered_map<std::string, double> read_soft_ban_list(std::istream& in);

// What step 1 draws the comparison password from: every distinct password
// proposed so far, or the multiset of all proposals.
enum class HistoryMode { kDistinct, kMultiset };

std::string_view history_mode_name(HistoryMode mode);
HistoryMode parse_history_mode(std::string_view tag);

// Every proposal ever submitted. Passwords are interned once; the multiset
// mode also keeps a log of proposal ids.
class SeenHistory {
 public:
  explicit SeenHistory(HistoryMode mode = HistoryMode::kDistinct) : mode_(mode) {}

  void record(std::string_view password);
  // None when nothing has been seen yet.
  std::optional<std::string_view> sample(Rng& rng) const;
  std::uint64_t size() const { return recorded_; }
  std::size_t distinct_size() const { return pool_.size(); }
  HistoryMode mode() const { return mode_; }

 private:
  HistoryMode mode_;
  std::uint64_t recorded_ = 0;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> pool_;
  std::vector<std::uint32_t> log_;
};

struct SessionOutcome {
  std::string accepted_password;
  std::uint64_t asks = 1;
  std::string first_proposal;  // what the user would have used unchallenged
};

inline constexpr std::uint64_t kDefaultRetryCap = 100;

using ProposalStream = std::function<std::string_view()>;

// One enrolment. Throws BannedExhaustionError once retry_cap proposals of
// the session had zero target weight.
SessionOutcome mh_session(FrequencyStore& store, SeenHistory& history,
                          const TargetWeight& weights, const ProposalStream& proposals,
                          Rng& rng, std::uint64_t retry_cap = kDefaultRetryCap);

// Proposal distribution Q with a label per rank.
struct ProposalSource {
  ProbabilityModel model;
  std::vector<std::string> labels;
};

// Labels "z1".."zN".
ProposalSource zipf_source(double s, std::uint64_t n);
ProposalSource table_source(const RankFrequencyTable& table);

struct SimulationReport {
  RankFrequencyTable accepted_table;
  RankFrequencyTable free_table;  // first proposal of every user
  std::uint64_t n_users = 0;
  double mean_asks = 0.0;
  double var_asks = 0.0;  // population variance
  std::uint64_t rejected_total = 0;
};

// Sequential by construction: F evolves user by user.
SimulationReport simulate(const ProposalSource& source, std::uint64_t n_users,
                          const StoreConfig& store_config, const TargetWeight& weights,
                          std::uint64_t seed, std::uint64_t retry_cap = kDefaultRetryCap,
                          HistoryMode history_mode = HistoryMode::kDistinct);

// Header `mean_asks\tvar_asks\trejected_total`.
void write_simulation_summary_tsv(std::ostream& out, const SimulationReport& report);

}  // namespace pwdist

#endif  // PWDIST_MH_UNIFORM_H_
