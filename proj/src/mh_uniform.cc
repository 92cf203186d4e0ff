#include "pwdist/mh_uniform.h"

#include <charconv>
#include <cmath>

#include "pwdist/sampling.h"
#include "pwdist/tsv.h"

namespace pwdist {

CountMinSketch::CountMinSketch(std::size_t width, std::size_t depth, std::uint64_t master_seed)
    : width_(width) {
  if (width < 1 || depth < 1) throw ArgumentError("count-min sketch needs width, depth >= 1");
  seeds_.reserve(depth);
  for (std::size_t row = 0; row < depth; ++row) seeds_.push_back(derive_seed(master_seed, row));
  cells_.assign(width * depth, 0);
}

std::size_t CountMinSketch::cell(std::size_t row, std::uint64_t key_hash) const {
  return row * width_ + static_cast<std::size_t>(fmix64(key_hash ^ seeds_[row]) % width_);
}

void CountMinSketch::increment(std::string_view key) {
  const auto h = fnv1a64(key);
  for (std::size_t row = 0; row < seeds_.size(); ++row) ++cells_[cell(row, h)];
}

std::uint64_t CountMinSketch::query(std::string_view key) const {
  const auto h = fnv1a64(key);
  std::uint64_t best = UINT64_MAX;
  for (std::size_t row = 0; row < seeds_.size(); ++row) best = std::min(best, cells_[cell(row, h)]);
  return best;
}

std::string_view store_backend_name(StoreBackend backend) {
  return backend == StoreBackend::kExact ? "exact" : "count-min";
}

StoreBackend parse_store_backend(std::string_view tag) {
  if (tag == "exact") return StoreBackend::kExact;
  if (tag == "count-min") return StoreBackend::kCountMin;
  throw ArgumentError("unknown store backend: " + std::string(tag));
}

FrequencyStore FrequencyStore::exact() { return FrequencyStore(Exact{}); }

FrequencyStore FrequencyStore::count_min(std::size_t width, std::size_t depth,
                                         std::uint64_t seed) {
  return FrequencyStore(CountMinSketch(width, depth, seed));
}

FrequencyStore FrequencyStore::from_config(const StoreConfig& config) {
  return config.backend == StoreBackend::kExact
             ? exact()
             : count_min(config.width, config.depth, config.seed);
}

StoreBackend FrequencyStore::backend() const {
  return std::holds_alternative<Exact>(impl_) ? StoreBackend::kExact : StoreBackend::kCountMin;
}

void FrequencyStore::increment(std::string_view key) {
  ++total_;
  if (auto* exact = std::get_if<Exact>(&impl_)) {
    ++(*exact)[std::string(key)];
  } else {
    std::get<CountMinSketch>(impl_).increment(key);
  }
}

std::uint64_t FrequencyStore::query(std::string_view key) const {
  if (const auto* exact = std::get_if<Exact>(&impl_)) {
    auto it = exact->find(std::string(key));
    return it == exact->end() ? 0 : it->second;
  }
  return std::get<CountMinSketch>(impl_).query(key);
}

TargetWeight::TargetWeight(std::unordered_set<std::string> banned,
                           std::unordered_map<std::string, double> soft)
    : banned_(std::move(banned)), soft_(std::move(soft)) {
  for (const auto& [password, w] : soft_) {
    if (!(w >= 0.0 && w <= 1.0)) throw ArgumentError("soft-ban weight must lie in [0, 1]");
  }
}

double TargetWeight::operator()(std::string_view password) const {
  if (banned_.empty() && soft_.empty()) return 1.0;
  const std::string key(password);
  if (banned_.contains(key)) return 0.0;
  auto it = soft_.find(key);
  return it == soft_.end() ? 1.0 : it->second;
}

std::unordered_set<std::string> read_ban_list(std::istream& in) {
  std::unordered_set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.insert(tsv_unescape(line));
  }
  if (in.bad()) throw InputError("unreadable ban list");
  return out;
}

std::unordered_map<std::string, double> read_soft_ban_list(std::istream& in) {
  std::unordered_map<std::string, double> out;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    double w = 0.0;
    if (fields.size() != 2 ||
        std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), w).ec !=
            std::errc()) {
      throw InputError("soft-ban line " + std::to_string(line_no) + " must be password<TAB>weight");
    }
    if (!(w >= 0.0 && w <= 1.0)) {
      throw InputError("soft-ban line " + std::to_string(line_no) + " weight must lie in [0, 1]");
    }
    out[tsv_unescape(fields[0])] = w;
  }
  if (in.bad()) throw InputError("unreadable soft-ban list");
  return out;
}

std::string_view history_mode_name(HistoryMode mode) {
  return mode == HistoryMode::kDistinct ? "distinct" : "multiset";
}

HistoryMode parse_history_mode(std::string_view tag) {
  if (tag == "distinct") return HistoryMode::kDistinct;
  if (tag == "multiset") return HistoryMode::kMultiset;
  throw ArgumentError("unknown history mode: " + std::string(tag));
}

void SeenHistory::record(std::string_view password) {
  ++recorded_;
  auto [it, inserted] = ids_.try_emplace(std::string(password), 0);
  if (inserted) {
    it->second = static_cast<std::uint32_t>(pool_.size());
    pool_.push_back(it->first);
  }
  if (mode_ == HistoryMode::kMultiset) log_.push_back(it->second);
}

std::optional<std::string_view> SeenHistory::sample(Rng& rng) const {
  if (pool_.empty()) return std::nullopt;
  if (mode_ == HistoryMode::kDistinct) return pool_[rng.below(pool_.size())];
  return pool_[log_[rng.below(log_.size())]];
}

SessionOutcome mh_session(FrequencyStore& store, SeenHistory& history,
                          const TargetWeight& weights, const ProposalStream& proposals,
                          Rng& rng, std::uint64_t retry_cap) {
  // Step 1: the comparison password and its frequency, fixed for the session.
  const auto x = history.sample(rng);
  const double fx = x ? static_cast<double>(store.query(*x)) : 0.0;
  const double wx = x ? weights(*x) : 1.0;

  SessionOutcome outcome;
  outcome.asks = 0;
  std::uint64_t banned = 0;
  while (true) {
    const std::string_view proposal = proposals();
    if (outcome.asks++ == 0) outcome.first_proposal = std::string(proposal);
    history.record(proposal);
    const double fp = static_cast<double>(store.query(proposal));
    const double u = fp * rng.uniform01();
    store.increment(proposal);

    const double wp = weights(proposal);
    if (wp == 0.0) {
      if (++banned >= retry_cap) {
        throw BannedExhaustionError("every proposal in " + std::to_string(banned) +
                                    " asks was banned");
      }
      continue;
    }
    if (u * wx <= fx * wp) {
      outcome.accepted_password = std::string(proposal);
      return outcome;
    }
  }
}

ProposalSource zipf_source(double s, std::uint64_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::uint64_t i = 1; i <= n; ++i) labels.push_back("z" + std::to_string(i));
  return {zipf_model(s, n), std::move(labels)};
}

ProposalSource table_source(const RankFrequencyTable& table) {
  std::vector<std::string> labels;
  labels.reserve(table.distinct_count());
  for (const auto& e : table.entries()) labels.push_back(e.password);
  return {empirical_model(table), std::move(labels)};
}

namespace {

RankFrequencyTable tally(const std::vector<std::string>& passwords, std::uint64_t seed) {
  std::unordered_map<std::string_view, std::uint64_t> counts;
  for (const auto& p : passwords) ++counts[p];
  std::vector<RankEntry> counted;
  counted.reserve(counts.size());
  for (const auto& [p, c] : counts) counted.push_back({std::string(p), c});
  return rank_counts(std::move(counted), seed);
}

}  // namespace

SimulationReport simulate(const ProposalSource& source, std::uint64_t n_users,
                          const StoreConfig& store_config, const TargetWeight& weights,
                          std::uint64_t seed, std::uint64_t retry_cap,
                          HistoryMode history_mode) {
  if (n_users < 1) throw ArgumentError("simulation needs at least one user");
  if (source.labels.size() != source.model.size()) {
    throw ArgumentError("proposal source needs one label per probability");
  }
  const AliasTable q(source.model.probs());
  Rng proposal_rng(derive_seed(seed, 0));
  Rng gate_rng(derive_seed(seed, 1));
  const ProposalStream proposals = [&]() -> std::string_view {
    return source.labels[q.sample(proposal_rng)];
  };

  auto store = FrequencyStore::from_config(store_config);
  SeenHistory history(history_mode);
  std::vector<std::string> accepted, free_choice;
  accepted.reserve(n_users);
  free_choice.reserve(n_users);
  CompensatedSum asks_sum, asks_sq;
  std::uint64_t rejected = 0;
  for (std::uint64_t user = 0; user < n_users; ++user) {
    auto outcome = mh_session(store, history, weights, proposals, gate_rng, retry_cap);
    const double asks = static_cast<double>(outcome.asks);
    asks_sum += asks;
    asks_sq += asks * asks;
    rejected += outcome.asks - 1;
    accepted.push_back(std::move(outcome.accepted_password));
    free_choice.push_back(std::move(outcome.first_proposal));
  }
  const double n = static_cast<double>(n_users);
  const double mean = asks_sum.value() / n;
  return SimulationReport{
      .accepted_table = tally(accepted, seed),
      .free_table = tally(free_choice, seed),
      .n_users = n_users,
      .mean_asks = mean,
      .var_asks = std::max(0.0, asks_sq.value() / n - mean * mean),
      .rejected_total = rejected,
  };
}

void write_simulation_summary_tsv(std::ostream& out, const SimulationReport& report) {
  out << "mean_asks\tvar_asks\trejected_total\n"
      << format_double(report.mean_asks) << '\t' << format_double(report.var_asks) << '\t'
      << report.rejected_total << '\n';
}

}  // namespace pwdist
