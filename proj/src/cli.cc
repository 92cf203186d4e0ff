#include "pwdist/cli.h"

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pwdist/common.h"
#include "pwdist/crack.h"
#include "pwdist/crossguess.h"
#include "pwdist/ingest.h"
#include "pwdist/mh_uniform.h"
#include "pwdist/stats.h"
#include "pwdist/tsv.h"
#include "pwdist/zipf_fit.h"

namespace pwdist {

namespace fs = std::filesystem;

namespace {

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("cannot initialise SHA-256");
  }
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw InputError("cannot read " + path.string());
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  return to_hex(std::string_view(reinterpret_cast<const char*>(md), len));
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

std::vector<std::string> read_word_list(const std::string& path) {
  auto in = open_input(path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  if (in.bad()) throw InputError("cannot read " + path);
  return words;
}

// Collects outputs and inputs of one run and writes manifest.json last.
class RunContext {
 public:
  RunContext(std::string command, std::vector<std::string> args, std::string out_dir)
      : command_(std::move(command)), args_(std::move(args)), out_dir_(std::move(out_dir)) {
    std::error_code ec;
    fs::create_directories(out_dir_, ec);
    if (ec) throw InputError("cannot create output directory " + out_dir_.string());
  }

  void add_input(const std::string& path) {
    inputs_.push_back({{"path", path}, {"sha256", sha256_file(path)}});
  }
  void add_seed(const std::string& name, std::uint64_t value) { seeds_[name] = value; }

  template <typename Writer>
  void write(const std::string& name, Writer&& writer) {
    const auto path = out_dir_ / name;
    std::ostringstream buffer;
    writer(buffer);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << buffer.str();
    if (!out) throw InputError("cannot write " + path.string());
    outputs_.push_back(path.string());
  }

  void finish() {
    nlohmann::ordered_json manifest;
    manifest["command"] = command_;
    manifest["arguments"] = args_;
    manifest["inputs"] = inputs_;
    manifest["seeds"] = seeds_;
    manifest["tool_version"] = kToolVersion;
    manifest["outputs"] = outputs_;
    const auto path = out_dir_ / "manifest.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << manifest.dump(2) << '\n';
    if (!out) throw InputError("cannot write " + path.string());
  }

 private:
  std::string command_;
  std::vector<std::string> args_;
  fs::path out_dir_;
  nlohmann::ordered_json inputs_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json seeds_ = nlohmann::ordered_json::object();
  std::vector<std::string> outputs_;
};

struct CommonOptions {
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir = ".";
  std::string format = "user-tab-password";
};

void add_common(CLI::App* cmd, CommonOptions& common, bool with_format) {
  cmd->add_option("--seed", common.seed, "Seed for every random choice")->capture_default_str();
  cmd->add_option("--out-dir", common.out_dir, "Directory for output files")->capture_default_str();
  if (with_format) {
    cmd->add_option("--format", common.format, "Corpus format")
        ->check(CLI::IsMember({"user-tab-password", "password-per-line"}))
        ->capture_default_str();
  }
}

RankFrequencyTable load_table(RunContext& run, const std::string& path, std::uint64_t seed) {
  run.add_input(path);
  auto in = open_input(path);
  return read_table_tsv(in, seed);
}

// ---- ingest ----------------------------------------------------------------

struct IngestOptions {
  std::string input;
  std::uint64_t max_ranks = 0;
};

void run_ingest(const CommonOptions& common, const IngestOptions& opt, RunContext& run) {
  run.add_input(opt.input);
  run.add_seed("tie_break_seed", common.seed);
  auto in = open_input(opt.input);
  IngestSummary summary;
  const auto table = ingest_stream(in, parse_corpus_format(common.format), common.seed, &summary);
  run.write("table.tsv", [&](std::ostream& out) { write_table_tsv(out, table, opt.max_ranks); });
  run.write("count_of_counts.tsv", [&](std::ostream& out) {
    write_count_of_counts_tsv(out, count_of_counts(table));
  });
  run.write("ingest_summary.tsv", [&](std::ostream& out) {
    out << "parsed_records\tmalformed_lines\tkept_records\ttotal_users\tdistinct_count\n"
        << summary.parsed_records << '\t' << summary.malformed_lines << '\t'
        << summary.kept_records << '\t' << table.total_users() << '\t'
        << table.distinct_count() << '\n';
  });
}

// ---- fit -------------------------------------------------------------------

struct FitOptions {
  std::string table;
  std::vector<std::string> methods{"ls-raw", "ls-binned", "nk-raw", "nk-binned", "mle"};
  std::uint64_t replicates = 100;
  unsigned threads = 0;
};

ZipfFit fit_with(FitMethod method, const RankFrequencyTable& table) {
  switch (method) {
    case FitMethod::kLsRaw: return ls_raw_rank(table);
    case FitMethod::kLsBinned: return ls_binned_rank(table);
    case FitMethod::kNkRaw: return ls_nk(count_of_counts(table), false);
    case FitMethod::kNkBinned: return ls_nk(count_of_counts(table), true);
    case FitMethod::kMle: return mle_truncated_zipf(table);
  }
  throw ArgumentError("unknown fit method");
}

void run_fit(const CommonOptions& common, const FitOptions& opt, RunContext& run,
             std::ostream& err) {
  const auto table = load_table(run, opt.table, common.seed);
  run.add_seed("bootstrap_seed", common.seed);
  std::vector<ZipfFit> fits;
  std::string last_error;
  for (const auto& tag : opt.methods) {
    const auto method = parse_fit_method(tag);
    try {
      auto fit = fit_with(method, table);
      if (method == FitMethod::kMle && opt.replicates > 0) {
        fit.p_value = bootstrap_p_value(table, fit, opt.replicates, common.seed, opt.threads);
      }
      if (fit.flat_slope) err << "warning\tfit\t" << tag << "\tflat slope, s reported as 0\n";
      if (fit.at_boundary) err << "warning\tfit\t" << tag << "\tlikelihood maximised at s = 0\n";
      fits.push_back(fit);
    } catch (const FitError& e) {
      err << "warning\tfit\t" << tag << '\t' << e.what() << '\n';
      last_error = e.what();
    }
  }
  if (fits.empty()) throw FitError("no fit method succeeded: " + last_error);
  run.write("fit.tsv", [&](std::ostream& out) { write_fit_report_tsv(out, fits); });
  run.write("binned_rank.tsv",
            [&](std::ostream& out) { write_binned_tsv(out, bin_dyadic_rank(table)); });
  run.write("binned_nk.tsv", [&](std::ostream& out) {
    write_binned_tsv(out, bin_dyadic_k(count_of_counts(table)));
  });
}

// ---- stats -----------------------------------------------------------------

struct StatsOptions {
  std::string table;
  double alpha = kDefaultAlpha;
  std::string fit_method = "ls-binned";
  std::optional<double> s;
};

void run_stats(const CommonOptions& common, const StatsOptions& opt, RunContext& run) {
  const auto table = load_table(run, opt.table, common.seed);
  ZipfFit fit;
  if (opt.s) {
    if (*opt.s < 0.0) throw ArgumentError("--s must be >= 0");
    fit.s = *opt.s;
    fit.method = FitMethod::kMle;
    fit.truncation_n = table.distinct_count();
  } else {
    fit = fit_with(parse_fit_method(opt.fit_method), table);
  }
  const auto rows = stats_report(table, fit, opt.alpha);
  run.write("stats.tsv", [&](std::ostream& out) { write_stats_tsv(out, rows); });
  run.write("stats_fit.tsv", [&](std::ostream& out) {
    if (opt.s) {
      out << "method\ts\tslope_m\tstderr\tp_value\tN\n"
          << "given\t" << format_double(fit.s) << "\tNA\tNA\tNA\t" << fit.truncation_n << '\n';
    } else {
      write_fit_report_tsv(out, std::span<const ZipfFit>(&fit, 1));
    }
  });
}

// ---- curve -----------------------------------------------------------------

struct CurveOptions {
  std::string target;
  std::string reference;
  std::string dictionary;
  std::string metric = "both";
  std::size_t truncate = 0;
  bool log_spaced = false;
};

std::vector<CurveMetric> metrics_for(const std::string& tag) {
  if (tag == "both") return {CurveMetric::kUsers, CurveMetric::kDistinctPasswords};
  return {parse_curve_metric(tag)};
}

std::vector<std::string> truncate_words(std::vector<std::string> words, std::optional<std::size_t> len) {
  if (len) {
    for (auto& w : words) w.resize(std::min(w.size(), *len));
  }
  return words;
}

void run_curve(const CommonOptions& common, const CurveOptions& opt, RunContext& run) {
  auto target = load_table(run, opt.target, common.seed);
  run.add_seed("tie_break_seed", common.seed);
  const std::optional<std::size_t> trunc =
      opt.truncate > 0 ? std::optional<std::size_t>(opt.truncate) : std::nullopt;
  if (trunc) target = truncate_reaggregate(target, *trunc, common.seed);

  std::optional<GuessOrdering> ordering;
  if (!opt.reference.empty()) {
    auto reference = load_table(run, opt.reference, common.seed);
    if (trunc) reference = truncate_reaggregate(reference, *trunc, common.seed);
    ordering = GuessOrdering::from_table(reference, opt.reference);
  } else if (!opt.dictionary.empty()) {
    run.add_input(opt.dictionary);
    ordering = dictionary_ordering(truncate_words(read_word_list(opt.dictionary), trunc),
                                   opt.dictionary);
  }

  for (auto metric : metrics_for(opt.metric)) {
    const auto curve = ordering ? cross_curve(*ordering, target, metric) : self_curve(target, metric);
    run.write("curve_" + std::string(curve_metric_name(metric)) + ".tsv",
              [&](std::ostream& out) { write_curve_tsv(out, curve, opt.log_spaced); });
  }
}

// ---- crack -----------------------------------------------------------------

struct CrackOptions {
  std::string hashes;
  std::string corpus;
  std::uint64_t salt_count = 3844;
  std::string reference;
  std::string dictionary;
  std::string scheme = "trunc8-mix64";
  bool log_spaced = false;
};

void run_crack(const CommonOptions& common, const CrackOptions& opt, RunContext& run,
               std::ostream& err) {
  const auto scheme = builtin_scheme(opt.scheme);
  std::vector<HashedEntry> entries;
  if (!opt.hashes.empty()) {
    run.add_input(opt.hashes);
    auto in = open_input(opt.hashes);
    entries = read_hashes_tsv(in);
  } else {
    run.add_input(opt.corpus);
    run.add_seed("salt_seed", common.seed);
    auto in = open_input(opt.corpus);
    const auto parsed = parse_corpus(in, parse_corpus_format(common.format));
    const auto records = cleanup(parsed.records);
    if (records.empty()) throw InputError("corpus contains no usable passwords");
    entries = hash_corpus(records, scheme, common.seed, opt.salt_count);
    run.write("hashes.tsv", [&](std::ostream& out) { write_hashes_tsv(out, entries); });
  }

  GuessOrdering ordering;
  if (!opt.reference.empty()) {
    auto reference = load_table(run, opt.reference, common.seed);
    if (scheme.truncate_len) reference = truncate_reaggregate(reference, *scheme.truncate_len, common.seed);
    ordering = GuessOrdering::from_table(reference, opt.reference);
  } else {
    run.add_input(opt.dictionary);
    ordering = dictionary_ordering(
        truncate_words(read_word_list(opt.dictionary), scheme.truncate_len), opt.dictionary);
  }
  run.add_seed("tie_break_seed", common.seed);

  const auto started = std::chrono::steady_clock::now();
  const auto report = crack(entries, ordering, scheme);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  err << "info\tcrack\thash_evaluations=" << report.hash_evaluations
      << "\tseconds=" << elapsed.count() << '\n';

  run.write("crack_users.tsv",
            [&](std::ostream& out) { write_curve_tsv(out, report.curve_users, opt.log_spaced); });
  run.write("crack_distinct.tsv", [&](std::ostream& out) {
    write_curve_tsv(out, report.curve_distinct, opt.log_spaced);
  });
  run.write("cracked.tsv", [&](std::ostream& out) { write_cracked_tsv(out, report.cracked); });
  run.write("crack_summary.tsv", [&](std::ostream& out) {
    out << "entries\tcracked\tuncracked\tdistinct_cracked\tdistinct_upper_bound\thash_evaluations\n"
        << entries.size() << '\t' << report.cracked.size() << '\t' << report.uncracked_count
        << '\t' << report.curve_distinct.final_value() << '\t'
        << report.curve_distinct.denominator() << '\t' << report.hash_evaluations << '\n';
  });
}

// ---- mh-sim ----------------------------------------------------------------

struct SimOptions {
  std::string config;
  std::optional<std::uint64_t> users;
  std::optional<std::string> backend;
};

struct SimConfig {
  std::string source = "zipf:0.78:100000";
  std::uint64_t n_users = 100000;
  StoreConfig store;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t retry_cap = kDefaultRetryCap;
  HistoryMode history = HistoryMode::kDistinct;
  std::string ban_list;
  std::string soft_ban_list;
};

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("bad value for " + key + ": " + text);
  }
  return value;
}

SimConfig read_sim_config(const std::string& path) {
  auto in = open_input(path);
  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    return fs::path(p).is_absolute() || base.empty() ? p : (base / p).string();
  };
  SimConfig config;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("config line " + std::to_string(line_no) + " is not key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "source") {
      config.source = value;
    } else if (key == "n_users") {
      config.n_users = parse_number<std::uint64_t>(key, value);
    } else if (key == "backend") {
      config.store.backend = parse_store_backend(value);
    } else if (key == "w") {
      config.store.width = parse_number<std::size_t>(key, value);
    } else if (key == "d") {
      config.store.depth = parse_number<std::size_t>(key, value);
    } else if (key == "seed") {
      config.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "retry_cap") {
      config.retry_cap = parse_number<std::uint64_t>(key, value);
    } else if (key == "history") {
      config.history = parse_history_mode(value);
    } else if (key == "ban_list") {
      config.ban_list = resolve(value);
    } else if (key == "soft_ban_list") {
      config.soft_ban_list = resolve(value);
    } else {
      throw InputError("unknown config key: " + key);
    }
  }
  if (!config.source.starts_with("table:") || config.source.size() <= 6) return config;
  config.source = "table:" + resolve(config.source.substr(6));
  return config;
}

ProposalSource make_source(const std::string& spec, RunContext& run, std::uint64_t seed) {
  const auto parts = [&] {
    std::vector<std::string> out;
    std::string part;
    std::istringstream ss(spec);
    while (std::getline(ss, part, ':')) out.push_back(part);
    return out;
  }();
  if (parts.size() == 3 && parts[0] == "zipf") {
    return zipf_source(parse_number<double>("source", parts[1]),
                       parse_number<std::uint64_t>("source", parts[2]));
  }
  if (parts.size() == 2 && parts[0] == "uniform") {
    const auto n = parse_number<std::uint64_t>("source", parts[1]);
    return {uniform_model(n), zipf_source(0.0, n).labels};
  }
  if (spec.starts_with("table:")) {
    return table_source(load_table(run, spec.substr(6), seed));
  }
  throw InputError("source must be zipf:S:N, uniform:N or table:PATH, got " + spec);
}

void run_mh_sim(const SimOptions& opt, std::optional<std::uint64_t> seed_override,
                RunContext& run) {
  run.add_input(opt.config);
  auto config = read_sim_config(opt.config);
  if (seed_override) config.seed = *seed_override;
  if (opt.users) config.n_users = *opt.users;
  if (opt.backend) config.store.backend = parse_store_backend(*opt.backend);
  config.store.seed = derive_seed(config.seed, 2);
  run.add_seed("seed", config.seed);

  const auto source = make_source(config.source, run, config.seed);
  std::unordered_set<std::string> banned;
  std::unordered_map<std::string, double> soft;
  if (!config.ban_list.empty()) {
    run.add_input(config.ban_list);
    auto in = open_input(config.ban_list);
    banned = read_ban_list(in);
  }
  if (!config.soft_ban_list.empty()) {
    run.add_input(config.soft_ban_list);
    auto in = open_input(config.soft_ban_list);
    soft = read_soft_ban_list(in);
  }
  const TargetWeight weights(std::move(banned), std::move(soft));
  const auto report =
      simulate(source, config.n_users, config.store, weights, config.seed, config.retry_cap,
               config.history);
  run.write("accepted.tsv",
            [&](std::ostream& out) { write_table_tsv(out, report.accepted_table); });
  run.write("free.tsv", [&](std::ostream& out) { write_table_tsv(out, report.free_table); });
  run.write("mh_summary.tsv",
            [&](std::ostream& out) { write_simulation_summary_tsv(out, report); });
}

int exit_code_for(const std::exception& e, std::string& kind) {
  if (dynamic_cast<const ArgumentError*>(&e)) {
    kind = "usage";
    return kExitUsage;
  }
  if (dynamic_cast<const InputError*>(&e)) {
    kind = "input";
    return kExitInput;
  }
  if (dynamic_cast<const FitError*>(&e)) {
    kind = "fit";
    return kExitNumeric;
  }
  if (dynamic_cast<const NumericError*>(&e)) {
    kind = "numeric";
    return kExitNumeric;
  }
  if (dynamic_cast<const BannedExhaustionError*>(&e)) {
    kind = "banned-exhaustion";
    return kExitNumeric;
  }
  kind = "internal";
  return kExitInput;
}

std::string one_line(std::string text) {
  for (auto& c : text) {
    if (c == '\n' || c == '\t') c = ' ';
  }
  return text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Password-choice distribution toolkit", "pwdist"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CommonOptions common;
  std::optional<std::uint64_t> sim_seed;

  IngestOptions ingest_opt;
  auto* ingest = app.add_subcommand("ingest", "Corpus to rank-frequency table");
  ingest->add_option("--input", ingest_opt.input, "Corpus file")->required();
  ingest->add_option("--max-ranks", ingest_opt.max_ranks, "Write only the top N ranks (0 = all)");
  add_common(ingest, common, true);

  FitOptions fit_opt;
  auto* fit = app.add_subcommand("fit", "Fit the Zipf exponent");
  fit->add_option("--table", fit_opt.table, "Table TSV from ingest")->required();
  fit->add_option("--methods", fit_opt.methods, "Fit methods")
      ->check(CLI::IsMember({"ls-raw", "ls-binned", "nk-raw", "nk-binned", "mle"}))
      ->capture_default_str();
  fit->add_option("--replicates", fit_opt.replicates, "Bootstrap replicates (0 skips)")
      ->capture_default_str();
  fit->add_option("--threads", fit_opt.threads, "Bootstrap threads (0 = all cores)");
  add_common(fit, common, false);

  StatsOptions stats_opt;
  auto* stats = app.add_subcommand("stats", "Guesswork and entropy statistics");
  stats->add_option("--table", stats_opt.table, "Table TSV from ingest")->required();
  stats->add_option("--alpha", stats_opt.alpha, "Coverage for the alpha-guesswork")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  auto* s_opt = stats->add_option("--s", stats_opt.s, "Use this Zipf exponent");
  stats->add_option("--fit-method", stats_opt.fit_method, "Fit used for the Zipf model")
      ->check(CLI::IsMember({"ls-raw", "ls-binned", "nk-raw", "nk-binned", "mle"}))
      ->excludes(s_opt)
      ->capture_default_str();
  add_common(stats, common, false);

  CurveOptions curve_opt;
  auto* curve = app.add_subcommand("curve", "Guess curves C(t) and C(t||sigma)");
  curve->add_option("--target", curve_opt.target, "Table being guessed")->required();
  auto* ref = curve->add_option("--reference", curve_opt.reference, "Table giving the order");
  curve->add_option("--dictionary", curve_opt.dictionary, "Word list, guessed in byte order")
      ->excludes(ref);
  curve->add_option("--metric", curve_opt.metric, "users, distinct or both")
      ->check(CLI::IsMember({"users", "distinct", "both"}))
      ->capture_default_str();
  curve->add_option("--truncate", curve_opt.truncate, "Truncate passwords to N bytes first");
  curve->add_flag("--log-spaced", curve_opt.log_spaced, "Log-spaced rows instead of every t");
  add_common(curve, common, false);

  CrackOptions crack_opt;
  auto* crack_cmd = app.add_subcommand("crack", "Offline cracking experiment");
  auto* hashes = crack_cmd->add_option("--hashes", crack_opt.hashes, "Hash corpus TSV");
  auto* corpus = crack_cmd->add_option("--corpus", crack_opt.corpus, "Plain corpus to hash first");
  hashes->excludes(corpus);
  crack_cmd->add_option("--salt-count", crack_opt.salt_count, "Salts when hashing --corpus")
      ->capture_default_str();
  auto* cref = crack_cmd->add_option("--reference", crack_opt.reference, "Table giving the order");
  auto* cdict = crack_cmd->add_option("--dictionary", crack_opt.dictionary, "Word list");
  cref->excludes(cdict);
  crack_cmd->add_option("--scheme", crack_opt.scheme, "Hash scheme")
      ->check(CLI::IsMember({"trunc8-mix64"}))
      ->capture_default_str();
  crack_cmd->add_flag("--log-spaced", crack_opt.log_spaced, "Log-spaced curve rows");
  add_common(crack_cmd, common, true);

  SimOptions sim_opt;
  auto* sim = app.add_subcommand("mh-sim", "Metropolis-Hastings enrolment simulation");
  sim->add_option("--config", sim_opt.config, "key=value simulation config")->required();
  sim->add_option("--users", sim_opt.users, "Override n_users");
  sim->add_option("--backend", sim_opt.backend, "Override the store backend")
      ->check(CLI::IsMember({"exact", "count-min"}));
  sim->add_option("--seed", sim_seed, "Override the config seed");
  sim->add_option("--out-dir", common.out_dir, "Directory for output files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (crack_cmd->parsed()) {
      if (crack_opt.hashes.empty() == crack_opt.corpus.empty()) {
        throw ArgumentError("crack needs exactly one of --hashes or --corpus");
      }
      if (crack_opt.reference.empty() == crack_opt.dictionary.empty()) {
        throw ArgumentError("crack needs exactly one of --reference or --dictionary");
      }
    }
    auto* chosen = app.get_subcommands().front();
    RunContext run(chosen->get_name(), std::vector<std::string>(argv + 1, argv + argc),
                   common.out_dir);
    if (ingest->parsed()) run_ingest(common, ingest_opt, run);
    if (fit->parsed()) run_fit(common, fit_opt, run, err);
    if (stats->parsed()) run_stats(common, stats_opt, run);
    if (curve->parsed()) run_curve(common, curve_opt, run);
    if (crack_cmd->parsed()) run_crack(common, crack_opt, run, err);
    if (sim->parsed()) run_mh_sim(sim_opt, sim_seed, run);
    run.finish();
  } catch (const std::exception& e) {
    std::string kind;
    const int code = exit_code_for(e, kind);
    err << "error\t" << kind << '\t' << one_line(e.what()) << '\n';
    return code;
  }
  return kExitOk;
}

}  // namespace pwdist
