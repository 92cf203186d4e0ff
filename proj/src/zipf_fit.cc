#include "pwdist/zipf_fit.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "pwdist/common.h"
#include "pwdist/sampling.h"

namespace pwdist {

std::string_view fit_method_name(FitMethod method) {
  switch (method) {
    case FitMethod::kLsRaw: return "ls-raw";
    case FitMethod::kLsBinned: return "ls-binned";
    case FitMethod::kNkRaw: return "nk-raw";
    case FitMethod::kNkBinned: return "nk-binned";
    case FitMethod::kMle: return "mle";
  }
  return "unknown";
}

FitMethod parse_fit_method(std::string_view tag) {
  for (auto m : {FitMethod::kLsRaw, FitMethod::kLsBinned, FitMethod::kNkRaw,
                 FitMethod::kNkBinned, FitMethod::kMle}) {
    if (fit_method_name(m) == tag) return m;
  }
  throw ArgumentError("unknown fit method: " + std::string(tag));
}

LineFit least_squares(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ArgumentError("least squares needs paired points");
  if (xs.size() < 2) throw FitError("least squares needs at least 2 points");
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double n = static_cast<double>(xs.size());
  const double mx = sx.value() / n;
  const double my = sy.value() / n;
  CompensatedSum sxx, sxy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    sxx += dx * dx;
    sxy += dx * (ys[i] - my);
  }
  if (!(sxx.value() > 0.0)) throw FitError("least squares needs distinct x values");
  const double slope = sxy.value() / sxx.value();
  return {slope, my - slope * mx};
}

BinnedSeries bin_dyadic(std::span<const double> values, BinRule rule) {
  BinnedSeries series;
  series.rule = rule;
  const std::uint64_t n = values.size();
  for (std::uint64_t lo = 1; lo <= n; lo *= 2) {
    const std::uint64_t hi = 2 * lo - 1;
    if (hi > n) break;  // incomplete final bin
    CompensatedSum sum;
    for (std::uint64_t i = lo; i <= hi; ++i) sum += values[i - 1];
    const double mean = sum.value() / static_cast<double>(hi - lo + 1);
    if (mean <= 0.0) continue;
    series.points.push_back(
        {std::sqrt(static_cast<double>(lo) * static_cast<double>(hi)), mean});
  }
  return series;
}

BinnedSeries bin_dyadic_rank(const RankFrequencyTable& table) {
  std::vector<double> values;
  values.reserve(table.distinct_count());
  for (const auto& e : table.entries()) values.push_back(static_cast<double>(e.count));
  return bin_dyadic(values, BinRule::kDyadicRank);
}

BinnedSeries bin_dyadic_k(const CountOfCounts& counts) {
  if (counts.pairs.empty()) return {{}, BinRule::kDyadicK};
  std::vector<double> values(counts.pairs.back().k, 0.0);
  for (const auto& p : counts.pairs) values[p.k - 1] = static_cast<double>(p.n_k);
  return bin_dyadic(values, BinRule::kDyadicK);
}

namespace {

constexpr double kFlatSlope = 1e-12;

std::vector<double> as_doubles(std::span<const std::uint64_t> counts) {
  return {counts.begin(), counts.end()};
}

LineFit fit_series(const BinnedSeries& series) {
  std::vector<double> xs, ys;
  for (const auto& p : series.points) {
    xs.push_back(std::log2(p.x));
    ys.push_back(std::log2(p.y));
  }
  return least_squares(xs, ys);
}

ZipfFit from_rank_slope(double slope, FitMethod method, std::uint64_t n) {
  if (slope > kFlatSlope) throw FitError("rank-frequency slope is positive");
  ZipfFit fit;
  fit.method = method;
  fit.truncation_n = n;
  if (std::abs(slope) <= kFlatSlope) {
    fit.s = 0.0;
    fit.flat_slope = true;
  } else {
    fit.s = -slope;
  }
  return fit;
}

}  // namespace

ZipfFit ls_raw_rank(std::span<const std::uint64_t> counts) {
  std::vector<double> xs, ys;
  xs.reserve(counts.size());
  ys.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    xs.push_back(std::log2(static_cast<double>(i + 1)));
    ys.push_back(std::log2(static_cast<double>(counts[i])));
  }
  return from_rank_slope(least_squares(xs, ys).slope, FitMethod::kLsRaw, counts.size());
}

ZipfFit ls_raw_rank(const RankFrequencyTable& table) { return ls_raw_rank(table.counts()); }

ZipfFit ls_binned_rank(std::span<const std::uint64_t> counts) {
  const auto values = as_doubles(counts);
  const auto series = bin_dyadic(values, BinRule::kDyadicRank);
  if (series.points.size() < 2) throw FitError("binned fit needs at least 2 complete bins");
  return from_rank_slope(fit_series(series).slope, FitMethod::kLsBinned, counts.size());
}

ZipfFit ls_binned_rank(const RankFrequencyTable& table) {
  return ls_binned_rank(table.counts());
}

ZipfFit ls_nk(const CountOfCounts& counts, bool binned) {
  LineFit line;
  if (binned) {
    const auto series = bin_dyadic_k(counts);
    if (series.points.size() < 2) throw FitError("binned n_k fit needs at least 2 complete bins");
    line = fit_series(series);
  } else {
    std::vector<double> xs, ys;
    for (const auto& p : counts.pairs) {
      xs.push_back(std::log2(static_cast<double>(p.k)));
      ys.push_back(std::log2(static_cast<double>(p.n_k)));
    }
    line = least_squares(xs, ys);
  }
  if (line.slope >= -1.0) throw FitError("slope incompatible with Zipf");
  ZipfFit fit;
  fit.method = binned ? FitMethod::kNkBinned : FitMethod::kNkRaw;
  fit.slope_m = line.slope;
  fit.s = 1.0 / (-line.slope - 1.0);
  fit.truncation_n = counts.distinct_count();
  return fit;
}

namespace {

// Sums over ranks of r^-s, r^-s ln r and r^-s ln^2 r.
struct ZetaMoments {
  double h0 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
};

class TruncatedZipfLikelihood {
 public:
  explicit TruncatedZipfLikelihood(std::span<const std::uint64_t> counts)
      : log_ranks_(counts.size()) {
    CompensatedSum weighted;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      log_ranks_[i] = std::log(static_cast<double>(i + 1));
      weighted += static_cast<double>(counts[i]) * log_ranks_[i];
      users_ += static_cast<double>(counts[i]);
    }
    sum_f_log_rank_ = weighted.value();
  }

  ZetaMoments moments(double s) const {
    CompensatedSum h0, h1, h2;
    for (double lr : log_ranks_) {
      const double w = std::exp(-s * lr);
      h0 += w;
      h1 += w * lr;
      h2 += w * lr * lr;
    }
    return {h0.value(), h1.value(), h2.value()};
  }

  double log_likelihood(double s) const {
    return -s * sum_f_log_rank_ - users_ * std::log(moments(s).h0);
  }

  double derivative(const ZetaMoments& m) const {
    return -sum_f_log_rank_ + users_ * m.h1 / m.h0;
  }

  // Observed information -L''(s) = U * Var_s(ln r).
  double information(const ZetaMoments& m) const {
    const double mean = m.h1 / m.h0;
    return users_ * std::max(0.0, m.h2 / m.h0 - mean * mean);
  }

  double sum_f_log_rank() const { return sum_f_log_rank_; }

 private:
  std::vector<double> log_ranks_;
  double sum_f_log_rank_ = 0.0;
  double users_ = 0.0;
};

constexpr double kInitialUpper = 10.0;
constexpr double kMaxUpper = 1000.0;
constexpr double kGoldenWidth = 1e-4;
constexpr double kNewtonTolerance = 1e-10;
constexpr int kMaxIterations = 200;

}  // namespace

double zipf_log_likelihood(std::span<const std::uint64_t> counts, double s) {
  return TruncatedZipfLikelihood(counts).log_likelihood(s);
}

ZipfFit mle_truncated_zipf(std::span<const std::uint64_t> counts) {
  std::uint64_t users = 0;
  for (auto c : counts) users += c;
  if (counts.size() < 2 || users < 2) {
    throw FitError("MLE needs at least 2 distinct ranks and 2 users");
  }
  const TruncatedZipfLikelihood lik(counts);

  ZipfFit fit;
  fit.method = FitMethod::kMle;
  fit.truncation_n = counts.size();

  // L is concave in s, so a non-positive slope at 0 means the maximum is
  // on the boundary.
  const double slope_at_zero = lik.derivative(lik.moments(0.0));
  if (slope_at_zero <= 1e-10 * (lik.sum_f_log_rank() + 1.0)) {
    fit.s = 0.0;
    fit.at_boundary = true;
    fit.std_error = 1.0 / std::sqrt(lik.information(lik.moments(0.0)));
    return fit;
  }

  double upper = kInitialUpper;
  while (lik.derivative(lik.moments(upper)) > 0.0) {
    upper *= 2.0;
    if (upper > kMaxUpper) throw NumericError("MLE for s did not converge (s > 1000)");
  }

  // Golden-section search to narrow the bracket.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = upper;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double lc = lik.log_likelihood(c), ld = lik.log_likelihood(d);
  int iterations = 0;
  while (b - a > kGoldenWidth) {
    if (++iterations > kMaxIterations) throw NumericError("golden-section search did not converge");
    if (lc > ld) {
      b = d;
      d = c;
      ld = lc;
      c = b - inv_phi * (b - a);
      lc = lik.log_likelihood(c);
    } else {
      a = c;
      c = d;
      lc = ld;
      d = a + inv_phi * (b - a);
      ld = lik.log_likelihood(d);
    }
  }

  // Safeguarded Newton on L'(s) = 0 inside a widened bracket.
  double lo = std::max(0.0, a - kGoldenWidth), hi = std::min(upper, b + kGoldenWidth);
  double s = 0.5 * (a + b);
  ZetaMoments m = lik.moments(s);
  for (iterations = 0;; ++iterations) {
    if (iterations > kMaxIterations) throw NumericError("Newton refinement did not converge");
    const double g = lik.derivative(m);
    const double info = lik.information(m);
    if (g > 0.0) lo = std::max(lo, s); else hi = std::min(hi, s);
    double next = info > 0.0 ? s + g / info : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - s);
    s = next;
    m = lik.moments(s);
    if (step < kNewtonTolerance || hi - lo < kNewtonTolerance) break;
  }

  fit.s = s;
  fit.std_error = 1.0 / std::sqrt(lik.information(m));
  return fit;
}

ZipfFit mle_truncated_zipf(const RankFrequencyTable& table) {
  return mle_truncated_zipf(table.counts());
}

double weighted_ks_statistic(std::span<const std::uint64_t> counts, double s) {
  const std::size_t n = counts.size();
  if (n < 2) return 0.0;
  const auto weights = zipf_weights(s, n);

  // Tails from the back keep 1 - CDF accurate where it is small.
  std::vector<double> model_tail(n + 1, 0.0);
  std::vector<std::uint64_t> data_tail(n + 1, 0);
  CompensatedSum acc;
  for (std::size_t i = n; i-- > 0;) {
    acc += weights[i];
    model_tail[i] = acc.value();
    data_tail[i] = data_tail[i + 1] + counts[i];
  }
  const double z = model_tail[0];
  const double users = static_cast<double>(data_tail[0]);

  double worst = 0.0;
  CompensatedSum model_head;
  std::uint64_t data_head = 0;
  for (std::size_t r = 0; r + 1 < n; ++r) {
    model_head += weights[r];
    data_head += counts[r];
    const double p = model_head.value() / z;
    const double q = model_tail[r + 1] / z;
    double diff;
    if (p <= 0.5) {
      diff = static_cast<double>(data_head) / users - p;
    } else {
      diff = q - static_cast<double>(data_tail[r + 1]) / users;
    }
    const double scale = std::sqrt(p * q);
    if (scale > 0.0) worst = std::max(worst, std::abs(diff) / scale);
  }
  return worst;
}

std::vector<std::uint64_t> sample_zipf_table_counts(double s, std::uint64_t n,
                                                    std::uint64_t draws, std::uint64_t seed) {
  const auto weights = zipf_weights(s, n);
  const AliasTable alias(weights);
  Rng rng(seed);
  auto counts = sample_counts(alias, draws, rng);
  std::sort(counts.begin(), counts.end(), std::greater<>());
  while (!counts.empty() && counts.back() == 0) counts.pop_back();
  return counts;
}

namespace {

double replicate_statistic(const AliasTable& model, std::uint64_t users, std::uint64_t seed) {
  Rng rng(seed);
  auto counts = sample_counts(model, users, rng);
  std::sort(counts.begin(), counts.end(), std::greater<>());
  while (!counts.empty() && counts.back() == 0) counts.pop_back();
  // A replicate with one rank fits any model exactly.
  if (counts.size() < 2) return 0.0;
  const ZipfFit refit = mle_truncated_zipf(counts);
  return weighted_ks_statistic(counts, refit.s);
}

}  // namespace

double bootstrap_p_value(std::span<const std::uint64_t> counts, const ZipfFit& fit,
                         std::uint64_t replicates, std::uint64_t seed, unsigned threads) {
  if (fit.method != FitMethod::kMle) throw ArgumentError("bootstrap needs an mle fit");
  if (replicates < 1) throw ArgumentError("bootstrap needs at least 1 replicate");
  std::uint64_t users = 0;
  for (auto c : counts) users += c;
  const double observed = weighted_ks_statistic(counts, fit.s);
  const auto weights = zipf_weights(fit.s, counts.size());
  const AliasTable model(weights);

  std::vector<double> stats(replicates, 0.0);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, replicates));
  auto work = [&](unsigned worker) {
    for (std::uint64_t i = worker; i < replicates; i += threads) {
      stats[i] = replicate_statistic(model, users, derive_seed(seed, i));
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  std::uint64_t exceed = 0;
  for (double st : stats) exceed += st > observed ? 1 : 0;
  return static_cast<double>(exceed) / static_cast<double>(replicates);
}

double bootstrap_p_value(const RankFrequencyTable& table, const ZipfFit& fit,
                         std::uint64_t replicates, std::uint64_t seed, unsigned threads) {
  return bootstrap_p_value(table.counts(), fit, replicates, seed, threads);
}

namespace {

std::string optional_field(const std::optional<double>& v) {
  return v ? format_double(*v) : "NA";
}

}  // namespace

void write_fit_report_tsv(std::ostream& out, std::span<const ZipfFit> fits) {
  out << "method\ts\tslope_m\tstderr\tp_value\tN\n";
  for (const auto& f : fits) {
    out << fit_method_name(f.method) << '\t' << format_double(f.s) << '\t'
        << optional_field(f.slope_m) << '\t' << optional_field(f.std_error) << '\t'
        << optional_field(f.p_value) << '\t' << f.truncation_n << '\n';
  }
}

void write_binned_tsv(std::ostream& out, const BinnedSeries& series) {
  out << "x\ty\n";
  for (const auto& p : series.points) {
    out << format_double(p.x) << '\t' << format_double(p.y) << '\n';
  }
}

}  // namespace pwdist
