// Estimating the Zipf exponent s of a rank-frequency table.
//
// Least-squares fits work on log2-log2 points, either one point per rank
// (raw) or one per dyadic bin. Bins cover [2^n, 2^(n+1) - 1]; a bin's
// ordinate is the mean value over that range and its abscissa the geometric
// mean of the two endpoints. The last bin is dropped when it would run past
// the data, and empty bins are omitted.
//
// The count-of-counts view n_k is a line of slope m = -(1 + 1/s) under Zipf,
// so s = 1 / (-m - 1).
//
// The MLE treats ranks 1..N (N = distinct passwords) as a truncated Zipf
// distribution P(r) = r^-s / H(N, s).

#ifndef PWDIST_ZIPF_FIT_H_
#define PWDIST_ZIPF_FIT_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "pwdist/ingest.h"

namespace pwdist {

enum class FitMethod { kLsRaw, kLsBinned, kNkRaw, kNkBinned, kMle };

std::string_view fit_method_name(FitMethod method);
FitMethod parse_fit_method(std::string_view tag);

struct ZipfFit {
  FitMethod method = FitMethod::kMle;
  double s = 0.0;
  std::optional<double> slope_m;    // nk methods only
  std::optional<double> std_error;  // mle only
  std::optional<double> p_value;    // mle only, once bootstrapped
  std::uint64_t truncation_n = 0;
  bool at_boundary = false;  // mle pinned at s = 0
  bool flat_slope = false;   // least-squares slope was exactly flat
};

enum class BinRule { kDyadicRank, kDyadicK };

struct BinnedPoint {
  double x = 0.0;
  double y = 0.0;
};

struct BinnedSeries {
  std::vector<BinnedPoint> points;
  BinRule rule = BinRule::kDyadicRank;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares y = slope * x + intercept. Throws FitError with
// fewer than two points or no spread in x.
LineFit least_squares(std::span<const double> xs, std::span<const double> ys);

// Dyadic bins of values indexed 1..values.size() (values[i - 1] at index i).
BinnedSeries bin_dyadic(std::span<const double> values, BinRule rule);

BinnedSeries bin_dyadic_rank(const RankFrequencyTable& table);
// n_k over k = 1..max k, with zeros for multiplicities nobody has.
BinnedSeries bin_dyadic_k(const CountOfCounts& counts);

ZipfFit ls_raw_rank(const RankFrequencyTable& table);
ZipfFit ls_raw_rank(std::span<const std::uint64_t> counts);
ZipfFit ls_binned_rank(const RankFrequencyTable& table);
ZipfFit ls_binned_rank(std::span<const std::uint64_t> counts);
ZipfFit ls_nk(const CountOfCounts& counts, bool binned);

// Truncated-Zipf log-likelihood of rank counts (natural log):
// L(s) = -s * sum f_i ln i - U ln H(N, s).
double zipf_log_likelihood(std::span<const std::uint64_t> counts, double s);

ZipfFit mle_truncated_zipf(const RankFrequencyTable& table);
ZipfFit mle_truncated_zipf(std::span<const std::uint64_t> counts);

// Kolmogorov-Smirnov distance between the empirical rank CDF of `counts`
// and the truncated Zipf(s, counts.size()) CDF, each rank weighted by
// 1 / sqrt(P(1 - P)) (the Anderson-Darling weighting). The last rank, where
// the weight is undefined, is skipped.
double weighted_ks_statistic(std::span<const std::uint64_t> counts, double s);

// Parametric bootstrap: fraction of replicates, drawn from the fitted model
// and re-sorted and re-fitted the same way, whose statistic strictly exceeds
// the observed one. Replicate i uses a seed derived from (seed, i), so any
// thread count gives the same answer. threads == 0 means hardware threads.
double bootstrap_p_value(const RankFrequencyTable& table, const ZipfFit& fit,
                         std::uint64_t replicates, std::uint64_t seed,
                         unsigned threads = 0);
double bootstrap_p_value(std::span<const std::uint64_t> counts, const ZipfFit& fit,
                         std::uint64_t replicates, std::uint64_t seed,
                         unsigned threads = 0);

// Draws `draws` users from truncated Zipf(s, n) and returns the non-zero
// counts sorted in descending order, i.e. the ranked table the draws form.
std::vector<std::uint64_t> sample_zipf_table_counts(double s, std::uint64_t n,
                                                    std::uint64_t draws, std::uint64_t seed);

// Columns: method, s, slope_m, stderr, p_value, N. Absent values print NA.
void write_fit_report_tsv(std::ostream& out, std::span<const ZipfFit> fits);
void write_binned_tsv(std::ostream& out, const BinnedSeries& series);

}  // namespace pwdist

#endif  // PWDIST_ZIPF_FIT_H_
