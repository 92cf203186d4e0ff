#include "pwdist/zipf_fit.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "pwdist/common.h"
#include "pwdist/sampling.h"

namespace pwdist {
namespace {

// Independent long-double log-likelihood: -s sum f_i ln i - U ln sum r^-s.
long double oracle_log_likelihood(const std::vector<std::uint64_t>& counts, long double s) {
  long double a = 0, h = 0, users = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const long double r = static_cast<long double>(i + 1);
    a += counts[i] * std::log(r);
    h += std::pow(r, -s);
    users += counts[i];
  }
  return -s * a - users * std::log(h);
}

// Weighted KS by the textbook definition, in long double.
long double oracle_weighted_ks(const std::vector<std::uint64_t>& counts, long double s) {
  long double z = 0, users = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    z += std::pow(static_cast<long double>(i + 1), -s);
    users += counts[i];
  }
  long double cdf = 0, emp = 0, worst = 0;
  for (std::size_t r = 0; r + 1 < counts.size(); ++r) {
    cdf += std::pow(static_cast<long double>(r + 1), -s) / z;
    emp += counts[r] / users;
    const long double w = std::sqrt(cdf * (1 - cdf));
    worst = std::max(worst, std::fabs(emp - cdf) / w);
  }
  return worst;
}

TEST(LeastSquares, RecoversExactLines) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> coef(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const double m = coef(gen), c = coef(gen);
    std::vector<double> xs, ys;
    for (int i = 0; i < 10; ++i) {
      xs.push_back(i * 0.7);
      ys.push_back(m * xs.back() + c);
    }
    const auto line = least_squares(xs, ys);
    EXPECT_NEAR(line.slope, m, 1e-9);
    EXPECT_NEAR(line.intercept, c, 1e-9);
  }
  EXPECT_THROW(least_squares(std::vector<double>{1.0}, std::vector<double>{2.0}), FitError);
  EXPECT_THROW(least_squares(std::vector<double>{1.0, 1.0}, std::vector<double>{2.0, 3.0}),
               FitError);
}

TEST(LsRawRank, CollinearFixture) {
  const std::vector<std::uint64_t> counts{12, 6, 4, 3};
  const auto fit = ls_raw_rank(counts);
  EXPECT_NEAR(fit.s, 1.0, 1e-9);
  EXPECT_EQ(fit.method, FitMethod::kLsRaw);
  EXPECT_FALSE(fit.slope_m.has_value());
  EXPECT_EQ(fit.truncation_n, 4u);
}

TEST(LsRawRank, ExactPowerLawsAreRecoveredExactly) {
  // f = C r^-s with C divisible by every r^s.
  for (int s = 1; s <= 2; ++s) {
    for (std::uint64_t n = 2; n <= 8; ++n) {
      std::uint64_t lcm = 1;
      for (std::uint64_t r = 1; r <= n; ++r) lcm = std::lcm(lcm, r);
      std::uint64_t c = 1;
      for (int k = 0; k < s; ++k) c *= lcm;
      std::vector<std::uint64_t> counts;
      for (std::uint64_t r = 1; r <= n; ++r) {
        counts.push_back(c / static_cast<std::uint64_t>(std::llround(std::pow(r, s))));
      }
      EXPECT_NEAR(ls_raw_rank(counts).s, s, 1e-9) << "n=" << n;
    }
  }
}

TEST(LsRawRank, FlatDataIsReportedAsZeroWithWarning) {
  const std::vector<std::uint64_t> counts{5, 5};
  const auto fit = ls_raw_rank(counts);
  EXPECT_EQ(fit.s, 0.0);
  EXPECT_TRUE(fit.flat_slope);
  EXPECT_THROW(ls_raw_rank(std::vector<std::uint64_t>{5}), FitError);
}

TEST(BinDyadicRank, HandComputedBins) {
  const auto series = bin_dyadic_rank(table_from_counts(std::vector<std::uint64_t>{12, 6, 4, 3}));
  ASSERT_EQ(series.points.size(), 2u);
  EXPECT_DOUBLE_EQ(series.points[0].x, 1.0);
  EXPECT_DOUBLE_EQ(series.points[0].y, 12.0);
  EXPECT_DOUBLE_EQ(series.points[1].x, std::sqrt(6.0));
  EXPECT_DOUBLE_EQ(series.points[1].y, 5.0);
  EXPECT_EQ(series.rule, BinRule::kDyadicRank);
}

TEST(BinDyadicRank, BoundaryTraces) {
  const auto one = bin_dyadic_rank(table_from_counts(std::vector<std::uint64_t>{9}));
  ASSERT_EQ(one.points.size(), 1u);
  EXPECT_DOUBLE_EQ(one.points[0].y, 9.0);

  const std::vector<std::uint64_t> seven{7, 6, 5, 4, 3, 2, 1};
  EXPECT_EQ(bin_dyadic_rank(table_from_counts(seven)).points.size(), 3u);
  const std::vector<std::uint64_t> eight{8, 7, 6, 5, 4, 3, 2, 1};
  EXPECT_EQ(bin_dyadic_rank(table_from_counts(eight)).points.size(), 3u);
}

TEST(BinDyadicK, EmptyBinsAreOmitted) {
  // k_max = 7 completes bin {4..7}; missing k count as zero inside it.
  const CountOfCounts cc{{{1, 10}, {2, 4}, {3, 2}, {7, 1}}};
  const auto series = bin_dyadic_k(cc);
  ASSERT_EQ(series.points.size(), 3u);
  EXPECT_DOUBLE_EQ(series.points[1].y, 3.0);   // (4 + 2) / 2
  EXPECT_DOUBLE_EQ(series.points[2].y, 0.25);  // 1 / 4
  const CountOfCounts gap{{{1, 10}, {2, 4}, {3, 2}, {15, 1}}};
  // Bin {4..7} is all zeros and disappears; {8..15} holds the single k.
  EXPECT_EQ(bin_dyadic_k(gap).points.size(), 3u);
}

TEST(LsBinnedRank, RecoversSyntheticPowerLaw) {
  std::vector<std::uint64_t> counts;
  for (int i = 1; i <= 10000; ++i) {
    counts.push_back(static_cast<std::uint64_t>(std::llround(1e6 * std::pow(i, -0.78))));
  }
  const auto fit = ls_binned_rank(counts);
  // Independent numpy polyfit over the same bins gives 0.7830079543175221.
  EXPECT_NEAR(fit.s, 0.7830079543175221, 1e-9);
  EXPECT_NEAR(fit.s, 0.78, 0.05);
}

TEST(LsBinnedRank, CollinearBinPointsGiveUnitExponent) {
  // Bin sums chosen so every bin mean is C / x_n, split evenly inside the bin.
  const double c = std::ldexp(1.0, 40);
  std::vector<std::uint64_t> counts;
  for (int n = 0; n < 12; ++n) {
    const std::uint64_t lo = std::uint64_t{1} << n, hi = (lo << 1) - 1, width = lo;
    const double x = std::sqrt(static_cast<double>(lo) * static_cast<double>(hi));
    const auto sum = static_cast<std::uint64_t>(std::llround(c * width / x));
    for (std::uint64_t i = 0; i < width; ++i) counts.push_back(sum / width + (i < sum % width ? 1 : 0));
  }
  EXPECT_NEAR(ls_binned_rank(counts).s, 1.0, 1e-9);
}

TEST(LsBinnedRank, DyadicStepData) {
  // Every rank in bin n has count 2^(13 - n); 13 complete bins. The
  // geometric-mean abscissa bends the first bins slightly, so s is just
  // under 1 (numpy oracle: 0.9746549690358718).
  std::vector<std::uint64_t> counts;
  for (int n = 0; n < 13; ++n) counts.insert(counts.end(), std::size_t{1} << n, 1u << (13 - n));
  EXPECT_NEAR(ls_binned_rank(counts).s, 0.9746549690358718, 1e-9);
}

TEST(LsBinnedRank, NeedsTwoCompleteBins) {
  EXPECT_THROW(ls_binned_rank(std::vector<std::uint64_t>{3, 2}), FitError);
  EXPECT_NO_THROW(ls_binned_rank(std::vector<std::uint64_t>{3, 2, 1}));
}

TEST(LsNk, TwoPointSlope) {
  const auto fit = ls_nk(CountOfCounts{{{1, 8}, {2, 2}}}, false);
  ASSERT_TRUE(fit.slope_m.has_value());
  EXPECT_NEAR(*fit.slope_m, -2.0, 1e-12);
  EXPECT_NEAR(fit.s, 1.0, 1e-12);
  EXPECT_EQ(fit.method, FitMethod::kNkRaw);
}

TEST(LsNk, Errors) {
  EXPECT_THROW(ls_nk(CountOfCounts{{{1, 8}}}, false), FitError);
  EXPECT_THROW(ls_nk(CountOfCounts{{{1, 4}, {2, 4}}}, false), FitError);
  EXPECT_THROW(ls_nk(CountOfCounts{{{1, 8}, {2, 2}}}, true), FitError);
}

TEST(LsNk, BinnedOnSampledZipfMatchesRelation) {
  const auto counts = sample_zipf_table_counts(0.7, 100000, 1000000, 17);
  const auto fit = ls_nk(count_of_counts(counts), true);
  ASSERT_TRUE(fit.slope_m.has_value());
  EXPECT_LT(*fit.slope_m, -1.0);
  EXPECT_NEAR(fit.s, 1.0 / (-*fit.slope_m - 1.0), 1e-12);
}

TEST(Mle, UniformDataSitsOnTheBoundary) {
  const std::vector<std::uint64_t> ones(10, 1);
  const auto fit = mle_truncated_zipf(ones);
  EXPECT_EQ(fit.s, 0.0);
  EXPECT_TRUE(fit.at_boundary);
  EXPECT_EQ(fit.truncation_n, 10u);
}

TEST(Mle, Preconditions) {
  EXPECT_THROW(mle_truncated_zipf(std::vector<std::uint64_t>{5}), FitError);
}

TEST(Mle, MatchesGridSearchOracle) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::uint64_t> counts(2 + gen() % 30);
    for (auto& c : counts) c = 1 + gen() % 50;
    std::sort(counts.rbegin(), counts.rend());
    if (counts.front() == counts.back()) continue;
    const auto fit = mle_truncated_zipf(counts);

    // Coarse grid, then a fine grid around the best coarse point.
    long double best_s = 0, best = oracle_log_likelihood(counts, 0);
    for (int i = 1; i <= 5000; ++i) {
      const long double s = i * 0.002L;
      const auto l = oracle_log_likelihood(counts, s);
      if (l > best) best = l, best_s = s;
    }
    const long double lo = std::max(0.0L, best_s - 0.002L);
    for (int i = 0; i <= 4000; ++i) {
      const long double s = lo + i * 1e-6L;
      const auto l = oracle_log_likelihood(counts, s);
      if (l > best) best = l, best_s = s;
    }
    EXPECT_NEAR(fit.s, static_cast<double>(best_s), 2e-6);
  }
}

TEST(Mle, StdErrorMatchesFiniteDifferenceCurvature) {
  const auto counts = sample_zipf_table_counts(0.7, 1000, 20000, 4);
  const auto fit = mle_truncated_zipf(counts);
  ASSERT_TRUE(fit.std_error.has_value());
  const long double h = 1e-3L, s = fit.s;
  const long double second = (oracle_log_likelihood(counts, s + h) - 2 * oracle_log_likelihood(counts, s) +
                              oracle_log_likelihood(counts, s - h)) / (h * h);
  EXPECT_NEAR(*fit.std_error, 1.0 / std::sqrt(static_cast<double>(-second)), 1e-4 * *fit.std_error);
}

TEST(Mle, LikelihoodIsMaximal) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto counts = sample_zipf_table_counts(0.3 + 0.1 * seed, 500, 5000, seed);
    const auto fit = mle_truncated_zipf(counts);
    const double l = zipf_log_likelihood(counts, fit.s);
    EXPECT_GE(l, zipf_log_likelihood(counts, fit.s + 1e-3));
    if (fit.s >= 1e-3) EXPECT_GE(l, zipf_log_likelihood(counts, fit.s - 1e-3));
  }
}

TEST(Mle, RecoversSampledExponentWithTrueLabels) {
  // Counts indexed by the generating rank, zeros included, N fixed at 10^4.
  const auto weights = zipf_weights(0.7, 10000);
  const AliasTable alias(weights);
  Rng rng(2024);
  const auto counts = sample_counts(alias, 100000, rng);
  const auto fit = mle_truncated_zipf(counts);
  ASSERT_TRUE(fit.std_error.has_value());
  EXPECT_LE(std::abs(fit.s - 0.7), 3 * *fit.std_error);
  EXPECT_EQ(fit.truncation_n, 10000u);
}

TEST(Mle, SortedSampleIsBiasedTowardSteeperHeads) {
  // Ranking by observed frequency inflates the head on flat sources.
  const auto counts = sample_zipf_table_counts(0.3, 10000, 100000, 2024);
  const auto fit = mle_truncated_zipf(counts);
  EXPECT_GT(fit.s, 0.3 + 3 * *fit.std_error);
  EXPECT_EQ(fit.truncation_n, counts.size());
}

TEST(Mle, SteepDataExtendsTheSearchInterval) {
  const auto fit = mle_truncated_zipf(std::vector<std::uint64_t>{1000000, 1});
  // Closed form for two ranks: 2^-s / (1 + 2^-s) = 1 / 1000001.
  EXPECT_NEAR(fit.s, std::log2(1000000.0), 1e-6);
}

TEST(WeightedKs, MatchesOracle) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint64_t> counts(2 + gen() % 40);
    for (auto& c : counts) c = 1 + gen() % 100;
    std::sort(counts.rbegin(), counts.rend());
    const double s = (gen() % 1500) / 1000.0;
    EXPECT_NEAR(weighted_ks_statistic(counts, s), static_cast<double>(oracle_weighted_ks(counts, s)),
                1e-9);
  }
  EXPECT_EQ(weighted_ks_statistic(std::vector<std::uint64_t>{4}, 1.0), 0.0);
}

TEST(BinnedVersusRaw, BinnedSlopeIsSteeperOnLongTails) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto counts = sample_zipf_table_counts(0.8, 200000, 100000, seed);
    ASSERT_GT(std::count(counts.begin(), counts.end(), 1u), static_cast<long>(counts.size() / 2));
    EXPECT_GE(ls_binned_rank(counts).s, ls_raw_rank(counts).s);
  }
}

TEST(Bootstrap, ArgumentChecks) {
  const std::vector<std::uint64_t> counts{5, 3, 2, 1};
  const auto fit = mle_truncated_zipf(counts);
  EXPECT_THROW(bootstrap_p_value(counts, fit, 0, 1), ArgumentError);
  EXPECT_THROW(bootstrap_p_value(counts, ls_raw_rank(counts), 10, 1), ArgumentError);
}

TEST(Bootstrap, ThreadCountDoesNotChangeTheAnswer) {
  const auto counts = sample_zipf_table_counts(0.6, 300, 3000, 8);
  const auto fit = mle_truncated_zipf(counts);
  const double one = bootstrap_p_value(counts, fit, 40, 77, 1);
  const double many = bootstrap_p_value(counts, fit, 40, 77, 4);
  EXPECT_EQ(one, many);
  EXPECT_GE(one, 0.0);
  EXPECT_LE(one, 1.0);
}

TEST(FitReport, TsvFormat) {
  ZipfFit a;
  a.method = FitMethod::kLsRaw;
  a.s = 1.0;
  a.truncation_n = 4;
  ZipfFit b;
  b.method = FitMethod::kMle;
  b.s = 0.5;
  b.std_error = 0.25;
  b.p_value = 0.57;
  b.truncation_n = 4;
  const std::vector<ZipfFit> fits{a, b};
  std::ostringstream out;
  write_fit_report_tsv(out, fits);
  EXPECT_EQ(out.str(),
            "method\ts\tslope_m\tstderr\tp_value\tN\n"
            "ls-raw\t1\tNA\tNA\tNA\t4\n"
            "mle\t0.5\tNA\t0.25\t0.57\t4\n");
}

}  // namespace
}  // namespace pwdist
