#pragma once

// Small statistics toolkit for Monte-Carlo verification: mergeable running
// moments, Kolmogorov-Smirnov tests and normal quantiles.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace affsv {

/// Mean and variance accumulator; merge() is Chan's pairwise update, so a
/// fixed merge order gives bit-identical results.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance (0 for fewer than two samples).
  double variance() const;
  /// Standard error of the mean.
  double stderr_mean() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

double normal_cdf(double x);
/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

/// Two-sided z threshold controlling the family-wise error of `tests`
/// comparisons at the level of a single 3-sigma test.
double bonferroni_threshold(std::size_t tests, double z_single = 3.0);

}  // namespace affsv
