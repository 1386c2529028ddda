#pragma once

// Independent reference computations used by the tests. None of these call
// into the library; they are written the slow, obvious way on purpose.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

// Pair rule by name: "1", "a", "1p", "ap". Units are numbered in document
// order; paragraph_sizes gives the paragraph of each unit. Every i<j pair
// is tested against the rule; the mean of defined scores is returned
// (nullopt when no pair qualifies or none is defined).
struct PairMean {
  std::optional<double> mean;
  std::size_t pairs = 0;
};
PairMean pair_mean(const std::vector<std::size_t>& paragraph_sizes, const std::string& rule,
                   const std::function<std::optional<double>(std::size_t, std::size_t)>& score);

// Two-tailed p of Student's t by Gauss-Legendre quadrature of the density,
// after the substitution x = tan(theta).
double t_two_tailed_p(double t, double df);

// Pooled two-sample t written from the textbook formula with sample
// variances (n-1 denominators).
struct TResult {
  double t;
  double df;
};
TResult pooled_t(const std::vector<double>& a, const std::vector<double>& b);

// Population z-scores, long double accumulation.
std::vector<double> zscores(const std::vector<double>& x);

}  // namespace oracle
