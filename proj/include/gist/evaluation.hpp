#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gist/error.hpp"
#include "gist/scoring.hpp"

namespace gist {

// Pooled is Student's t; Welch drops the equal-variance assumption.
enum class VarianceMode { Pooled, Welch };

std::string_view to_string(VarianceMode m) noexcept;

struct TTest {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-tailed
  // Both groups constant: t is 0 (equal means) or +-inf, p is 1 or 0.
  bool degenerate = false;
};

// t for mean(a) - mean(b). Throws GroupTooSmall when either side has fewer
// than two values and MissingResource for non-finite input.
TTest t_test_two_sample(std::span<const double> a, std::span<const double> b,
                        VarianceMode mode = VarianceMode::Pooled);

// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_tailed_p(double t, double df);

struct GroupLabels {
  std::string low = "low";
  std::string high = "high";
};

struct GroupComparison {
  GisConfig config;
  std::size_t config_index = 0;  // position in the enumeration; tie-break key
  double mean_low = 0.0;
  double mean_high = 0.0;
  double distance = 0.0;  // mean_high - mean_low
  double t = 0.0;         // high vs low
  double p = 1.0;
  double df = 0.0;
  std::size_t n_low = 0;
  std::size_t n_high = 0;
  bool degenerate = false;
  bool significant = false;  // p <= threshold, never for degenerate groups
};

// Documents with other labels are ignored. Throws MissingLabel when a label
// has no documents and GroupTooSmall when it has one.
GroupComparison compare_groups(std::span<const GisResult> results, const GroupLabels& labels,
                               double threshold = 0.05,
                               VarianceMode mode = VarianceMode::Pooled);

struct SearchOptions {
  GroupLabels labels;
  double threshold = 0.05;
  VarianceMode variance = VarianceMode::Pooled;
  MissingPolicy missing = MissingPolicy::Error;
  CombinationSpace space;
  Weights weights = default_weights();
  unsigned jobs = 1;  // 0 = hardware threads
};

struct SearchFailure {
  GisConfig config;
  std::size_t config_index = 0;
  ErrorKind kind = ErrorKind::MissingVariant;
  std::string message;
};

struct SearchReport {
  // Distance descending, then t descending, then enumeration order.
  std::vector<GroupComparison> ranked;
  std::vector<SearchFailure> failures;  // enumeration order
  double threshold = 0.05;

  // Significant configs in enumeration order.
  std::vector<GisConfig> significant() const;
};

// One GIS batch and group comparison per config. Per-config failures are
// collected in the report; missing labels or undersized groups in the
// input abort the whole search.
SearchReport combination_search(std::span<const IndexVector> vectors,
                                const SearchOptions& options = {});

// Configs significant in every report, in the first report's order.
std::vector<GisConfig> significant_intersection(std::span<const SearchReport> reports);

struct Split {
  std::vector<std::string> train;  // doc ids, sorted
  std::vector<std::string> test;
};

// Label-stratified split. Each label's documents (sorted by id, labels in
// lexicographic order, unlabeled ones last) get a Fisher-Yates shuffle
// driven by one std::mt19937_64 seeded with `seed`; index j for position i
// is drawn from raw 64-bit outputs by rejection, so the split does not
// depend on the standard library's distributions. The first ceil(n/2)
// shuffled documents of each label go to train.
Split stratified_split(std::span<const IndexVector> vectors, std::uint64_t seed);

struct RobustnessResult {
  std::uint64_t seed = 0;
  GisConfig chosen;
  GroupComparison train;
  GroupComparison test;  // chosen config, z-scored on the test batch
  Split split;
};

// Searches on the train half, then evaluates the top-ranked config on the
// test half. Throws GroupTooSmall when a half would hold fewer than two
// documents of either label.
RobustnessResult robustness_split_eval(std::span<const IndexVector> vectors,
                                       const SearchOptions& options, std::uint64_t seed);

}  // namespace gist
