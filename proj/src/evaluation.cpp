#include "gist/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "gist/parallel.hpp"

namespace gist {

std::string_view to_string(VarianceMode m) noexcept {
  return m == VarianceMode::Pooled ? "pooled" : "welch";
}

namespace {

struct Moments {
  double mean = 0.0;
  double ss = 0.0;  // sum of squared deviations
  bool constant = false;
};

Moments moments(std::span<const double> x) {
  Moments m;
  double sum = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorKind::MissingResource, "non-finite value in t-test input");
    sum += v;
  }
  m.mean = sum / static_cast<double>(x.size());
  for (double v : x) m.ss += (v - m.mean) * (v - m.mean);
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  m.constant = *lo == *hi;
  if (m.constant) m.ss = 0.0;
  return m;
}

}  // namespace

double student_t_two_tailed_p(double t, double df) {
  if (std::isnan(t) || !(df > 0.0)) {
    throw Error(ErrorKind::ConfigError, "t distribution needs a finite t and df > 0");
  }
  if (std::isinf(t)) return 0.0;
  boost::math::students_t dist(df);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  return std::clamp(p, 0.0, 1.0);
}

TTest t_test_two_sample(std::span<const double> a, std::span<const double> b, VarianceMode mode) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorKind::GroupTooSmall, "t-test needs two values per group, got " +
                                              std::to_string(a.size()) + " and " +
                                              std::to_string(b.size()));
  }
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double diff = ma.mean - mb.mean;

  TTest r;
  double se2 = 0.0;
  if (mode == VarianceMode::Pooled) {
    r.df = na + nb - 2.0;
    const double sp2 = (ma.ss + mb.ss) / r.df;
    se2 = sp2 * (1.0 / na + 1.0 / nb);
  } else {
    const double va = ma.ss / (na - 1.0) / na;
    const double vb = mb.ss / (nb - 1.0) / nb;
    se2 = va + vb;
    r.df = se2 > 0.0 ? se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0)) : na + nb - 2.0;
  }

  if ((ma.constant && mb.constant) || se2 == 0.0) {
    r.degenerate = true;
    if (diff == 0.0) {
      r.t = 0.0;
      r.p = 1.0;
    } else {
      r.t = std::copysign(std::numeric_limits<double>::infinity(), diff);
      r.p = 0.0;
    }
    return r;
  }
  r.t = diff / std::sqrt(se2);
  r.p = student_t_two_tailed_p(r.t, r.df);
  return r;
}

GroupComparison compare_groups(std::span<const GisResult> results, const GroupLabels& labels,
                               double threshold, VarianceMode mode) {
  std::vector<double> low, high;
  for (const auto& r : results) {
    if (!r.group_label) continue;
    if (*r.group_label == labels.low) low.push_back(r.gis);
    else if (*r.group_label == labels.high) high.push_back(r.gis);
  }
  for (const auto* side : {&labels.low, &labels.high}) {
    const auto& v = side == &labels.low ? low : high;
    if (v.empty()) throw Error(ErrorKind::MissingLabel, "no documents labelled '" + *side + "'");
    if (v.size() < 2) {
      throw Error(ErrorKind::GroupTooSmall, "group '" + *side + "' has only one document");
    }
  }
  const TTest tt = t_test_two_sample(high, low, mode);
  GroupComparison c;
  c.n_low = low.size();
  c.n_high = high.size();
  double s = 0.0;
  for (double v : low) s += v;
  c.mean_low = s / static_cast<double>(low.size());
  s = 0.0;
  for (double v : high) s += v;
  c.mean_high = s / static_cast<double>(high.size());
  c.distance = c.mean_high - c.mean_low;
  c.t = tt.t;
  c.p = tt.p;
  c.df = tt.df;
  c.degenerate = tt.degenerate;
  c.significant = !tt.degenerate && tt.p <= threshold;
  return c;
}

std::vector<GisConfig> SearchReport::significant() const {
  std::vector<const GroupComparison*> sig;
  for (const auto& c : ranked) {
    if (c.significant) sig.push_back(&c);
  }
  std::sort(sig.begin(), sig.end(),
            [](const auto* a, const auto* b) { return a->config_index < b->config_index; });
  std::vector<GisConfig> out;
  out.reserve(sig.size());
  for (const auto* c : sig) out.push_back(c->config);
  return out;
}

namespace {

void check_groups(std::span<const IndexVector> vectors, const GroupLabels& labels) {
  std::size_t low = 0, high = 0;
  for (const auto& v : vectors) {
    if (!v.group_label) continue;
    low += *v.group_label == labels.low;
    high += *v.group_label == labels.high;
  }
  for (auto [name, n] : {std::pair{&labels.low, low}, std::pair{&labels.high, high}}) {
    if (n == 0) throw Error(ErrorKind::MissingLabel, "no documents labelled '" + *name + "'");
    if (n < 2) {
      throw Error(ErrorKind::GroupTooSmall, "group '" + *name + "' has only " + std::to_string(n) +
                                                " document");
    }
  }
}

}  // namespace

SearchReport combination_search(std::span<const IndexVector> vectors, const SearchOptions& options) {
  check_groups(vectors, options.labels);
  const auto configs = enumerate_combinations(options.space, options.weights);

  std::vector<std::optional<GroupComparison>> done(configs.size());
  std::vector<std::optional<SearchFailure>> failed(configs.size());
  parallel_for(configs.size(), options.jobs, [&](std::size_t i) {
    try {
      const GisBatch batch = compute_gis(vectors, configs[i], options.missing);
      GroupComparison c = compare_groups(batch.results, options.labels, options.threshold,
                                         options.variance);
      c.config = configs[i];
      c.config_index = i;
      done[i] = std::move(c);
    } catch (const Error& e) {
      failed[i] = SearchFailure{configs[i], i, e.kind(), e.detail()};
    }
  });

  SearchReport report;
  report.threshold = options.threshold;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (done[i]) report.ranked.push_back(std::move(*done[i]));
    if (failed[i]) report.failures.push_back(std::move(*failed[i]));
  }
  std::stable_sort(report.ranked.begin(), report.ranked.end(),
                   [](const GroupComparison& a, const GroupComparison& b) {
                     if (a.distance != b.distance) return a.distance > b.distance;
                     if (a.t != b.t) return a.t > b.t;
                     return a.config_index < b.config_index;
                   });
  return report;
}

std::vector<GisConfig> significant_intersection(std::span<const SearchReport> reports) {
  if (reports.empty()) return {};
  std::vector<GisConfig> out = reports.front().significant();
  for (std::size_t r = 1; r < reports.size(); ++r) {
    const auto other = reports[r].significant();
    std::erase_if(out, [&](const GisConfig& c) {
      return std::find(other.begin(), other.end(), c) == other.end();
    });
  }
  return out;
}

namespace {

// Uniform integer in [0, bound) from raw generator output, rejecting the
// tail that would bias the modulo.
std::uint64_t draw_below(std::mt19937_64& gen, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t x = gen();
    if (x < limit) return x % bound;
  }
}

}  // namespace

Split stratified_split(std::span<const IndexVector> vectors, std::uint64_t seed) {
  // Unlabeled documents sort after every label.
  std::map<std::pair<bool, std::string>, std::vector<std::string>> strata;
  for (const auto& v : vectors) {
    strata[{!v.group_label.has_value(), v.group_label.value_or("")}].push_back(v.doc_id);
  }
  std::mt19937_64 gen(seed);
  Split split;
  for (auto& [label, ids] : strata) {
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = ids.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(draw_below(gen, i));
      std::swap(ids[i - 1], ids[j]);
    }
    const std::size_t n_train = (ids.size() + 1) / 2;
    split.train.insert(split.train.end(), ids.begin(), ids.begin() + n_train);
    split.test.insert(split.test.end(), ids.begin() + n_train, ids.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

namespace {

std::vector<IndexVector> subset(std::span<const IndexVector> vectors,
                                const std::vector<std::string>& ids) {
  std::vector<IndexVector> out;
  for (const auto& v : vectors) {
    if (std::binary_search(ids.begin(), ids.end(), v.doc_id)) out.push_back(v);
  }
  return out;
}

}  // namespace

RobustnessResult robustness_split_eval(std::span<const IndexVector> vectors,
                                       const SearchOptions& options, std::uint64_t seed) {
  check_groups(vectors, options.labels);
  RobustnessResult r;
  r.seed = seed;
  r.split = stratified_split(vectors, seed);

  const auto train = subset(vectors, r.split.train);
  const auto test = subset(vectors, r.split.test);
  try {
    check_groups(train, options.labels);
    check_groups(test, options.labels);
  } catch (const Error& e) {
    throw Error(ErrorKind::GroupTooSmall, "seed " + std::to_string(seed) +
                                              ": split leaves too few documents (" + e.detail() +
                                              ")");
  }

  const SearchReport report = combination_search(train, options);
  if (report.ranked.empty()) {
    const auto& f = report.failures.front();
    throw Error(f.kind, "no config could be scored on the train half: " + f.message);
  }
  r.train = report.ranked.front();
  r.chosen = r.train.config;

  const GisBatch batch = compute_gis(test, r.chosen, options.missing);
  r.test = compare_groups(batch.results, options.labels, options.threshold, options.variance);
  r.test.config = r.chosen;
  r.test.config_index = r.train.config_index;
  return r;
}

}  // namespace gist
