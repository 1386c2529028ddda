#include "oracles.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracle {

PairMean pair_mean(const std::vector<std::size_t>& paragraph_sizes, const std::string& rule,
                   const std::function<std::optional<double>(std::size_t, std::size_t)>& score) {
  std::vector<std::size_t> para_of;
  for (std::size_t p = 0; p < paragraph_sizes.size(); ++p)
    for (std::size_t k = 0; k < paragraph_sizes[p]; ++k) para_of.push_back(p);

  const bool in_para = rule == "1p" || rule == "ap";
  const bool adjacent = rule == "1" || rule == "1p";
  if (!in_para && !adjacent && rule != "a") throw std::invalid_argument("rule " + rule);

  PairMean out;
  double sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t i = 0; i < para_of.size(); ++i) {
    for (std::size_t j = i + 1; j < para_of.size(); ++j) {
      if (adjacent && j != i + 1) continue;
      if (in_para && para_of[i] != para_of[j]) continue;
      ++out.pairs;
      if (auto s = score(i, j)) {
        sum += *s;
        ++defined;
      }
    }
  }
  if (defined > 0) out.mean = sum / static_cast<double>(defined);
  return out;
}

namespace {

// 20-point Gauss-Legendre nodes/weights on [-1, 1] (positive half).
constexpr std::array<double, 10> kNodes = {
    0.0765265211334973337546404, 0.2277858511416450780804962, 0.3737060887154195606725482,
    0.5108670019508270980043641, 0.6360536807265150254528367, 0.7463319064601507926143051,
    0.8391169718222188233945291, 0.9122344282513259058677524, 0.9639719272779137912676661,
    0.9931285991850949247861224};
constexpr std::array<double, 10> kWeights = {
    0.1527533871307258506980843, 0.1491729864726037467878287, 0.1420961093183820513292983,
    0.1316886384491766268984945, 0.1181945319615184173123774, 0.1019301198172404350367501,
    0.0832767415767047487247581, 0.0626720483341090635695065, 0.0406014298003869413310400,
    0.0176140071391521183118620};

}  // namespace

double t_two_tailed_p(double t, double df) {
  const double nu = df;
  const double log_c = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
                       0.5 * std::log(nu * std::numbers::pi);
  // Density in theta: f(tan th) * sec^2 th.
  auto g = [&](double th) {
    const double x = std::tan(th);
    const double sec2 = 1.0 + x * x;
    return std::exp(log_c - (nu + 1.0) / 2.0 * std::log1p(x * x / nu)) * sec2;
  };
  const double a = std::atan(std::fabs(t));
  const double b = std::numbers::pi / 2.0;
  const int panels = 400;
  const double h = (b - a) / panels;
  long double total = 0.0L;
  for (int k = 0; k < panels; ++k) {
    const double mid = a + (k + 0.5) * h;
    for (std::size_t i = 0; i < kNodes.size(); ++i) {
      const double dx = kNodes[i] * h / 2.0;
      total += kWeights[i] * (g(mid - dx) + g(mid + dx)) * h / 2.0;
    }
  }
  return static_cast<double>(2.0L * total);
}

TResult pooled_t(const std::vector<double>& a, const std::vector<double>& b) {
  auto mean = [](const std::vector<double>& v) {
    long double s = 0;
    for (double x : v) s += x;
    return s / v.size();
  };
  auto sample_var = [&](const std::vector<double>& v) {
    const long double m = mean(v);
    long double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
  };
  const long double na = a.size(), nb = b.size();
  const long double sp2 = ((na - 1) * sample_var(a) + (nb - 1) * sample_var(b)) / (na + nb - 2);
  const long double t = (mean(a) - mean(b)) / std::sqrt(sp2 * (1 / na + 1 / nb));
  return {static_cast<double>(t), static_cast<double>(na + nb - 2)};
}

std::vector<double> zscores(const std::vector<double>& x) {
  long double s = 0;
  for (double v : x) s += v;
  const long double m = s / x.size();
  long double ss = 0;
  for (double v : x) ss += (v - m) * (v - m);
  const long double sd = std::sqrt(ss / x.size());
  std::vector<double> z;
  for (double v : x) z.push_back(static_cast<double>((v - m) / sd));
  return z;
}

}  // namespace oracle
