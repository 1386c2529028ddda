#include "gist/pairs.hpp"

#include <numeric>
#include <string>

#include "gist/error.hpp"

namespace gist {

std::string_view postfix(Scheme s) noexcept {
  switch (s) {
    case Scheme::Adjacent: return "1";
    case Scheme::AllPairs: return "a";
    case Scheme::AdjacentInParagraph: return "1p";
    case Scheme::AllPairsInParagraph: return "ap";
  }
  return "?";
}

std::optional<Scheme> scheme_from_postfix(std::string_view p) noexcept {
  if (!p.empty() && p.front() == '_') p.remove_prefix(1);
  for (Scheme s : kAllSchemes) {
    if (postfix(s) == p) return s;
  }
  return std::nullopt;
}

namespace {

void emit_range(std::size_t begin, std::size_t end, Locality loc, std::vector<UnitPair>& out) {
  if (end - begin < 2) return;
  if (loc == Locality::Local) {
    for (std::size_t i = begin; i + 1 < end; ++i) out.push_back({i, i + 1});
  } else {
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = i + 1; j < end; ++j) out.push_back({i, j});
  }
}

}  // namespace

std::vector<UnitPair> enumerate_pairs(std::span<const std::size_t> group_sizes, Scheme scheme) {
  const std::size_t total = std::accumulate(group_sizes.begin(), group_sizes.end(), std::size_t{0});
  std::vector<UnitPair> out;
  if (paragraph_mode(scheme) == ParagraphMode::Ignore) {
    emit_range(0, total, locality(scheme), out);
  } else {
    std::size_t begin = 0;
    for (std::size_t n : group_sizes) {
      emit_range(begin, begin + n, locality(scheme), out);
      begin += n;
    }
  }
  if (out.empty()) {
    throw Error(ErrorKind::NoPairs, std::to_string(total) + " unit(s) in " +
                                        std::to_string(group_sizes.size()) +
                                        " group(s) give no pairs under _" +
                                        std::string(postfix(scheme)));
  }
  return out;
}

AggregateResult aggregate(std::span<const std::size_t> group_sizes, Scheme scheme,
                          const PairScoreFn& score) {
  const auto pairs = enumerate_pairs(group_sizes, scheme);
  AggregateResult r;
  r.pairs = pairs.size();
  double sum = 0.0;
  std::size_t used = 0;
  for (const auto& p : pairs) {
    if (auto v = score(p.first, p.second)) {
      sum += *v;
      ++used;
    } else {
      ++r.skipped;
    }
  }
  if (used == 0) {
    throw Error(ErrorKind::MissingResource,
                "all " + std::to_string(r.pairs) + " pairs lack a score");
  }
  r.mean = sum / static_cast<double>(used);
  return r;
}

}  // namespace gist
