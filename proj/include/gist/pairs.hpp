#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace gist {

enum class Locality { Local, Global };
enum class ParagraphMode { Respect, Ignore };

// How unit pairs are formed for a pairwise index.
//   Adjacent            _1   consecutive units, paragraph boundaries crossed
//   AllPairs            _a   every unordered pair in the document
//   AdjacentInParagraph _1p  consecutive units inside each paragraph
//   AllPairsInParagraph _ap  every unordered pair inside each paragraph
enum class Scheme { Adjacent, AllPairs, AdjacentInParagraph, AllPairsInParagraph };

inline constexpr std::array<Scheme, 4> kAllSchemes = {
    Scheme::Adjacent, Scheme::AllPairs, Scheme::AdjacentInParagraph, Scheme::AllPairsInParagraph};

constexpr Locality locality(Scheme s) noexcept {
  return (s == Scheme::Adjacent || s == Scheme::AdjacentInParagraph) ? Locality::Local
                                                                     : Locality::Global;
}
constexpr ParagraphMode paragraph_mode(Scheme s) noexcept {
  return (s == Scheme::Adjacent || s == Scheme::AllPairs) ? ParagraphMode::Ignore
                                                          : ParagraphMode::Respect;
}
constexpr Scheme make_scheme(Locality l, ParagraphMode m) noexcept {
  if (m == ParagraphMode::Ignore) return l == Locality::Local ? Scheme::Adjacent : Scheme::AllPairs;
  return l == Locality::Local ? Scheme::AdjacentInParagraph : Scheme::AllPairsInParagraph;
}

// "1", "a", "1p", "ap"
std::string_view postfix(Scheme s) noexcept;
std::optional<Scheme> scheme_from_postfix(std::string_view p) noexcept;

// Indices into the flattened unit sequence, first < second.
struct UnitPair {
  std::size_t first = 0;
  std::size_t second = 0;

  bool operator==(const UnitPair&) const = default;
};

// `group_sizes[i]` is the number of units in paragraph i (zero allowed).
// Pairs come out in document order. Throws NoPairs when the scheme yields none.
std::vector<UnitPair> enumerate_pairs(std::span<const std::size_t> group_sizes, Scheme scheme);

// Score of a pair of flattened unit indices; nullopt when undefined.
using PairScoreFn = std::function<std::optional<double>(std::size_t, std::size_t)>;

struct AggregateResult {
  double mean = 0.0;
  std::size_t pairs = 0;    // pairs enumerated
  std::size_t skipped = 0;  // pairs whose score was undefined
};

// Mean of `score` over the enumerated pairs, skipping undefined scores.
// Throws NoPairs, or MissingResource when every pair was skipped.
AggregateResult aggregate(std::span<const std::size_t> group_sizes, Scheme scheme,
                          const PairScoreFn& score);

}  // namespace gist
