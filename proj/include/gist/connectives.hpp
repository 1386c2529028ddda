#pragma once

#include <cstddef>
#include <filesystem>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace gist {

// intra: cue inside one sentence ("A because B").
// inter: cue tying a sentence to the previous one ("A. Therefore, B").
enum class CueScope { Intra, Inter };

std::string_view to_string(CueScope scope) noexcept;

struct ConnectivePattern {
  std::string source;
  CueScope scope = CueScope::Intra;
  std::regex compiled;
};

struct ConnectiveMatch {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t pattern = 0;
};

class ConnectivePatternSet {
 public:
  struct Entry {
    CueScope scope;
    std::string pattern;
  };

  // Throws PatternCompileError naming the offending entry; an empty list is
  // a SchemaError.
  explicit ConnectivePatternSet(const std::vector<Entry>& entries);

  // data/causal_connectives.tsv, compiled into the library.
  static const ConnectivePatternSet& builtin();

  // Matches are case-insensitive and word-boundary anchored. Overlaps are
  // resolved longest-first (ties: earlier start, then earlier pattern), so
  // the result is non-overlapping and sorted by position.
  std::vector<ConnectiveMatch> find_all(std::string_view text) const;

  std::size_t size() const noexcept { return patterns_.size(); }
  const std::vector<ConnectivePattern>& patterns() const noexcept { return patterns_; }

 private:
  std::vector<ConnectivePattern> patterns_;
};

// "<scope>\t<regex>" per line; '#' starts a comment line.
ConnectivePatternSet load_patterns(const std::filesystem::path& path);
ConnectivePatternSet parse_patterns(std::string_view contents, std::string_view origin);

}  // namespace gist
