#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gist/corpus.hpp"

namespace gist {

enum class LexiconSource { Mrc, Megahr };

std::string_view to_string(LexiconSource source) noexcept;
std::optional<LexiconSource> parse_lexicon_source(std::string_view name) noexcept;

struct WordNorms {
  double concreteness = 0.0;
  double imageability = 0.0;

  bool operator==(const WordNorms&) const = default;
};

struct ValueRange {
  double min = 0.0;
  double max = 0.0;
};

// Native-scale range used when the file does not declare one:
// MRC ratings run 100..700, megahr predictions 1..5.
ValueRange default_range(LexiconSource source) noexcept;

// Concreteness/imageability norms keyed by lower-cased word and optional POS.
class PsycholinguisticLexicon {
 public:
  PsycholinguisticLexicon(LexiconSource source, ValueRange range);

  // Throws SchemaError when a value is outside the declared range or the
  // (word, pos) entry repeats.
  void add(std::string_view word, std::optional<Pos> pos, WordNorms norms);

  // mrc: (word, pos), then word alone; megahr: word alone. Each source tries
  // the lower-cased surface first and the lemma second.
  std::optional<WordNorms> lookup(const Token& token) const;

  LexiconSource source() const noexcept { return source_; }
  ValueRange range() const noexcept { return range_; }
  std::size_t size() const noexcept { return size_; }

 private:
  std::optional<WordNorms> lookup_word(const std::string& word, Pos pos) const;

  LexiconSource source_;
  ValueRange range_;
  // Per word: the POS-less entry (if any) and tagged entries in file order.
  struct Entry {
    std::optional<WordNorms> untagged;
    std::vector<std::pair<Pos, WordNorms>> tagged;
  };
  std::map<std::string, Entry, std::less<>> entries_;
  std::size_t size_ = 0;
};

// TSV with header "word<TAB>[pos<TAB>]concreteness<TAB>imageability".
// Comment lines start with '#'; "# range <min> <max>" declares the value
// range. An empty or "-" pos cell means the entry has no POS.
PsycholinguisticLexicon load_lexicon(const std::filesystem::path& path, LexiconSource source);
PsycholinguisticLexicon parse_lexicon(std::string_view contents, std::string_view origin,
                                      LexiconSource source);

}  // namespace gist
