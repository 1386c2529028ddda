#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gist/corpus.hpp"
#include "gist/vectors.hpp"

namespace fixture {

namespace fs = std::filesystem;

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

void write_file(const fs::path& path, std::string_view contents);
std::string read_file(const fs::path& path);

// A synset for the WordNet writer; hypernyms name other synsets of the
// same part of speech.
struct WnSynset {
  std::string name;
  char pos;  // 'n' or 'v'
  std::vector<std::string> lemmas;
  std::vector<std::string> hypernyms;
  bool instance = false;  // use "@i" pointers
};

// Writes data.noun/index.noun (and the verb pair when verbs exist) in the
// WordNet database layout, with real byte offsets and a license header.
void write_wordnet(const fs::path& dir, const std::vector<WnSynset>& synsets);

// entity <- animal <- {dog, cat}; an asymmetric diamond whose "bottom"
// reaches the root in 2 or 3 edges; polysemous "bank"; verbs run/sprint
// sharing a synset under "move", and "sleep".
std::vector<WnSynset> mini_wordnet();

// Lexicon files: apple (610, 602) and theory (350, 300) on the MRC scale,
// the same words on the megahr 1..5 scale.
std::string mrc_lexicon_text();
std::string megahr_lexicon_text();

// Hand-built token with lemma = lower-cased surface.
gist::Token tok(std::string surface, gist::Pos pos = gist::Pos::Other);

// Synthetic two-group corpus in which "high" documents have higher
// PCREF/CoREF/PCDC/SMCAUSe and lower SMCAUSwn/PCCNC/WRDIMGc/WRDHYPnv values
// than "low" documents, under every variant.
struct SyntheticPaths {
  fs::path annotated;  // JSONL
  fs::path sidecar;    // text vectors
  fs::path wordnet;    // directory
  fs::path mrc;
  fs::path megahr;
};
SyntheticPaths write_synthetic(const fs::path& dir, std::size_t docs_per_group,
                               std::uint64_t seed);

}  // namespace fixture
