#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gist/corpus.hpp"

namespace gist {

// A synset is identified by its data-file offset together with its part of
// speech; offsets are only unique within one data.<pos> file.
struct SynsetId {
  std::uint32_t offset = 0;
  Pos pos = Pos::Noun;

  auto operator<=>(const SynsetId&) const = default;
  // "02084071-n"
  std::string str() const;
};

struct Synset {
  SynsetId id;
  std::vector<std::string> lemmas;
  // Hypernym and instance-hypernym targets.
  std::vector<SynsetId> hypernyms;
};

class WordNetDb {
 public:
  using LemmaIndex = std::map<std::pair<std::string, Pos>, std::vector<SynsetId>>;

  // Links the graph and checks the invariants: every indexed or pointed-to
  // synset exists (ParseError otherwise) and hypernymy is acyclic
  // (CycleError naming a synset on the cycle).
  WordNetDb(std::vector<Synset> synsets, LemmaIndex lemma_index);

  const Synset* find(SynsetId id) const;
  // Lemmas are matched lower-cased with spaces as underscores.
  std::span<const SynsetId> synsets_of(std::string_view lemma, Pos pos) const;

  // Edges on the shortest hypernym chain from `id` to any root.
  // Throws UnknownSynset.
  unsigned hypernym_path_length(SynsetId id) const;

  // True iff the synset sets of the two lemmas intersect.
  bool same_synset(std::string_view lemma_a, std::string_view lemma_b, Pos pos) const;

  std::size_t synset_count() const noexcept { return synsets_.size(); }
  std::size_t synset_count(Pos pos) const;
  std::size_t hypernym_edge_count() const noexcept;
  std::span<const Synset> synsets() const noexcept { return synsets_; }

 private:
  std::size_t slot(SynsetId id) const;

  std::vector<Synset> synsets_;
  std::map<SynsetId, std::size_t> slot_of_;
  LemmaIndex lemma_index_;
  std::vector<unsigned> depth_;
};

std::string normalize_lemma(std::string_view lemma);

// Reads index.<pos> and data.<pos> for noun, verb, adj and adv (files that
// are absent are skipped; at least one data/index pair must exist).
//
// Accepted data-file line grammar (fields separated by single spaces):
//   offset lex_filenum ss_type w_cnt {word lex_id}*w_cnt p_cnt
//          {pointer_symbol target_offset pos source_target}*p_cnt
//          [f_cnt {+ f_num w_num}*f_cnt] | gloss
// where offset is 8 decimal digits, w_cnt and lex_id are hexadecimal,
// p_cnt is 3 decimal digits, and source_target is 4 hexadecimal digits.
// The offset field is taken as the synset key; it is not checked against
// the byte position of the line. Hypernym pointers are "@" and "@i".
// Index-file line grammar:
//   lemma pos synset_cnt p_cnt {ptr_symbol}*p_cnt sense_cnt tagsense_cnt
//         {synset_offset}*synset_cnt
// Lines starting with a space (the license header) are ignored in both.
WordNetDb load_wordnet(const std::filesystem::path& dir);

}  // namespace gist
