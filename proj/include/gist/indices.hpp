#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "gist/corpus.hpp"
#include "gist/error.hpp"
#include "gist/lexicon.hpp"
#include "gist/pairs.hpp"

namespace gist {

class VectorStore;
class WordNetDb;
class ConnectivePatternSet;

// Every index variant the engine computes; the names double as CSV columns.
enum class Variant {
  PCREF_1, PCREF_a, PCREF_1p, PCREF_ap,
  CoREF,
  PCDC,
  SMCAUSe_1, SMCAUSe_a, SMCAUSe_1p, SMCAUSe_ap,
  SMCAUSwn_1, SMCAUSwn_a, SMCAUSwn_1p, SMCAUSwn_ap,
  PCCNC_mrc, PCCNC_megahr,
  WRDIMGc_mrc, WRDIMGc_megahr,
  WRDHYPnv,
};

inline constexpr std::size_t kVariantCount = 19;
extern const std::array<Variant, kVariantCount> kAllVariants;

std::string_view to_string(Variant v) noexcept;
std::optional<Variant> parse_variant(std::string_view name) noexcept;

Variant pcref_variant(Scheme s) noexcept;
Variant smcause_variant(Scheme s) noexcept;
Variant smcauswn_variant(Scheme s) noexcept;
Variant pccnc_variant(LexiconSource s) noexcept;
Variant wrdimgc_variant(LexiconSource s) noexcept;

// Read-only resources shared by all documents; any may be absent, in which
// case the variants needing it report MissingResource.
struct Resources {
  const VectorStore* word_vectors = nullptr;  // static backend, keyed by word form
  const VectorStore* sidecar = nullptr;       // contextual vectors keyed by refs
  const WordNetDb* wordnet = nullptr;
  const PsycholinguisticLexicon* mrc = nullptr;
  const PsycholinguisticLexicon* megahr = nullptr;
  const ConnectivePatternSet* connectives = nullptr;
};

// SMCAUSwn denominator: the document's sentence count, or the number of
// enumerated verb pairs (a plain mean, comparable with the other indices).
enum class SynsetOverlapNorm { BySentences, ByPairs };

struct IndexConfig {
  std::set<Variant> enabled{kAllVariants.begin(), kAllVariants.end()};
  SynsetOverlapNorm synset_overlap_norm = SynsetOverlapNorm::BySentences;
  // Verb lemmas (lower-case) excluded from both verb-overlap indices.
  std::set<std::string, std::less<>> verb_stoplist;
};

// One index value plus the bookkeeping behind it.
struct Measurement {
  double value = 0.0;
  std::size_t units = 0;    // sentences / verbs / tokens considered
  std::size_t matched = 0;  // units with a resolvable resource
  std::size_t pairs = 0;
  std::size_t skipped = 0;  // pairs without a score
};

struct VariantDiagnostic {
  std::optional<ErrorKind> error;
  std::string message;
  Measurement detail;
};

struct IndexVector {
  std::string doc_id;
  std::optional<std::string> group_label;
  std::map<Variant, double> values;
  std::map<Variant, VariantDiagnostic> diagnostics;

  std::optional<double> get(Variant v) const;
};

// Sentence cohesion: mean cosine between sentence embeddings. A sentence's
// embedding is its sidecar vector when its ref resolves, else the mean of
// its in-vocabulary static token vectors.
Measurement pcref(const Document& doc, Scheme scheme, const Resources& res);

// Mean over paragraphs of coreference chains per sentence.
Measurement coref_index(const Document& doc);

// Causal connective matches per sentence.
Measurement pcdc(const Document& doc, const ConnectivePatternSet& patterns);

// Mean cosine between verb vectors, verbs paired per scheme in document
// order and grouped by paragraph. A verb's vector is its sidecar vector
// when its ref resolves, else the static vector of its surface or lemma.
Measurement smcause_embeddings(const Document& doc, Scheme scheme, const Resources& res,
                               const IndexConfig& cfg = {});

// Verb pairs sharing a WordNet verb synset, divided by the sentence count
// (or by the pair count under SynsetOverlapNorm::ByPairs).
Measurement smcause_wordnet(const Document& doc, Scheme scheme, const WordNetDb& db,
                            const IndexConfig& cfg = {});

struct ConcretenessImageability {
  Measurement concreteness;
  Measurement imageability;
};

// Mean ratings over content-word tokens found in the lexicon.
ConcretenessImageability concreteness_imageability(const Document& doc,
                                                   const PsycholinguisticLexicon& lex);

// Mean over noun/verb tokens of the mean hypernym depth of their synsets.
Measurement hypernymy_nouns_verbs(const Document& doc, const WordNetDb& db);

// Runs every enabled variant; failures land in `diagnostics` instead of
// aborting the document.
IndexVector compute_index_vector(const Document& doc, const Resources& res,
                                 const IndexConfig& cfg = {});

}  // namespace gist
