#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace gist {

class VectorStore;

// Coarse part of speech. Everything outside the four content classes is Other.
enum class Pos : std::uint8_t { Noun, Verb, Adj, Adv, Other };

std::string_view to_string(Pos pos) noexcept;
// Accepts the upper-case tag names NOUN, VERB, ADJ, ADV, OTHER.
std::optional<Pos> parse_pos(std::string_view tag) noexcept;

inline bool is_content(Pos pos) noexcept { return pos != Pos::Other; }

struct Token {
  std::string surface;
  std::string lemma;
  Pos pos = Pos::Other;
  std::optional<std::string> fine_pos;
  std::optional<std::string> vector_ref;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::optional<std::string> embedding_ref;
  std::size_t index_in_paragraph = 0;

  bool operator==(const Sentence&) const = default;
};

struct Paragraph {
  std::vector<Sentence> sentences;
  std::optional<std::uint32_t> coref_chain_count;

  bool operator==(const Paragraph&) const = default;
};

struct Document {
  std::string id;
  std::vector<Paragraph> paragraphs;
  std::optional<std::string> group_label;

  std::size_t sentence_count() const noexcept;
  std::size_t token_count() const noexcept;

  bool operator==(const Document&) const = default;
};

struct Provenance {
  std::string source;
  std::string parser;

  bool operator==(const Provenance&) const = default;
};

struct Corpus {
  std::vector<Document> documents;
  Provenance provenance;

  bool operator==(const Corpus&) const = default;
};

// Throws SchemaError when a document breaks the hierarchy invariants
// (empty paragraph/sentence lists, empty surfaces, sentence ordinals).
void validate(const Document& doc);
// Also checks that ids are unique.
void validate(const Corpus& corpus);

// Rule-based sentence splitter for raw text: terminal punctuation ends a
// sentence unless it belongs to a known abbreviation, an initial, or a
// dotted form such as "e.g.".
class SentenceSegmenter {
 public:
  // Entries use the abbreviation file syntax ("dr.", "etc.*").
  explicit SentenceSegmenter(const std::vector<std::string>& entries);

  // The list shipped in data/abbreviations.txt, compiled into the library.
  static const SentenceSegmenter& builtin();
  static SentenceSegmenter from_file(const std::filesystem::path& path);
  static SentenceSegmenter parse(std::string_view contents);

  // Punctuation becomes its own token; an abbreviation keeps its period.
  std::vector<std::string> tokenize(std::string_view text) const;
  std::vector<std::vector<std::string>> split(std::string_view paragraph) const;

  std::size_t abbreviation_count() const noexcept {
    return non_terminal_.size() + terminal_.size();
  }

 private:
  enum class AbbrevClass { None, NonTerminal, MayEndSentence };
  AbbrevClass classify(std::string_view word_with_period) const;

  std::unordered_set<std::string> non_terminal_;
  std::unordered_set<std::string> terminal_;
};

// Paragraphs are the non-blank lines of `raw` (every newline run is a
// paragraph break). Lemmas are lower-cased surfaces and POS is Other.
Document parse_plain_text(std::string_view raw, std::string id,
                          const SentenceSegmenter& segmenter = SentenceSegmenter::builtin());

// Reads every *.txt file under `dir`. A file inside a sub-directory takes the
// sub-directory name as its group label; the id is the relative path
// without extension. Documents are sorted by id.
Corpus load_raw_corpus(const std::filesystem::path& dir,
                       const SentenceSegmenter& segmenter = SentenceSegmenter::builtin());

// Annotated corpus records, see README "Annotated corpus format". When
// any embedding_ref/vector_ref is present, every ref must resolve in
// `sidecar`; a null sidecar makes every ref dangling.
Corpus load_annotated_corpus(const std::filesystem::path& path,
                             const VectorStore* sidecar = nullptr);
Corpus parse_annotated_corpus(std::string_view contents, std::string_view origin,
                              const VectorStore* sidecar = nullptr);
// One JSON record per line, in corpus order.
void write_annotated_corpus(const Corpus& corpus, std::ostream& out);

struct CorpusShape {
  std::size_t n_docs = 0;
  std::size_t n_paragraphs = 0;
  std::size_t n_sentences = 0;
  double sentences_per_paragraph = 0.0;
};

CorpusShape corpus_shape_stats(const Corpus& corpus);
CorpusShape corpus_shape_stats(const std::vector<const Document*>& docs);

}  // namespace gist
