#include "gist/corpus.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <set>

#include "builtin_data.hpp"
#include "gist/error.hpp"
#include "gist/vectors.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace gist {

using detail::to_lower_ascii;
using detail::trim;

std::string_view to_string(Pos pos) noexcept {
  switch (pos) {
    case Pos::Noun: return "NOUN";
    case Pos::Verb: return "VERB";
    case Pos::Adj: return "ADJ";
    case Pos::Adv: return "ADV";
    case Pos::Other: return "OTHER";
  }
  return "OTHER";
}

std::optional<Pos> parse_pos(std::string_view tag) noexcept {
  if (tag == "NOUN") return Pos::Noun;
  if (tag == "VERB") return Pos::Verb;
  if (tag == "ADJ") return Pos::Adj;
  if (tag == "ADV") return Pos::Adv;
  if (tag == "OTHER") return Pos::Other;
  return std::nullopt;
}

std::size_t Document::sentence_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : paragraphs) n += p.sentences.size();
  return n;
}

std::size_t Document::token_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : paragraphs)
    for (const auto& s : p.sentences) n += s.tokens.size();
  return n;
}

void validate(const Document& doc) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::SchemaError, "document '" + doc.id + "': " + what);
  };
  if (doc.id.empty()) fail("empty id");
  if (doc.paragraphs.empty()) fail("no paragraphs");
  for (std::size_t p = 0; p < doc.paragraphs.size(); ++p) {
    const auto& para = doc.paragraphs[p];
    if (para.sentences.empty()) fail("paragraph " + std::to_string(p) + " has no sentences");
    for (std::size_t s = 0; s < para.sentences.size(); ++s) {
      const auto& sent = para.sentences[s];
      if (sent.tokens.empty()) {
        fail("paragraph " + std::to_string(p) + " sentence " + std::to_string(s) +
             " has no tokens");
      }
      if (sent.index_in_paragraph != s) {
        fail("paragraph " + std::to_string(p) + " sentence " + std::to_string(s) +
             " has index_in_paragraph " + std::to_string(sent.index_in_paragraph));
      }
      for (const auto& tok : sent.tokens) {
        if (tok.surface.empty()) fail("empty token surface");
      }
    }
  }
}

void validate(const Corpus& corpus) {
  std::set<std::string_view> seen;
  for (const auto& doc : corpus.documents) {
    validate(doc);
    if (!seen.insert(doc.id).second) {
      throw Error(ErrorKind::SchemaError, "duplicate document id '" + doc.id + "'");
    }
  }
}

// ---------------------------------------------------------------------------
// Segmentation

namespace {

enum class Role { Word, Open, Close, Terminal, Other };

struct RawToken {
  std::string text;
  Role role;
};

constexpr std::string_view kLeftDoubleQuote = "\xE2\x80\x9C";
constexpr std::string_view kLeftSingleQuote = "\xE2\x80\x98";
constexpr std::string_view kRightDoubleQuote = "\xE2\x80\x9D";
constexpr std::string_view kRightSingleQuote = "\xE2\x80\x99";
constexpr std::string_view kEllipsis = "\xE2\x80\xA6";

std::size_t opening_len(std::string_view s) noexcept {
  if (s.empty()) return 0;
  switch (s.front()) {
    case '"': case '\'': case '(': case '[': case '{': return 1;
    default: break;
  }
  if (s.starts_with(kLeftDoubleQuote) || s.starts_with(kLeftSingleQuote)) return 3;
  return 0;
}

// Length and role of the punctuation character ending `s`, if any.
std::pair<std::size_t, Role> closing(std::string_view s) noexcept {
  if (s.empty()) return {0, Role::Other};
  switch (s.back()) {
    case '.': case '!': case '?': return {1, Role::Terminal};
    case ',': case ';': case ':': return {1, Role::Other};
    case '"': case '\'': case ')': case ']': case '}': return {1, Role::Close};
    default: break;
  }
  if (s.ends_with(kEllipsis)) return {3, Role::Terminal};
  if (s.ends_with(kRightDoubleQuote) || s.ends_with(kRightSingleQuote)) return {3, Role::Close};
  return {0, Role::Other};
}

bool is_upper(char c) noexcept { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) noexcept { return c >= 'a' && c <= 'z'; }
bool is_alpha(char c) noexcept { return is_upper(c) || is_lower(c); }
bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

bool starts_sentence(const RawToken& tok) noexcept {
  if (tok.role == Role::Open) return true;
  if (tok.role != Role::Word || tok.text.empty()) return false;
  const char c = tok.text.front();
  if (is_lower(c)) return false;
  return is_upper(c) || is_digit(c) || static_cast<unsigned char>(c) >= 0x80;
}

}  // namespace

SentenceSegmenter::SentenceSegmenter(const std::vector<std::string>& entries) {
  for (const auto& raw : entries) {
    std::string entry = to_lower_ascii(trim(raw));
    if (entry.empty() || entry.front() == '#') continue;
    if (entry.back() == '*') {
      entry.pop_back();
      terminal_.insert(entry);
    } else {
      non_terminal_.insert(entry);
    }
  }
}

SentenceSegmenter SentenceSegmenter::parse(std::string_view contents) {
  std::vector<std::string> entries;
  for (auto line : detail::split_lines(contents)) entries.emplace_back(line);
  return SentenceSegmenter(entries);
}

SentenceSegmenter SentenceSegmenter::from_file(const std::filesystem::path& path) {
  return parse(detail::read_file(path, "abbreviation list"));
}

const SentenceSegmenter& SentenceSegmenter::builtin() {
  static const SentenceSegmenter instance = parse(detail::builtin_abbreviations());
  return instance;
}

SentenceSegmenter::AbbrevClass SentenceSegmenter::classify(std::string_view word) const {
  if (word.size() < 2 || word.back() != '.') return AbbrevClass::None;
  const std::string lower = to_lower_ascii(word);
  if (non_terminal_.contains(lower)) return AbbrevClass::NonTerminal;
  if (terminal_.contains(lower)) return AbbrevClass::MayEndSentence;

  const std::string_view stem = word.substr(0, word.size() - 1);
  // Initials such as "J." ("I." is far more often the pronoun).
  if (stem.size() == 1 && is_upper(stem[0]) && stem[0] != 'I') return AbbrevClass::NonTerminal;
  // Dotted forms: "e.g", "U.S", "Ph.D" -- short alphabetic segments.
  if (stem.find('.') != std::string_view::npos) {
    for (auto seg : detail::split_char(stem, '.')) {
      if (seg.empty() || seg.size() > 3) return AbbrevClass::None;
      if (!std::all_of(seg.begin(), seg.end(), is_alpha)) return AbbrevClass::None;
    }
    return AbbrevClass::NonTerminal;
  }
  return AbbrevClass::None;
}

namespace {

std::vector<RawToken> tokenize_raw(std::string_view text,
                                   const auto& classify_abbrev) {
  std::vector<RawToken> out;
  for (std::string_view chunk : detail::split_ws(text)) {
    while (std::size_t n = opening_len(chunk)) {
      out.push_back({std::string(chunk.substr(0, n)), Role::Open});
      chunk.remove_prefix(n);
    }
    std::vector<RawToken> trail;
    while (!chunk.empty()) {
      auto [n, role] = closing(chunk);
      if (n == 0) break;
      std::string piece(chunk.substr(chunk.size() - n));
      chunk.remove_suffix(n);
      // Pieces arrive back to front; runs of terminal marks form one token.
      if (role == Role::Terminal && !trail.empty() && trail.back().role == Role::Terminal) {
        trail.back().text.insert(0, piece);
      } else {
        trail.push_back({std::move(piece), role});
      }
    }
    std::reverse(trail.begin(), trail.end());

    std::string core(chunk);
    if (!core.empty() && !trail.empty() && trail.front().text == "." &&
        classify_abbrev(core + ".")) {
      core += '.';
      trail.erase(trail.begin());
    }
    if (!core.empty()) out.push_back({std::move(core), Role::Word});
    for (auto& t : trail) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

std::vector<std::string> SentenceSegmenter::tokenize(std::string_view text) const {
  auto raw = tokenize_raw(text, [this](std::string_view w) {
    return classify(w) != AbbrevClass::None;
  });
  std::vector<std::string> out;
  out.reserve(raw.size());
  for (auto& t : raw) out.push_back(std::move(t.text));
  return out;
}

std::vector<std::vector<std::string>> SentenceSegmenter::split(std::string_view paragraph) const {
  const auto raw = tokenize_raw(paragraph, [this](std::string_view w) {
    return classify(w) != AbbrevClass::None;
  });
  std::vector<std::vector<std::string>> sentences;
  std::vector<std::string> current;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const RawToken& tok = raw[i];
    current.push_back(tok.text);

    bool may_end = tok.role == Role::Terminal;
    bool needs_capital = false;
    if (tok.role == Role::Word && classify(tok.text) == AbbrevClass::MayEndSentence) {
      may_end = true;
      needs_capital = true;
    }
    if (!may_end) continue;

    std::size_t j = i + 1;
    while (j < raw.size() && raw[j].role == Role::Close) current.push_back(raw[j++].text);
    i = j - 1;
    if (j >= raw.size()) break;

    const bool boundary = needs_capital
                              ? raw[j].role == Role::Word && is_upper(raw[j].text.front())
                              : starts_sentence(raw[j]);
    if (boundary) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

Document parse_plain_text(std::string_view raw, std::string id,
                          const SentenceSegmenter& segmenter) {
  Document doc;
  doc.id = std::move(id);
  for (std::string_view line : detail::split_lines(raw)) {
    line = trim(line);
    if (line.empty()) continue;
    Paragraph para;
    for (auto& words : segmenter.split(line)) {
      Sentence sent;
      sent.index_in_paragraph = para.sentences.size();
      sent.tokens.reserve(words.size());
      for (auto& w : words) {
        Token tok;
        tok.lemma = to_lower_ascii(w);
        tok.surface = std::move(w);
        sent.tokens.push_back(std::move(tok));
      }
      para.sentences.push_back(std::move(sent));
    }
    doc.paragraphs.push_back(std::move(para));
  }
  if (doc.paragraphs.empty()) {
    throw Error(ErrorKind::EmptyDocument, "document '" + doc.id + "' has no text");
  }
  return doc;
}

Corpus load_raw_corpus(const std::filesystem::path& dir, const SentenceSegmenter& segmenter) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorKind::IoError, "corpus directory '" + dir.string() + "' not found");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  Corpus corpus;
  corpus.provenance = {dir.string(), "plain-text"};
  for (const auto& file : files) {
    const fs::path rel = fs::relative(file, dir);
    std::string id = (rel.parent_path() / rel.stem()).generic_string();
    Document doc = parse_plain_text(detail::read_file(file, "document"), id, segmenter);
    if (rel.has_parent_path()) doc.group_label = rel.parent_path().filename().string();
    corpus.documents.push_back(std::move(doc));
  }
  std::sort(corpus.documents.begin(), corpus.documents.end(),
            [](const Document& a, const Document& b) { return a.id < b.id; });
  validate(corpus);
  return corpus;
}

// ---------------------------------------------------------------------------
// Annotated records

namespace {

using nlohmann::json;

class RecordReader {
 public:
  RecordReader(std::string location, const VectorStore* sidecar)
      : location_(std::move(location)), sidecar_(sidecar) {}

  Document read(const json& rec) {
    if (!rec.is_object()) fail("", "record is not an object");
    Document doc;
    doc.id = required_string(rec, "id", "");
    if (doc.id.empty()) fail("id", "empty id");
    if (auto g = optional_string(rec, "group", "")) doc.group_label = *g;

    const json& paras = required(rec, "paragraphs", "");
    if (!paras.is_array() || paras.empty()) fail("paragraphs", "expected a non-empty array");
    for (std::size_t p = 0; p < paras.size(); ++p) {
      doc.paragraphs.push_back(read_paragraph(paras[p], "paragraphs[" + std::to_string(p) + "]"));
    }
    return doc;
  }

 private:
  [[noreturn]] void fail(const std::string& path, const std::string& what,
                         ErrorKind kind = ErrorKind::SchemaError) const {
    throw Error(kind, location_ + (path.empty() ? "" : ": " + path) + ": " + what);
  }

  const json& required(const json& obj, const char* key, const std::string& path) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
    return *it;
  }

  std::string required_string(const json& obj, const char* key, const std::string& path) const {
    const json& v = required(obj, key, path);
    if (!v.is_string()) fail(path, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
  }

  std::optional<std::string> optional_string(const json& obj, const char* key,
                                             const std::string& path) const {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) fail(path, std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
  }

  std::optional<std::uint32_t> optional_count(const json& obj, const char* key,
                                              const std::string& path) const {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0 ||
        it->get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max()) {
      fail(path, std::string("field '") + key + "' must be a non-negative integer");
    }
    return static_cast<std::uint32_t>(it->get<std::int64_t>());
  }

  void check_ref(const std::string& ref, const std::string& path) const {
    if (sidecar_ == nullptr || !sidecar_->contains(ref)) {
      fail(path, "embedding ref '" + ref + "' has no sidecar entry",
           ErrorKind::DanglingEmbeddingRef);
    }
  }

  Paragraph read_paragraph(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail(path, "paragraph is not an object");
    Paragraph para;
    para.coref_chain_count = optional_count(obj, "coref_chains", path);
    const json& sents = required(obj, "sentences", path);
    if (!sents.is_array() || sents.empty()) fail(path + ".sentences", "expected a non-empty array");
    if (auto declared = optional_count(obj, "sentence_count", path);
        declared && *declared != sents.size()) {
      fail(path, "declares " + std::to_string(*declared) + " sentences but lists " +
                     std::to_string(sents.size()));
    }
    for (std::size_t s = 0; s < sents.size(); ++s) {
      const std::string spath = path + ".sentences[" + std::to_string(s) + "]";
      const json& sobj = sents[s];
      if (!sobj.is_object()) fail(spath, "sentence is not an object");
      Sentence sent;
      sent.index_in_paragraph = s;
      sent.embedding_ref = optional_string(sobj, "embedding_ref", spath);
      if (sent.embedding_ref) check_ref(*sent.embedding_ref, spath);
      const json& toks = required(sobj, "tokens", spath);
      if (!toks.is_array() || toks.empty()) fail(spath + ".tokens", "expected a non-empty array");
      for (std::size_t t = 0; t < toks.size(); ++t) {
        sent.tokens.push_back(read_token(toks[t], spath + ".tokens[" + std::to_string(t) + "]"));
      }
      para.sentences.push_back(std::move(sent));
    }
    return para;
  }

  Token read_token(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail(path, "token is not an object");
    Token tok;
    tok.surface = required_string(obj, "surface", path);
    if (tok.surface.empty()) fail(path, "empty surface");
    tok.lemma = required_string(obj, "lemma", path);
    const std::string tag = required_string(obj, "pos", path);
    auto pos = parse_pos(tag);
    if (!pos) fail(path, "unknown pos '" + tag + "'");
    tok.pos = *pos;
    tok.fine_pos = optional_string(obj, "fine_pos", path);
    tok.vector_ref = optional_string(obj, "vector_ref", path);
    if (tok.vector_ref) check_ref(*tok.vector_ref, path);
    return tok;
  }

  std::string location_;
  const VectorStore* sidecar_;
};

bool is_metadata_record(const json& rec) {
  return rec.is_object() && !rec.contains("id") && rec.contains("provenance");
}

}  // namespace

Corpus parse_annotated_corpus(std::string_view contents, std::string_view origin,
                              const VectorStore* sidecar) {
  Corpus corpus;
  corpus.provenance = {std::string(origin), "annotated-records"};
  const std::string_view body = trim(contents);
  if (body.empty()) {
    throw Error(ErrorKind::SchemaError, std::string(origin) + ": no records");
  }

  auto read_array = [&](const json& arr, const std::string& prefix) {
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (is_metadata_record(arr[i])) continue;
      RecordReader reader(std::string(origin) + ": " + prefix + "[" + std::to_string(i) + "]",
                          sidecar);
      corpus.documents.push_back(reader.read(arr[i]));
    }
  };

  // A single structured document is either an array of records or an object
  // with a "documents" array; anything else is read as one record per line.
  json whole = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (!whole.is_discarded() && whole.is_array()) {
    read_array(whole, "records");
  } else if (!whole.is_discarded() && whole.is_object() && whole.contains("documents")) {
    if (!whole["documents"].is_array()) {
      throw Error(ErrorKind::SchemaError, std::string(origin) + ": 'documents' must be an array");
    }
    read_array(whole["documents"], "documents");
  } else {
    auto lines = detail::split_lines(contents);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string_view line = trim(lines[i]);
      if (line.empty()) continue;
      const std::string where = std::string(origin) + ":" + std::to_string(i + 1);
      json rec;
      try {
        rec = json::parse(line);
      } catch (const json::parse_error& e) {
        throw Error(ErrorKind::SchemaError, where + ": " + e.what());
      }
      if (is_metadata_record(rec)) continue;
      RecordReader reader(where, sidecar);
      corpus.documents.push_back(reader.read(rec));
    }
  }
  if (corpus.documents.empty()) {
    throw Error(ErrorKind::SchemaError, std::string(origin) + ": no document records");
  }
  validate(corpus);
  return corpus;
}

Corpus load_annotated_corpus(const std::filesystem::path& path, const VectorStore* sidecar) {
  return parse_annotated_corpus(detail::read_file(path, "annotated corpus"), path.string(),
                                sidecar);
}

void write_annotated_corpus(const Corpus& corpus, std::ostream& out) {
  using ojson = nlohmann::ordered_json;
  for (const auto& doc : corpus.documents) {
    ojson rec;
    rec["id"] = doc.id;
    if (doc.group_label) rec["group"] = *doc.group_label;
    ojson paras = ojson::array();
    for (const auto& para : doc.paragraphs) {
      ojson p;
      if (para.coref_chain_count) p["coref_chains"] = *para.coref_chain_count;
      ojson sents = ojson::array();
      for (const auto& sent : para.sentences) {
        ojson s;
        if (sent.embedding_ref) s["embedding_ref"] = *sent.embedding_ref;
        ojson toks = ojson::array();
        for (const auto& tok : sent.tokens) {
          ojson t;
          t["surface"] = tok.surface;
          t["lemma"] = tok.lemma;
          t["pos"] = std::string(to_string(tok.pos));
          if (tok.fine_pos) t["fine_pos"] = *tok.fine_pos;
          if (tok.vector_ref) t["vector_ref"] = *tok.vector_ref;
          toks.push_back(std::move(t));
        }
        s["tokens"] = std::move(toks);
        sents.push_back(std::move(s));
      }
      p["sentences"] = std::move(sents);
      paras.push_back(std::move(p));
    }
    rec["paragraphs"] = std::move(paras);
    out << rec.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------

CorpusShape corpus_shape_stats(const std::vector<const Document*>& docs) {
  CorpusShape shape;
  shape.n_docs = docs.size();
  for (const Document* doc : docs) {
    shape.n_paragraphs += doc->paragraphs.size();
    shape.n_sentences += doc->sentence_count();
  }
  if (shape.n_paragraphs > 0) {
    shape.sentences_per_paragraph =
        static_cast<double>(shape.n_sentences) / static_cast<double>(shape.n_paragraphs);
  }
  return shape;
}

CorpusShape corpus_shape_stats(const Corpus& corpus) {
  std::vector<const Document*> docs;
  docs.reserve(corpus.documents.size());
  for (const auto& d : corpus.documents) docs.push_back(&d);
  return corpus_shape_stats(docs);
}

}  // namespace gist
