#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "gist/corpus.hpp"
#include "gist/error.hpp"
#include "gist/vectors.hpp"

using namespace gist;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no gist::Error thrown");
  return ErrorKind::IoError;
}

std::string strip_ws(std::string_view s) {
  std::string out;
  for (char c : s)
    if (c != ' ' && c != '\n' && c != '\t' && c != '\r') out += c;
  return out;
}

struct SegCase {
  std::string text;
  std::vector<std::string> sentences;
};

std::vector<SegCase> load_segmentation_cases() {
  const std::string body = fixture::read_file(std::string(GIST_FIXTURE_DIR) + "/segmentation.txt");
  std::vector<SegCase> cases;
  std::istringstream in(body);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("> ", 0) == 0) {
      cases.push_back({line.substr(2), {}});
    } else if (!line.empty() && line[0] != '#' && !cases.empty()) {
      cases.back().sentences.push_back(line);
    }
  }
  return cases;
}

// JSONL: one record per line.
const std::string kAnnotated =
    R"({"provenance": {"tool": "fixture"}})"
    "\n"
    R"({"id": "d1", "group": "high", "paragraphs": [)"
    R"({"coref_chains": 1, "sentences": [)"
    R"({"embedding_ref": "d1.s0", "tokens": [)"
    R"({"surface": "Dogs", "lemma": "dog", "pos": "NOUN", "fine_pos": "NNS", "vector_ref": "d1.t0"},)"
    R"({"surface": "run", "lemma": "run", "pos": "VERB"}]}]},)"
    R"({"sentences": [)"
    R"({"tokens": [{"surface": "Cats", "lemma": "cat", "pos": "NOUN"}]},)"
    R"({"tokens": [{"surface": "sleep", "lemma": "sleep", "pos": "VERB"}]}]}]})"
    "\n";
VectorStore annotated_sidecar() {
  VectorStore s(2);
  const float a[] = {1.0f, 0.0f};
  s.add("d1.s0", a);
  s.add("d1.t0", a);
  return s;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("hand-segmented fixture") {
    const auto cases = load_segmentation_cases();
    std::size_t total = 0;
    const auto& seg = SentenceSegmenter::builtin();
    for (const auto& c : cases) {
      CAPTURE(c.text);
      std::vector<std::vector<std::string>> want;
      for (const auto& s : c.sentences) want.push_back(seg.tokenize(s));
      CHECK(seg.split(c.text) == want);
      total += c.sentences.size();
    }
    CHECK(total >= 50);
  }

  TEST_CASE("tokenization policy") {
    const auto& seg = SentenceSegmenter::builtin();
    using V = std::vector<std::string>;
    CHECK(seg.tokenize("Hello.") == V{"Hello", "."});
    CHECK(seg.tokenize("(see Dr. Who), e.g. now!?") ==
          V{"(", "see", "Dr.", "Who", ")", ",", "e.g.", "now", "!?"});
    CHECK(seg.tokenize("\xE2\x80\x9CYes\xE2\x80\x9D he said\xE2\x80\xA6") ==
          V{"\xE2\x80\x9C", "Yes", "\xE2\x80\x9D", "he", "said", "\xE2\x80\xA6"});
    CHECK(seg.tokenize("don't stop") == V{"don't", "stop"});
  }

  TEST_CASE("custom abbreviation lists") {
    const auto seg = SentenceSegmenter::parse("# comment\nxyz.\nfoo.*\n");
    CHECK(seg.abbreviation_count() == 2);
    CHECK(seg.split("An xyz. Thing here.").size() == 1);
    CHECK(seg.split("A foo. Bar.").size() == 2);
    CHECK(seg.split("A foo. bar.").size() == 1);
    CHECK(SentenceSegmenter::builtin().split("Dr. Smith ran.").size() == 1);
    CHECK(seg.split("Dr. Smith ran.").size() == 2);
  }

  TEST_CASE("plain text paragraphs and sentences") {
    const Document d = parse_plain_text("A b.\n\nC d. E f.", "x");
    REQUIRE(d.paragraphs.size() == 2);
    CHECK(d.paragraphs[0].sentences.size() == 1);
    CHECK(d.paragraphs[1].sentences.size() == 2);
    CHECK(d.paragraphs[1].sentences[1].index_in_paragraph == 1);

    const Document h = parse_plain_text("Hello.", "h");
    REQUIRE(h.paragraphs.size() == 1);
    CHECK(h.paragraphs[0].sentences[0].tokens.size() == 2);
    CHECK(h.paragraphs[0].sentences[0].tokens[0].lemma == "hello");
    CHECK(h.paragraphs[0].sentences[0].tokens[0].pos == Pos::Other);

    const Document r = parse_plain_text("Dr. Smith ran. He won.", "r");
    CHECK(r.paragraphs.size() == 1);
    CHECK(r.paragraphs[0].sentences.size() == 2);

    // Every newline run is one break.
    const Document runs = parse_plain_text("One.\nTwo.\n\n\n  \nThree.\r\n", "n");
    CHECK(runs.paragraphs.size() == 3);

    CHECK(kind_of([] { parse_plain_text(" \n\t\n", "e"); }) == ErrorKind::EmptyDocument);
  }

  TEST_CASE("token reconstruction property") {
    std::mt19937_64 rng(5);
    const std::vector<std::string> words = {"the", "Dr.", "U.S.", "cat", "(ran)", "\"so\"", "end.",
                                            "what?!", "etc.", "A.", "x,", "No.", "Yes!", "it's",
                                            "3.5%", "\xE2\x80\x9Cq\xE2\x80\x9D", "p.m."};
    for (int trial = 0; trial < 300; ++trial) {
      std::string text;
      const int paras = 1 + static_cast<int>(rng() % 3);
      for (int p = 0; p < paras; ++p) {
        if (p) text += rng() % 2 ? "\n" : "\n\n";
        const int n = 1 + static_cast<int>(rng() % 12);
        for (int w = 0; w < n; ++w) {
          if (w) text += ' ';
          text += words[rng() % words.size()];
        }
      }
      const Document d = parse_plain_text(text, "t");
      std::string joined;
      std::size_t tokens = 0;
      for (const auto& para : d.paragraphs)
        for (const auto& s : para.sentences)
          for (const auto& t : s.tokens) {
            CHECK_FALSE(t.surface.empty());
            joined += t.surface + ' ';
            ++tokens;
          }
      CHECK(strip_ws(joined) == strip_ws(text));
      CHECK(tokens == d.token_count());
      CHECK(d.paragraphs.size() == static_cast<std::size_t>(paras));
    }
  }

  TEST_CASE("raw corpus directory") {
    fixture::TempDir dir("raw");
    fixture::write_file(dir / "high/b.txt", "Second doc.\nNew paragraph. Two sentences.");
    fixture::write_file(dir / "low/a.txt", "First doc.");
    fixture::write_file(dir / "loose.txt", "No label here.");
    fixture::write_file(dir / "notes.md", "ignored");
    const Corpus c = load_raw_corpus(dir.path());
    REQUIRE(c.documents.size() == 3);
    CHECK(c.documents[0].id == "high/b");
    CHECK(c.documents[0].group_label == "high");
    CHECK(c.documents[1].id == "loose");
    CHECK_FALSE(c.documents[1].group_label.has_value());
    CHECK(c.documents[2].group_label == "low");
    CHECK(c.provenance.parser == "plain-text");

    const CorpusShape s = corpus_shape_stats(c);
    CHECK(s.n_docs == 3);
    CHECK(s.n_paragraphs == 4);
    CHECK(s.n_sentences == 5);
    CHECK(s.sentences_per_paragraph == doctest::Approx(1.25));

    CHECK(kind_of([&] { load_raw_corpus(dir / "missing"); }) == ErrorKind::IoError);
  }

  TEST_CASE("shape stats arithmetic") {
    Document d;
    d.id = "x";
    d.paragraphs.resize(2);
    d.paragraphs[0].sentences.resize(2);
    d.paragraphs[1].sentences.resize(3);
    const CorpusShape s = corpus_shape_stats(std::vector<const Document*>{&d});
    CHECK(s.sentences_per_paragraph == doctest::Approx(2.5));
    Document one;
    one.id = "y";
    one.paragraphs.resize(3);
    for (auto& p : one.paragraphs) p.sentences.resize(1);
    CHECK(corpus_shape_stats(std::vector<const Document*>{&one}).sentences_per_paragraph == 1.0);
  }

  TEST_CASE("annotated records: JSONL with a metadata line") {
    const VectorStore side = annotated_sidecar();
    const Corpus c = parse_annotated_corpus(kAnnotated, "mem", &side);
    REQUIRE(c.documents.size() == 1);
    const Document& d = c.documents[0];
    CHECK(d.id == "d1");
    CHECK(d.group_label == "high");
    REQUIRE(d.paragraphs.size() == 2);
    CHECK(d.paragraphs[0].coref_chain_count == 1u);
    CHECK_FALSE(d.paragraphs[1].coref_chain_count.has_value());
    const Token& t = d.paragraphs[0].sentences[0].tokens[0];
    CHECK(t.lemma == "dog");
    CHECK(t.pos == Pos::Noun);
    CHECK(t.fine_pos == "NNS");
    CHECK(t.vector_ref == "d1.t0");
    CHECK(d.paragraphs[0].sentences[0].embedding_ref == "d1.s0");
    CHECK(d.sentence_count() == 3);
  }

  TEST_CASE("annotated records: array and object forms agree") {
    const std::string rec =
        R"({"id": "a", "paragraphs": [{"sentences": [{"tokens": [{"surface": "Hi", "lemma": "hi", "pos": "OTHER"}]}]}]})";
    const Corpus arr = parse_annotated_corpus("[" + rec + "]", "m", nullptr);
    const Corpus obj = parse_annotated_corpus(R"({"documents": [)" + rec + "]}", "m", nullptr);
    const Corpus lines = parse_annotated_corpus(rec + "\n", "m", nullptr);
    CHECK(arr.documents == obj.documents);
    CHECK(arr.documents == lines.documents);
  }

  TEST_CASE("annotated round trip") {
    const VectorStore side = annotated_sidecar();
    const Corpus c = parse_annotated_corpus(kAnnotated, "mem", &side);
    std::ostringstream out;
    write_annotated_corpus(c, out);
    const Corpus back = parse_annotated_corpus(out.str(), "mem", &side);
    CHECK(back.documents == c.documents);

    // Raw text exported and reloaded keeps its structure too.
    Corpus raw;
    raw.documents.push_back(parse_plain_text("One two. Three.\nFour.", "r1"));
    raw.documents.back().group_label = "low";
    std::ostringstream out2;
    write_annotated_corpus(raw, out2);
    CHECK(parse_annotated_corpus(out2.str(), "mem", nullptr).documents == raw.documents);
  }

  TEST_CASE("schema errors carry the location") {
    auto schema_error = [](const std::string& text) -> std::string {
      try {
        parse_annotated_corpus(text, "f.jsonl", nullptr);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SchemaError);
        return e.what();
      }
      FAIL("expected SchemaError");
      return "";
    };
    const std::string tok = R"({"surface": "x", "lemma": "x", "pos": "NOUN"})";
    const std::string msg = schema_error(
        R"({"id": "a", "paragraphs": [{"sentence_count": 2, "sentences": [{"tokens": [)" + tok + "]}]}]}");
    CHECK(msg.find("f.jsonl:1") != std::string::npos);
    CHECK(msg.find("paragraphs[0]") != std::string::npos);
    CHECK(msg.find("declares 2") != std::string::npos);

    CHECK(schema_error(R"({"id": "a", "paragraphs": []})").find("paragraphs") != std::string::npos);
    CHECK(schema_error(R"({"id": "a", "paragraphs": [{"sentences": [{"tokens": [{"surface": "x", "lemma": "x", "pos": "NN"}]}]}]})")
              .find("unknown pos") != std::string::npos);
    CHECK(schema_error(R"({"paragraphs": [{"sentences": [{"tokens": [)" + tok + "]}]}]}")
              .find("'id'") != std::string::npos);
    CHECK(schema_error("{\"id\": \"a\", \"paragraphs\": [{\"sentences\": [{\"tokens\": [" + tok +
                       "]}]}]}\n{\"id\": \"a\", \"paragraphs\": [{\"sentences\": [{\"tokens\": [" +
                       tok + "]}]}]}")
              .find("duplicate") != std::string::npos);
    CHECK(schema_error("not json at all\n").find("f.jsonl:1") != std::string::npos);
    CHECK(schema_error(R"({"id": "a", "paragraphs": [{"coref_chains": -1, "sentences": [{"tokens": [)" +
                       tok + "]}]}]}")
              .find("coref_chains") != std::string::npos);
  }

  TEST_CASE("dangling embedding refs") {
    CHECK(kind_of([&] { parse_annotated_corpus(kAnnotated, "m", nullptr); }) ==
          ErrorKind::DanglingEmbeddingRef);
    VectorStore partial(2);
    const float a[] = {1.0f, 0.0f};
    partial.add("d1.s0", a);
    CHECK(kind_of([&] { parse_annotated_corpus(kAnnotated, "m", &partial); }) ==
          ErrorKind::DanglingEmbeddingRef);
  }

  TEST_CASE("POS tags") {
    CHECK(parse_pos("NOUN") == Pos::Noun);
    CHECK(parse_pos("ADV") == Pos::Adv);
    CHECK_FALSE(parse_pos("noun").has_value());
    CHECK(to_string(Pos::Verb) == "VERB");
    CHECK_FALSE(is_content(Pos::Other));
    CHECK(is_content(Pos::Adj));
  }
}
