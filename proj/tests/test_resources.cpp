#include <cmath>
#include <cstring>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "gist/connectives.hpp"
#include "gist/error.hpp"
#include "gist/lexicon.hpp"
#include "gist/vectors.hpp"
#include "gist/wordnet.hpp"

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

SynsetId only(const WordNetDb& db, std::string_view lemma, Pos pos) {
  auto ids = db.synsets_of(lemma, pos);
  REQUIRE(ids.size() == 1);
  return ids[0];
}

}  // namespace

TEST_SUITE("resources") {
  TEST_CASE("vector store lookup and errors") {
    VectorStore s(3);
    const float a[] = {1, 2, 3};
    s.add("Paris", a);
    s.add("river", a);
    CHECK(s.size() == 2);
    CHECK(s.lookup("Paris").has_value());
    CHECK(s.lookup("paris") == std::nullopt);
    CHECK(s.lookup("RIVER").has_value());  // lower-cased fallback
    CHECK(kind_of([&] { s.add("river", a); }) == ErrorKind::DuplicateKey);
    const float b[] = {1, 2};
    CHECK(kind_of([&] { s.add("short", b); }) == ErrorKind::DimMismatch);
  }

  TEST_CASE("text vector files") {
    const auto s = parse_text_vectors("2 3\nthe 0.1 0.2 0.3\ncat -1 0 2.5e-1\n", "v");
    CHECK(s.dim() == 3);
    CHECK(s.keys() == std::vector<std::string>{"the", "cat"});
    CHECK((*s.lookup("cat"))[2] == 0.25f);
    CHECK(kind_of([] { parse_text_vectors("1 3\nthe 0.1 0.2\n", "v"); }) == ErrorKind::DimMismatch);
    CHECK(kind_of([] { parse_text_vectors("2 2\nthe 0.1 0.2\n", "v"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_text_vectors("2 1\na 1\na 2\n", "v"); }) == ErrorKind::DuplicateKey);
    CHECK(kind_of([] { parse_text_vectors("1 1\na x\n", "v"); }) == ErrorKind::ParseError);
  }

  TEST_CASE("vector files round-trip bit-exactly in both formats") {
    VectorStore s(4);
    const float a[] = {0.1f, -3.4028235e38f, 1e-45f, 7.0f};
    const float b[] = {1.0f / 3.0f, 2.0f, -0.0f, 123456.789f};
    s.add("x", a);
    s.add("doc/s0", b);
    std::ostringstream text, bin;
    write_text_vectors(s, text);
    write_binary_vectors(s, bin);
    const auto t = parse_text_vectors(text.str(), "t");
    const auto u = parse_binary_vectors(bin.str(), "b");
    for (const auto* store : {&t, &u}) {
      REQUIRE(store->keys() == s.keys());
      for (const auto& k : s.keys()) {
        auto want = *s.lookup(k);
        auto got = *store->lookup(k);
        for (std::size_t d = 0; d < 4; ++d) CHECK(std::memcmp(&want[d], &got[d], sizeof(float)) == 0);
      }
    }
    fixture::TempDir dir("vec");
    fixture::write_file(dir / "v.bin", bin.str());
    fixture::write_file(dir / "v.txt", text.str());
    CHECK(load_vectors(dir / "v.bin").size() == 2);
    CHECK(load_vectors(dir / "v.txt").size() == 2);
    CHECK(kind_of([&] { load_vectors(dir / "none.txt"); }) == ErrorKind::IoError);
  }

  TEST_CASE("cosine") {
    const double a[] = {1, 0}, b[] = {0, 2}, c[] = {-3, 0}, z[] = {0, 0};
    CHECK(*cosine(a, a) == doctest::Approx(1.0));
    CHECK(*cosine(a, b) == doctest::Approx(0.0));
    CHECK(*cosine(a, c) == doctest::Approx(-1.0));
    CHECK_FALSE(cosine(a, z).has_value());
  }

  TEST_CASE("wordnet fixture depths") {
    fixture::TempDir dir("wn");
    fixture::write_wordnet(dir.path(), fixture::mini_wordnet());
    const WordNetDb db = load_wordnet(dir.path());
    CHECK(db.synset_count() == 14);
    CHECK(db.synset_count(Pos::Verb) == 3);
    CHECK(db.hypernym_path_length(only(db, "entity", Pos::Noun)) == 0);
    CHECK(db.hypernym_path_length(only(db, "animal", Pos::Noun)) == 1);
    CHECK(db.hypernym_path_length(only(db, "dog", Pos::Noun)) == 2);
    CHECK(db.hypernym_path_length(only(db, "cat", Pos::Noun)) == 2);
    // Two routes to the root (3 and 2 edges): the shorter one counts.
    CHECK(db.hypernym_path_length(only(db, "bottom", Pos::Noun)) == 2);
    CHECK(db.hypernym_path_length(only(db, "run", Pos::Verb)) == 1);
    CHECK(db.synsets_of("bank", Pos::Noun).size() == 2);
    CHECK(db.synsets_of("Left Side", Pos::Noun).size() == 1);
    CHECK(db.synsets_of("dog", Pos::Verb).empty());
    CHECK(db.same_synset("run", "sprint", Pos::Verb));
    CHECK_FALSE(db.same_synset("run", "sleep", Pos::Verb));
    CHECK_FALSE(db.same_synset("run", "unknown", Pos::Verb));
    CHECK(kind_of([&] { db.hypernym_path_length({12345678, Pos::Noun}); }) == ErrorKind::UnknownSynset);

    // Offsets are real byte positions in data.noun.
    const std::string data = fixture::read_file(dir / "data.noun");
    const SynsetId dog = only(db, "dog", Pos::Noun);
    CHECK(data.compare(dog.offset, 8, dog.str().substr(0, 8)) == 0);
    CHECK(dog.str().size() == 10);
    CHECK(dog.str().back() == 'n');
  }

  TEST_CASE("wordnet cycles") {
    fixture::TempDir self("wn-self");
    fixture::write_wordnet(self.path(), {{"loop", 'n', {"loop"}, {"loop"}}, {"root", 'n', {"root"}, {}}});
    try {
      load_wordnet(self.path());
      FAIL("expected CycleError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::CycleError);
      CHECK(std::string(e.what()).find("-n") != std::string::npos);
    }

    fixture::TempDir two("wn-two");
    fixture::write_wordnet(two.path(), {{"a", 'n', {"a"}, {"b"}}, {"b", 'n', {"b"}, {"a"}}});
    CHECK(kind_of([&] { load_wordnet(two.path()); }) == ErrorKind::CycleError);

    // Instance hypernyms count as edges.
    fixture::TempDir inst("wn-inst");
    fixture::write_wordnet(inst.path(), {{"city", 'n', {"city"}, {}},
                                         {"paris", 'n', {"paris"}, {"city"}, true}});
    const WordNetDb db = load_wordnet(inst.path());
    CHECK(db.hypernym_path_length(only(db, "paris", Pos::Noun)) == 1);
  }

  TEST_CASE("wordnet malformed input") {
    fixture::TempDir dir("wn-bad");
    fixture::write_file(dir / "data.noun", "00000000 03 n 01 dog 0 001 @ 00000099 n 0000 | x\n");
    fixture::write_file(dir / "index.noun", "dog n 1 0 1 0 00000000\n");
    CHECK(kind_of([&] { load_wordnet(dir.path()); }) == ErrorKind::ParseError);

    fixture::TempDir half("wn-half");
    fixture::write_file(half / "data.noun", "");
    CHECK(kind_of([&] { load_wordnet(half.path()); }) == ErrorKind::ParseError);
    CHECK(kind_of([&] { load_wordnet(half / "nowhere"); }) == ErrorKind::IoError);
  }

  TEST_CASE("lexicons") {
    const auto mrc = parse_lexicon(fixture::mrc_lexicon_text(), "mrc", LexiconSource::Mrc);
    const auto meg = parse_lexicon(fixture::megahr_lexicon_text(), "meg", LexiconSource::Megahr);
    CHECK(mrc.size() == 2);
    CHECK(mrc.lookup(fixture::tok("Apple", Pos::Noun)) == WordNorms{610, 602});
    CHECK(mrc.lookup(fixture::tok("theory", Pos::Verb)) == WordNorms{350, 300});  // first tagged entry
    CHECK(meg.lookup(fixture::tok("apple", Pos::Noun)) == WordNorms{4.9, 4.7});
    CHECK_FALSE(meg.lookup(fixture::tok("pear", Pos::Noun)).has_value());
    Token lemma_only = fixture::tok("theories", Pos::Noun);
    lemma_only.lemma = "theory";
    CHECK(meg.lookup(lemma_only) == WordNorms{1.7, 1.9});

    CHECK(kind_of([] {
            parse_lexicon("word\tconcreteness\timageability\nx\t6\t3\n", "m", LexiconSource::Megahr);
          }) == ErrorKind::SchemaError);
    CHECK(kind_of([] {
            parse_lexicon("word\tconcreteness\timageability\nx\t2\t3\nx\t2\t3\n", "m", LexiconSource::Megahr);
          }) == ErrorKind::SchemaError);
    // A declared range replaces the native one.
    const auto wide = parse_lexicon("# range 0 10\nword\tconcreteness\timageability\nx\t6\t3\n", "m",
                                    LexiconSource::Megahr);
    CHECK(wide.range().max == 10.0);

    PsycholinguisticLexicon tagged(LexiconSource::Mrc, default_range(LexiconSource::Mrc));
    tagged.add("light", Pos::Noun, {600, 620});
    tagged.add("light", Pos::Adj, {300, 350});
    tagged.add("light", std::nullopt, {450, 480});
    CHECK(tagged.lookup(fixture::tok("light", Pos::Adj)) == WordNorms{300, 350});
    CHECK(tagged.lookup(fixture::tok("light", Pos::Verb)) == WordNorms{450, 480});
  }

  TEST_CASE("connective patterns") {
    const auto& set = ConnectivePatternSet::builtin();
    CHECK(set.size() >= 20);
    CHECK(set.find_all("it fell because of the rain").size() == 1);  // longest wins
    CHECK(set.find_all("Therefore we left. As a result, nothing happened.").size() == 2);
    CHECK(set.find_all("the becauseway is not a cue").empty());
    const auto m = set.find_all("rain; thus, because it fell");
    REQUIRE(m.size() == 2);
    CHECK(m[0].begin < m[1].begin);

    const auto custom = parse_patterns("# cues\nintra\tso that\ninter\tso\n", "p");
    CHECK(custom.find_all("so that it works so well").size() == 2);
    CHECK(custom.patterns()[1].scope == CueScope::Inter);
    CHECK(kind_of([] { parse_patterns("intra\t(unclosed\n", "p"); }) == ErrorKind::PatternCompileError);
    CHECK(kind_of([] { parse_patterns("# nothing\n", "p"); }) == ErrorKind::SchemaError);
    CHECK(kind_of([] { parse_patterns("sideways\tx\n", "p"); }) != ErrorKind::IoError);
  }
}
