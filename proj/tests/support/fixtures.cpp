#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fixture {

TempDir::TempDir(std::string_view tag) {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  const auto name = "gist-" + std::string(tag) + "-" + std::to_string(rd()) + "-" +
                    std::to_string(counter++);
  path_ = fs::temp_directory_path() / name;
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::string data_line(const WnSynset& s, unsigned offset,
                      const std::map<std::string, unsigned>& offsets) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%08u %02d %c %02zx", offset, s.pos == 'n' ? 3 : 29, s.pos,
                s.lemmas.size());
  std::string line = buf;
  for (const auto& l : s.lemmas) line += " " + l + " 0";
  std::snprintf(buf, sizeof buf, " %03zu", s.hypernyms.size());
  line += buf;
  for (const auto& h : s.hypernyms) {
    auto it = offsets.find(h);
    const unsigned target = it == offsets.end() ? 0 : it->second;
    std::snprintf(buf, sizeof buf, " %s %08u %c 0000", s.instance ? "@i" : "@", target, s.pos);
    line += buf;
  }
  if (s.pos == 'v') line += " 01 + 02 00";
  line += " | fixture synset " + s.name + "\n";
  return line;
}

}  // namespace

void write_wordnet(const fs::path& dir, const std::vector<WnSynset>& synsets) {
  fs::create_directories(dir);
  const std::string header = "  1 Test fixture, not the WordNet database.\n";
  for (const auto& [pos, suffix] : {std::pair{'n', "noun"}, std::pair{'v', "verb"}}) {
    std::vector<const WnSynset*> mine;
    for (const auto& s : synsets)
      if (s.pos == pos) mine.push_back(&s);
    if (mine.empty()) continue;

    // Offsets are fixed-width, so line lengths do not depend on them.
    std::map<std::string, unsigned> offsets;
    unsigned at = static_cast<unsigned>(header.size());
    for (const auto* s : mine) {
      offsets[s->name] = at;
      at += static_cast<unsigned>(data_line(*s, 0, {}).size());
    }
    std::string data = header;
    for (const auto* s : mine) {
      for (const auto& h : s->hypernyms) {
        if (!offsets.count(h)) throw std::invalid_argument("unknown hypernym " + h);
      }
      data += data_line(*s, offsets[s->name], offsets);
    }
    write_file(dir / (std::string("data.") + suffix), data);

    std::map<std::string, std::vector<const WnSynset*>> by_lemma;
    for (const auto* s : mine)
      for (const auto& l : s->lemmas) by_lemma[l].push_back(s);
    std::string index = header;
    for (const auto& [lemma, list] : by_lemma) {
      bool hyper = false;
      for (const auto* s : list) hyper = hyper || !s->hypernyms.empty();
      index += lemma + " " + pos + " " + std::to_string(list.size()) + (hyper ? " 1 @ " : " 0 ") +
               std::to_string(list.size()) + " 0";
      for (const auto* s : list) {
        char buf[16];
        std::snprintf(buf, sizeof buf, " %08u", offsets[s->name]);
        index += buf;
      }
      index += "  \n";
    }
    write_file(dir / (std::string("index.") + suffix), index);
  }
}

std::vector<WnSynset> mini_wordnet() {
  return {
      {"entity", 'n', {"entity"}, {}},
      {"animal", 'n', {"animal"}, {"entity"}},
      {"dog", 'n', {"dog"}, {"animal"}},
      {"cat", 'n', {"cat"}, {"animal"}},
      {"bank_river", 'n', {"bank"}, {"entity"}},
      {"bank_money", 'n', {"bank", "depository"}, {}},
      {"top", 'n', {"top"}, {}},
      {"left", 'n', {"left_side"}, {"top"}},
      {"deep", 'n', {"deep_left"}, {"left"}},
      {"right", 'n', {"right_side"}, {"top"}},
      {"bottom", 'n', {"bottom"}, {"deep", "right"}},
      {"move", 'v', {"move"}, {}},
      {"run", 'v', {"run", "sprint"}, {"move"}},
      {"sleep", 'v', {"sleep"}, {}},
  };
}

std::string mrc_lexicon_text() {
  return "# MRC-style fixture\n"
         "word\tpos\tconcreteness\timageability\n"
         "apple\tNOUN\t610\t602\n"
         "theory\tNOUN\t350\t300\n";
}

std::string megahr_lexicon_text() {
  return "# range 1 5\n"
         "word\tconcreteness\timageability\n"
         "apple\t4.9\t4.7\n"
         "theory\t1.7\t1.9\n";
}

gist::Token tok(std::string surface, gist::Pos pos) {
  gist::Token t;
  t.lemma = surface;
  for (char& c : t.lemma) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  t.surface = std::move(surface);
  t.pos = pos;
  return t;
}

namespace {

const std::vector<std::string> kAbstract = {"idea", "theory", "notion", "concept", "principle",
                                            "reason"};
const std::vector<std::string> kConcrete = {"apple", "hammer", "stone", "chair", "table",
                                            "bottle"};
const std::vector<std::string> kHighVerbs = {"explain", "reveal",   "imply",   "suggest", "show",
                                             "cause",   "clarify",  "indicate", "mean",   "argue",
                                             "predict", "describe", "define",  "justify"};

std::vector<WnSynset> synthetic_wordnet() {
  std::vector<WnSynset> s{{"entity", 'n', {"entity"}, {}},
                          {"object", 'n', {"object"}, {"entity"}},
                          {"artifact", 'n', {"artifact"}, {"object"}},
                          {"tool", 'n', {"tool"}, {"artifact"}},
                          {"move", 'v', {"move"}, {}},
                          {"travel", 'v', {"travel"}, {"move"}},
                          {"run", 'v', {"run", "sprint"}, {"travel"}},
                          {"walk", 'v', {"walk"}, {"travel"}}};
  for (const auto& w : kAbstract) s.push_back({w, 'n', {w}, {"entity"}});
  for (const auto& w : kConcrete) s.push_back({w, 'n', {w}, {"tool"}});
  for (const auto& w : kHighVerbs) s.push_back({w, 'v', {w}, {}});
  return s;
}

}  // namespace

SyntheticPaths write_synthetic(const fs::path& dir, std::size_t docs_per_group,
                               std::uint64_t seed) {
  using gist::Pos;
  constexpr std::size_t kDim = 16;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto random_vec = [&] {
    std::vector<float> v(kDim);
    for (auto& x : v) x = static_cast<float>(normal(rng));
    return v;
  };
  auto near = [&](const std::vector<float>& base) {
    auto v = random_vec();
    for (std::size_t d = 0; d < kDim; ++d) v[d] = base[d] + 0.35f * v[d];
    return v;
  };

  gist::Corpus corpus;
  corpus.provenance = {"synthetic", "fixture generator"};
  gist::VectorStore sidecar(kDim);

  for (const std::string group : {"low", "high"}) {
    const bool high = group == "high";
    for (std::size_t k = 0; k < docs_per_group; ++k) {
      gist::Document doc;
      doc.id = group + "/" + std::to_string(k);
      doc.group_label = group;
      const auto topic = random_vec();
      const auto verb_topic = random_vec();
      std::vector<std::string> verbs = kHighVerbs;
      std::shuffle(verbs.begin(), verbs.end(), rng);
      std::size_t sent_no = 0, verb_no = 0;
      for (int p = 0; p < 3; ++p) {
        gist::Paragraph para;
        const std::size_t n_sent = 2 + pick(3);
        for (std::size_t s = 0; s < n_sent; ++s) {
          gist::Sentence sent;
          sent.index_in_paragraph = s;
          const auto& nouns = high ? kAbstract : kConcrete;
          if (unit(rng) < (high ? 0.7 : 0.05)) sent.tokens.push_back(tok("Therefore", Pos::Adv));
          sent.tokens.push_back(tok(sent.tokens.empty() ? "The" : "the"));
          sent.tokens.push_back(tok(nouns[pick(nouns.size())], Pos::Noun));
          std::string verb;
          if (high) verb = verbs[verb_no % verbs.size()];
          else verb = unit(rng) < 0.8 ? (pick(2) ? "run" : "sprint") : "walk";
          gist::Token v = tok(verb, Pos::Verb);
          v.vector_ref = doc.id + "/v" + std::to_string(verb_no++);
          sidecar.add(*v.vector_ref, high ? near(verb_topic) : random_vec());
          sent.tokens.push_back(std::move(v));
          sent.tokens.push_back(tok("the"));
          sent.tokens.push_back(tok(nouns[pick(nouns.size())], Pos::Noun));
          if (high && unit(rng) < 0.4) {
            sent.tokens.push_back(tok("because"));
            sent.tokens.push_back(tok("it"));
            sent.tokens.push_back(tok("matters", Pos::Verb));
            sent.tokens.back().lemma = "matter";
            sent.tokens.back().vector_ref = doc.id + "/v" + std::to_string(verb_no++);
            sidecar.add(*sent.tokens.back().vector_ref, near(verb_topic));
          }
          sent.tokens.push_back(tok("."));
          sent.embedding_ref = doc.id + "/s" + std::to_string(sent_no++);
          sidecar.add(*sent.embedding_ref, high ? near(topic) : random_vec());
          para.sentences.push_back(std::move(sent));
        }
        para.coref_chain_count = static_cast<std::uint32_t>(high ? 2 + pick(2) : pick(2));
        doc.paragraphs.push_back(std::move(para));
      }
      corpus.documents.push_back(std::move(doc));
    }
  }

  SyntheticPaths paths{dir / "corpus.jsonl", dir / "sidecar.vec", dir / "wordnet", dir / "mrc.tsv",
                       dir / "megahr.tsv"};
  {
    std::ostringstream out;
    gist::write_annotated_corpus(corpus, out);
    write_file(paths.annotated, out.str());
  }
  {
    std::ostringstream out;
    gist::write_text_vectors(sidecar, out);
    write_file(paths.sidecar, out.str());
  }
  write_wordnet(paths.wordnet, synthetic_wordnet());

  std::string mrc = "word\tpos\tconcreteness\timageability\n";
  std::string megahr = "word\tconcreteness\timageability\n";
  for (std::size_t i = 0; i < kAbstract.size(); ++i) {
    mrc += kAbstract[i] + "\tNOUN\t" + std::to_string(260 + 15 * i) + "\t" +
           std::to_string(300 + 10 * i) + "\n";
    megahr += kAbstract[i] + "\t" + std::to_string(1.5 + 0.1 * i) + "\t" +
              std::to_string(1.8 + 0.1 * i) + "\n";
  }
  for (std::size_t i = 0; i < kConcrete.size(); ++i) {
    mrc += kConcrete[i] + "\tNOUN\t" + std::to_string(580 + 10 * i) + "\t" +
           std::to_string(590 + 12 * i) + "\n";
    megahr += kConcrete[i] + "\t" + std::to_string(4.3 + 0.1 * i) + "\t" +
              std::to_string(4.2 + 0.1 * i) + "\n";
  }
  write_file(paths.mrc, mrc);
  write_file(paths.megahr, megahr);
  return paths;
}

}  // namespace fixture
