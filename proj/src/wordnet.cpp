#include "gist/wordnet.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "gist/error.hpp"
#include "text_util.hpp"

namespace gist {

namespace {

char pos_letter(Pos pos) {
  switch (pos) {
    case Pos::Noun: return 'n';
    case Pos::Verb: return 'v';
    case Pos::Adj: return 'a';
    case Pos::Adv: return 'r';
    case Pos::Other: break;
  }
  return '?';
}

std::optional<Pos> pos_from_letter(std::string_view s) {
  if (s.size() != 1) return std::nullopt;
  switch (s[0]) {
    case 'n': return Pos::Noun;
    case 'v': return Pos::Verb;
    case 'a': case 's': return Pos::Adj;
    case 'r': return Pos::Adv;
    default: return std::nullopt;
  }
}

}  // namespace

std::string SynsetId::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08u-%c", offset, pos_letter(pos));
  return buf;
}

std::string normalize_lemma(std::string_view lemma) {
  std::string out = detail::to_lower_ascii(detail::trim(lemma));
  std::replace(out.begin(), out.end(), ' ', '_');
  return out;
}

WordNetDb::WordNetDb(std::vector<Synset> synsets, LemmaIndex lemma_index)
    : synsets_(std::move(synsets)) {
  for (std::size_t i = 0; i < synsets_.size(); ++i) {
    if (!slot_of_.emplace(synsets_[i].id, i).second) {
      throw Error(ErrorKind::ParseError, "duplicate synset " + synsets_[i].id.str());
    }
  }
  for (const auto& s : synsets_) {
    for (const auto& h : s.hypernyms) {
      if (!slot_of_.contains(h)) {
        throw Error(ErrorKind::ParseError,
                    "synset " + s.id.str() + " has hypernym " + h.str() + " that does not exist");
      }
    }
  }
  for (auto& [key, ids] : lemma_index) {
    for (const auto& id : ids) {
      if (!slot_of_.contains(id)) {
        throw Error(ErrorKind::ParseError, "lemma '" + key.first + "' indexes missing synset " +
                                               id.str());
      }
    }
    lemma_index_.emplace(std::make_pair(normalize_lemma(key.first), key.second), std::move(ids));
  }

  // Iterative post-order DFS over hypernym edges: detects cycles and fills
  // the shortest distance to a root.
  constexpr unsigned kUnset = ~0u;
  enum : std::uint8_t { kNew, kActive, kDone };
  std::vector<std::uint8_t> state(synsets_.size(), kNew);
  depth_.assign(synsets_.size(), kUnset);
  std::vector<std::pair<std::size_t, std::size_t>> stack;  // (slot, next parent)
  for (std::size_t start = 0; start < synsets_.size(); ++start) {
    if (state[start] != kNew) continue;
    stack.emplace_back(start, 0);
    state[start] = kActive;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& parents = synsets_[node].hypernyms;
      if (next < parents.size()) {
        const std::size_t parent = slot_of_.at(parents[next++]);
        if (state[parent] == kActive) {
          throw Error(ErrorKind::CycleError,
                      "hypernym cycle through synset " + synsets_[parent].id.str());
        }
        if (state[parent] == kNew) {
          state[parent] = kActive;
          stack.emplace_back(parent, 0);
        }
        continue;
      }
      unsigned best = 0;
      if (!parents.empty()) {
        best = kUnset;
        for (const auto& p : parents) best = std::min(best, depth_[slot_of_.at(p)] + 1);
      }
      depth_[node] = best;
      state[node] = kDone;
      stack.pop_back();
    }
  }
}

std::size_t WordNetDb::slot(SynsetId id) const {
  auto it = slot_of_.find(id);
  if (it == slot_of_.end()) throw Error(ErrorKind::UnknownSynset, id.str());
  return it->second;
}

const Synset* WordNetDb::find(SynsetId id) const {
  auto it = slot_of_.find(id);
  return it == slot_of_.end() ? nullptr : &synsets_[it->second];
}

std::span<const SynsetId> WordNetDb::synsets_of(std::string_view lemma, Pos pos) const {
  auto it = lemma_index_.find({normalize_lemma(lemma), pos});
  if (it == lemma_index_.end()) return {};
  return it->second;
}

unsigned WordNetDb::hypernym_path_length(SynsetId id) const { return depth_[slot(id)]; }

bool WordNetDb::same_synset(std::string_view lemma_a, std::string_view lemma_b, Pos pos) const {
  auto a = synsets_of(lemma_a, pos);
  auto b = synsets_of(lemma_b, pos);
  for (const auto& x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  }
  return false;
}

std::size_t WordNetDb::synset_count(Pos pos) const {
  return static_cast<std::size_t>(std::count_if(
      synsets_.begin(), synsets_.end(), [pos](const Synset& s) { return s.id.pos == pos; }));
}

std::size_t WordNetDb::hypernym_edge_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : synsets_) n += s.hypernyms.size();
  return n;
}

// ---------------------------------------------------------------------------

namespace {

class LineCursor {
 public:
  LineCursor(std::vector<std::string_view> fields, std::string where)
      : fields_(std::move(fields)), where_(std::move(where)) {}

  std::string_view next(const char* what) {
    if (i_ >= fields_.size()) fail(std::string("missing ") + what);
    return fields_[i_++];
  }

  template <typename Int>
  Int number(const char* what, int base = 10) {
    std::string_view s = next(what);
    Int v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (ec != std::errc() || p != s.data() + s.size()) {
      fail(std::string("bad ") + what + " '" + std::string(s) + "'");
    }
    return v;
  }

  Pos pos(const char* what) {
    std::string_view s = next(what);
    auto p = pos_from_letter(s);
    if (!p) fail(std::string("bad ") + what + " '" + std::string(s) + "'");
    return *p;
  }

  bool done() const { return i_ >= fields_.size(); }
  std::string_view peek() const { return i_ < fields_.size() ? fields_[i_] : std::string_view(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError, where_ + ": " + what);
  }

 private:
  std::vector<std::string_view> fields_;
  std::string where_;
  std::size_t i_ = 0;
};

bool is_header_line(std::string_view line) { return line.empty() || line.front() == ' '; }

void parse_data_file(std::string_view contents, const std::string& origin, Pos file_pos,
                     std::vector<Synset>& out) {
  auto lines = detail::split_lines(contents);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view line = lines[ln];
    if (is_header_line(line)) continue;
    if (auto bar = line.find(" | "); bar != std::string_view::npos) line = line.substr(0, bar);
    else if (!line.empty() && line.back() == '|') line.remove_suffix(1);
    LineCursor cur(detail::split_ws(line), origin + ":" + std::to_string(ln + 1));

    Synset s;
    s.id.offset = cur.number<std::uint32_t>("synset offset");
    cur.number<unsigned>("lex_filenum");
    const Pos ss_type = cur.pos("ss_type");
    if (ss_type != file_pos) cur.fail("ss_type does not match the file's part of speech");
    s.id.pos = file_pos;
    const auto w_cnt = cur.number<unsigned>("w_cnt", 16);
    if (w_cnt == 0) cur.fail("synset has no words");
    for (unsigned w = 0; w < w_cnt; ++w) {
      std::string word(cur.next("word"));
      // Adjective syntactic markers: "(a)", "(p)", "(ip)".
      if (auto paren = word.find('('); paren != std::string::npos && word.back() == ')') {
        word.erase(paren);
      }
      s.lemmas.push_back(normalize_lemma(word));
      cur.number<unsigned>("lex_id", 16);
    }
    const auto p_cnt = cur.number<unsigned>("p_cnt");
    for (unsigned p = 0; p < p_cnt; ++p) {
      const std::string_view symbol = cur.next("pointer symbol");
      SynsetId target;
      target.offset = cur.number<std::uint32_t>("pointer offset");
      target.pos = cur.pos("pointer pos");
      cur.number<unsigned>("source/target", 16);
      if (symbol == "@" || symbol == "@i") s.hypernyms.push_back(target);
    }
    if (file_pos == Pos::Verb && !cur.done()) {
      const auto f_cnt = cur.number<unsigned>("f_cnt");
      for (unsigned f = 0; f < f_cnt; ++f) {
        if (cur.next("frame marker") != "+") cur.fail("expected '+' before verb frame");
        cur.number<unsigned>("f_num");
        cur.number<unsigned>("w_num", 16);
      }
    }
    if (!cur.done()) cur.fail("unexpected field '" + std::string(cur.peek()) + "'");
    out.push_back(std::move(s));
  }
}

void parse_index_file(std::string_view contents, const std::string& origin, Pos file_pos,
                      WordNetDb::LemmaIndex& out) {
  auto lines = detail::split_lines(contents);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string_view line = lines[ln];
    if (is_header_line(line)) continue;
    LineCursor cur(detail::split_ws(line), origin + ":" + std::to_string(ln + 1));
    std::string lemma(cur.next("lemma"));
    if (cur.pos("pos") != file_pos) cur.fail("pos does not match the file's part of speech");
    const auto synset_cnt = cur.number<unsigned>("synset_cnt");
    const auto p_cnt = cur.number<unsigned>("p_cnt");
    for (unsigned p = 0; p < p_cnt; ++p) cur.next("pointer symbol");
    cur.number<unsigned>("sense_cnt");
    cur.number<unsigned>("tagsense_cnt");
    std::vector<SynsetId> ids;
    for (unsigned i = 0; i < synset_cnt; ++i) {
      ids.push_back({cur.number<std::uint32_t>("synset offset"), file_pos});
    }
    if (!cur.done()) cur.fail("more offsets than synset_cnt");
    auto& slot = out[{normalize_lemma(lemma), file_pos}];
    slot.insert(slot.end(), ids.begin(), ids.end());
  }
}

}  // namespace

WordNetDb load_wordnet(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw Error(ErrorKind::IoError, "WordNet directory '" + dir.string() + "' not found");
  }
  static constexpr std::pair<const char*, Pos> kFiles[] = {
      {"noun", Pos::Noun}, {"verb", Pos::Verb}, {"adj", Pos::Adj}, {"adv", Pos::Adv}};

  std::vector<Synset> synsets;
  WordNetDb::LemmaIndex index;
  bool any = false;
  for (const auto& [suffix, pos] : kFiles) {
    const fs::path data = dir / (std::string("data.") + suffix);
    const fs::path idx = dir / (std::string("index.") + suffix);
    const bool has_data = fs::exists(data), has_index = fs::exists(idx);
    if (!has_data && !has_index) continue;
    if (has_data != has_index) {
      throw Error(ErrorKind::ParseError, "WordNet directory '" + dir.string() + "' has only one of " +
                                             data.filename().string() + " / " +
                                             idx.filename().string());
    }
    any = true;
    parse_data_file(detail::read_file(data, "WordNet data file"), data.string(), pos, synsets);
    parse_index_file(detail::read_file(idx, "WordNet index file"), idx.string(), pos, index);
  }
  if (!any) {
    throw Error(ErrorKind::ParseError, "no WordNet data/index files in '" + dir.string() + "'");
  }
  return WordNetDb(std::move(synsets), std::move(index));
}

}  // namespace gist
