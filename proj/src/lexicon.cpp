#include "gist/lexicon.hpp"

#include "gist/error.hpp"
#include "text_util.hpp"

namespace gist {

std::string_view to_string(LexiconSource source) noexcept {
  return source == LexiconSource::Mrc ? "mrc" : "megahr";
}

std::optional<LexiconSource> parse_lexicon_source(std::string_view name) noexcept {
  if (name == "mrc") return LexiconSource::Mrc;
  if (name == "megahr") return LexiconSource::Megahr;
  return std::nullopt;
}

ValueRange default_range(LexiconSource source) noexcept {
  return source == LexiconSource::Mrc ? ValueRange{100.0, 700.0} : ValueRange{1.0, 5.0};
}

PsycholinguisticLexicon::PsycholinguisticLexicon(LexiconSource source, ValueRange range)
    : source_(source), range_(range) {
  if (!(range.min <= range.max)) {
    throw Error(ErrorKind::SchemaError, "lexicon range min exceeds max");
  }
}

void PsycholinguisticLexicon::add(std::string_view word, std::optional<Pos> pos, WordNorms norms) {
  auto in_range = [this](double v) { return v >= range_.min && v <= range_.max; };
  const std::string key = detail::to_lower_ascii(word);
  if (!in_range(norms.concreteness) || !in_range(norms.imageability)) {
    throw Error(ErrorKind::SchemaError, "values for '" + key + "' fall outside [" +
                                            std::to_string(range_.min) + ", " +
                                            std::to_string(range_.max) + "]");
  }
  Entry& e = entries_[key];
  if (!pos) {
    if (e.untagged) throw Error(ErrorKind::SchemaError, "duplicate entry '" + key + "'");
    e.untagged = norms;
  } else {
    for (const auto& [p, n] : e.tagged) {
      if (p == *pos) {
        throw Error(ErrorKind::SchemaError,
                    "duplicate entry '" + key + "' (" + std::string(to_string(*pos)) + ")");
      }
    }
    e.tagged.emplace_back(*pos, norms);
  }
  ++size_;
}

std::optional<WordNorms> PsycholinguisticLexicon::lookup_word(const std::string& word,
                                                              Pos pos) const {
  auto it = entries_.find(word);
  if (it == entries_.end()) return std::nullopt;
  const Entry& e = it->second;
  if (source_ == LexiconSource::Mrc) {
    for (const auto& [p, n] : e.tagged) {
      if (p == pos) return n;
    }
  }
  if (e.untagged) return e.untagged;
  if (!e.tagged.empty()) return e.tagged.front().second;
  return std::nullopt;
}

std::optional<WordNorms> PsycholinguisticLexicon::lookup(const Token& token) const {
  const std::string surface = detail::to_lower_ascii(token.surface);
  if (auto hit = lookup_word(surface, token.pos)) return hit;
  const std::string lemma = detail::to_lower_ascii(token.lemma);
  if (!lemma.empty() && lemma != surface) return lookup_word(lemma, token.pos);
  return std::nullopt;
}

PsycholinguisticLexicon parse_lexicon(std::string_view contents, std::string_view origin,
                                      LexiconSource source) {
  auto lines = detail::split_lines(contents);
  ValueRange range = default_range(source);
  std::size_t ln = 0;
  auto where = [&](std::size_t line) { return std::string(origin) + ":" + std::to_string(line + 1); };

  // Leading comments, possibly declaring the range.
  for (; ln < lines.size(); ++ln) {
    std::string_view line = detail::trim(lines[ln]);
    if (line.empty()) continue;
    if (line.front() != '#') break;
    auto fields = detail::split_ws(line.substr(1));
    if (!fields.empty() && fields[0] == "range") {
      if (fields.size() != 3 || !detail::parse_double(fields[1], range.min) ||
          !detail::parse_double(fields[2], range.max)) {
        throw Error(ErrorKind::ParseError, where(ln) + ": expected '# range <min> <max>'");
      }
    }
  }
  if (ln >= lines.size()) throw Error(ErrorKind::ParseError, std::string(origin) + ": missing header");

  auto header = detail::split_char(lines[ln], '\t');
  for (auto& h : header) h = detail::trim(h);
  bool has_pos = false;
  if (header.size() == 4 && header[0] == "word" && header[1] == "pos" &&
      header[2] == "concreteness" && header[3] == "imageability") {
    has_pos = true;
  } else if (!(header.size() == 3 && header[0] == "word" && header[1] == "concreteness" &&
               header[2] == "imageability")) {
    throw Error(ErrorKind::ParseError,
                where(ln) + ": expected header 'word[\\tpos]\\tconcreteness\\timageability'");
  }

  PsycholinguisticLexicon lex(source, range);
  for (++ln; ln < lines.size(); ++ln) {
    const std::string_view line = lines[ln];
    if (detail::trim(line).empty() || line.front() == '#') continue;
    auto cells = detail::split_char(line, '\t');
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::ParseError, where(ln) + ": expected " + std::to_string(header.size()) +
                                             " columns, found " + std::to_string(cells.size()));
    }
    std::size_t c = 0;
    const std::string_view word = detail::trim(cells[c++]);
    if (word.empty()) throw Error(ErrorKind::ParseError, where(ln) + ": empty word");
    std::optional<Pos> pos;
    if (has_pos) {
      const std::string_view tag = detail::trim(cells[c++]);
      if (!tag.empty() && tag != "-") {
        pos = parse_pos(tag);
        if (!pos) throw Error(ErrorKind::ParseError, where(ln) + ": unknown pos '" + std::string(tag) + "'");
      }
    }
    WordNorms norms;
    if (!detail::parse_double(detail::trim(cells[c]), norms.concreteness) ||
        !detail::parse_double(detail::trim(cells[c + 1]), norms.imageability)) {
      throw Error(ErrorKind::ParseError, where(ln) + ": non-numeric rating");
    }
    try {
      lex.add(word, pos, norms);
    } catch (const Error& e) {
      throw Error(e.kind(), where(ln) + ": " + e.detail());
    }
  }
  return lex;
}

PsycholinguisticLexicon load_lexicon(const std::filesystem::path& path, LexiconSource source) {
  return parse_lexicon(detail::read_file(path, "lexicon"), path.string(), source);
}

}  // namespace gist
