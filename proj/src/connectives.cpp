#include "gist/connectives.hpp"

#include <algorithm>

#include "builtin_data.hpp"
#include "gist/error.hpp"
#include "text_util.hpp"

namespace gist {

std::string_view to_string(CueScope scope) noexcept {
  return scope == CueScope::Intra ? "intra" : "inter";
}

namespace {

std::regex compile(const std::string& pattern) {
  return std::regex("\\b(?:" + pattern + ")\\b",
                    std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
}

}  // namespace

ConnectivePatternSet::ConnectivePatternSet(const std::vector<Entry>& entries) {
  if (entries.empty()) throw Error(ErrorKind::SchemaError, "connective pattern list is empty");
  patterns_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.pattern.empty()) {
      throw Error(ErrorKind::PatternCompileError, "pattern " + std::to_string(i) + " is empty");
    }
    try {
      patterns_.push_back({e.pattern, e.scope, compile(e.pattern)});
    } catch (const std::regex_error& err) {
      throw Error(ErrorKind::PatternCompileError,
                  "pattern " + std::to_string(i) + " '" + e.pattern + "': " + err.what());
    }
  }
}

const ConnectivePatternSet& ConnectivePatternSet::builtin() {
  static const ConnectivePatternSet instance =
      parse_patterns(detail::builtin_connectives(), "<builtin causal_connectives.tsv>");
  return instance;
}

std::vector<ConnectiveMatch> ConnectivePatternSet::find_all(std::string_view text) const {
  const std::string lowered = detail::to_lower_ascii(text);
  std::vector<ConnectiveMatch> candidates;
  for (std::size_t p = 0; p < patterns_.size(); ++p) {
    auto begin = std::sregex_iterator(lowered.begin(), lowered.end(), patterns_[p].compiled);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
      if (it->length(0) == 0) continue;
      const auto start = static_cast<std::size_t>(it->position(0));
      candidates.push_back({start, start + static_cast<std::size_t>(it->length(0)), p});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    const auto la = a.end - a.begin, lb = b.end - b.begin;
    if (la != lb) return la > lb;
    if (a.begin != b.begin) return a.begin < b.begin;
    return a.pattern < b.pattern;
  });
  std::vector<ConnectiveMatch> chosen;
  for (const auto& c : candidates) {
    const bool overlaps = std::any_of(chosen.begin(), chosen.end(), [&](const auto& k) {
      return c.begin < k.end && k.begin < c.end;
    });
    if (!overlaps) chosen.push_back(c);
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const auto& a, const auto& b) { return a.begin < b.begin; });
  return chosen;
}

ConnectivePatternSet parse_patterns(std::string_view contents, std::string_view origin) {
  std::vector<ConnectivePatternSet::Entry> entries;
  std::vector<std::size_t> line_of;
  auto lines = detail::split_lines(contents);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string_view line = lines[ln];
    if (detail::trim(line).empty() || line.front() == '#') continue;
    const std::string where = std::string(origin) + ":" + std::to_string(ln + 1);
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorKind::ParseError, where + ": expected '<scope>\\t<regex>'");
    }
    const std::string_view scope = detail::trim(line.substr(0, tab));
    ConnectivePatternSet::Entry e;
    if (scope == "intra") {
      e.scope = CueScope::Intra;
    } else if (scope == "inter") {
      e.scope = CueScope::Inter;
    } else {
      throw Error(ErrorKind::ParseError, where + ": unknown scope '" + std::string(scope) + "'");
    }
    e.pattern = std::string(detail::trim(line.substr(tab + 1)));
    if (e.pattern.empty()) throw Error(ErrorKind::PatternCompileError, where + ": empty pattern");
    try {
      compile(e.pattern);
    } catch (const std::regex_error& err) {
      throw Error(ErrorKind::PatternCompileError,
                  where + ": '" + e.pattern + "': " + err.what());
    }
    entries.push_back(std::move(e));
  }
  if (entries.empty()) {
    throw Error(ErrorKind::SchemaError, std::string(origin) + ": no patterns");
  }
  return ConnectivePatternSet(entries);
}

ConnectivePatternSet load_patterns(const std::filesystem::path& path) {
  return parse_patterns(detail::read_file(path, "pattern file"), path.string());
}

}  // namespace gist
