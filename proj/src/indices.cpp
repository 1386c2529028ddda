#include "gist/indices.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gist/connectives.hpp"
#include "gist/vectors.hpp"
#include "gist/wordnet.hpp"
#include "text_util.hpp"

namespace gist {

const std::array<Variant, kVariantCount> kAllVariants = {
    Variant::PCREF_1,     Variant::PCREF_a,      Variant::PCREF_1p,    Variant::PCREF_ap,
    Variant::CoREF,       Variant::PCDC,         Variant::SMCAUSe_1,   Variant::SMCAUSe_a,
    Variant::SMCAUSe_1p,  Variant::SMCAUSe_ap,   Variant::SMCAUSwn_1,  Variant::SMCAUSwn_a,
    Variant::SMCAUSwn_1p, Variant::SMCAUSwn_ap,  Variant::PCCNC_mrc,   Variant::PCCNC_megahr,
    Variant::WRDIMGc_mrc, Variant::WRDIMGc_megahr, Variant::WRDHYPnv,
};

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::PCREF_1: return "PCREF_1";
    case Variant::PCREF_a: return "PCREF_a";
    case Variant::PCREF_1p: return "PCREF_1p";
    case Variant::PCREF_ap: return "PCREF_ap";
    case Variant::CoREF: return "CoREF";
    case Variant::PCDC: return "PCDC";
    case Variant::SMCAUSe_1: return "SMCAUSe_1";
    case Variant::SMCAUSe_a: return "SMCAUSe_a";
    case Variant::SMCAUSe_1p: return "SMCAUSe_1p";
    case Variant::SMCAUSe_ap: return "SMCAUSe_ap";
    case Variant::SMCAUSwn_1: return "SMCAUSwn_1";
    case Variant::SMCAUSwn_a: return "SMCAUSwn_a";
    case Variant::SMCAUSwn_1p: return "SMCAUSwn_1p";
    case Variant::SMCAUSwn_ap: return "SMCAUSwn_ap";
    case Variant::PCCNC_mrc: return "PCCNC_mrc";
    case Variant::PCCNC_megahr: return "PCCNC_megahr";
    case Variant::WRDIMGc_mrc: return "WRDIMGc_mrc";
    case Variant::WRDIMGc_megahr: return "WRDIMGc_megahr";
    case Variant::WRDHYPnv: return "WRDHYPnv";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view name) noexcept {
  for (Variant v : kAllVariants) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

namespace {

constexpr std::array<Variant, 4> kPcref = {Variant::PCREF_1, Variant::PCREF_a, Variant::PCREF_1p,
                                           Variant::PCREF_ap};
constexpr std::array<Variant, 4> kSmcause = {Variant::SMCAUSe_1, Variant::SMCAUSe_a,
                                             Variant::SMCAUSe_1p, Variant::SMCAUSe_ap};
constexpr std::array<Variant, 4> kSmcauswn = {Variant::SMCAUSwn_1, Variant::SMCAUSwn_a,
                                              Variant::SMCAUSwn_1p, Variant::SMCAUSwn_ap};

std::size_t scheme_slot(Scheme s) noexcept { return static_cast<std::size_t>(s); }

}  // namespace

Variant pcref_variant(Scheme s) noexcept { return kPcref[scheme_slot(s)]; }
Variant smcause_variant(Scheme s) noexcept { return kSmcause[scheme_slot(s)]; }
Variant smcauswn_variant(Scheme s) noexcept { return kSmcauswn[scheme_slot(s)]; }
Variant pccnc_variant(LexiconSource s) noexcept {
  return s == LexiconSource::Mrc ? Variant::PCCNC_mrc : Variant::PCCNC_megahr;
}
Variant wrdimgc_variant(LexiconSource s) noexcept {
  return s == LexiconSource::Mrc ? Variant::WRDIMGc_mrc : Variant::WRDIMGc_megahr;
}

std::optional<double> IndexVector::get(Variant v) const {
  auto it = values.find(v);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

namespace {

using Embedding = std::optional<std::vector<double>>;

std::vector<double> widen(std::span<const float> v) { return {v.begin(), v.end()}; }

// Units grouped by paragraph plus their (possibly missing) embeddings.
struct EmbeddedUnits {
  std::vector<std::size_t> group_sizes;
  std::vector<Embedding> vectors;
  std::size_t resolved = 0;
};

Embedding static_mean(const Sentence& s, const VectorStore& store) {
  std::vector<double> sum(store.dim(), 0.0);
  std::size_t known = 0;
  for (const auto& tok : s.tokens) {
    if (auto v = store.lookup(tok.surface)) {
      for (std::size_t d = 0; d < v->size(); ++d) sum[d] += (*v)[d];
      ++known;
    }
  }
  if (known == 0) return std::nullopt;
  for (double& x : sum) x /= static_cast<double>(known);
  return sum;
}

EmbeddedUnits sentence_embeddings(const Document& doc, const Resources& res) {
  EmbeddedUnits out;
  for (const auto& para : doc.paragraphs) {
    out.group_sizes.push_back(para.sentences.size());
    for (const auto& sent : para.sentences) {
      Embedding e;
      if (sent.embedding_ref && res.sidecar) {
        if (auto v = res.sidecar->lookup(*sent.embedding_ref)) e = widen(*v);
      }
      if (!e && res.word_vectors) e = static_mean(sent, *res.word_vectors);
      if (e) ++out.resolved;
      out.vectors.push_back(std::move(e));
    }
  }
  return out;
}

bool is_counted_verb(const Token& tok, const IndexConfig& cfg) {
  if (tok.pos != Pos::Verb) return false;
  return !cfg.verb_stoplist.contains(detail::to_lower_ascii(tok.lemma));
}

struct VerbUnits {
  std::vector<std::size_t> group_sizes;
  std::vector<const Token*> verbs;
};

VerbUnits collect_verbs(const Document& doc, const IndexConfig& cfg) {
  VerbUnits out;
  for (const auto& para : doc.paragraphs) {
    std::size_t n = 0;
    for (const auto& sent : para.sentences)
      for (const auto& tok : sent.tokens)
        if (is_counted_verb(tok, cfg)) {
          out.verbs.push_back(&tok);
          ++n;
        }
    out.group_sizes.push_back(n);
  }
  return out;
}

EmbeddedUnits verb_embeddings(const VerbUnits& verbs, const Resources& res) {
  EmbeddedUnits out;
  out.group_sizes = verbs.group_sizes;
  for (const Token* tok : verbs.verbs) {
    Embedding e;
    if (tok->vector_ref && res.sidecar) {
      if (auto v = res.sidecar->lookup(*tok->vector_ref)) e = widen(*v);
    }
    if (!e && res.word_vectors) {
      auto v = res.word_vectors->lookup(tok->surface);
      if (!v && !tok->lemma.empty()) v = res.word_vectors->lookup(tok->lemma);
      if (v) e = widen(*v);
    }
    if (e) ++out.resolved;
    out.vectors.push_back(std::move(e));
  }
  return out;
}

Measurement cosine_aggregate(const EmbeddedUnits& units, Scheme scheme) {
  const auto r = aggregate(units.group_sizes, scheme, [&](std::size_t i, std::size_t j) {
    const auto& a = units.vectors[i];
    const auto& b = units.vectors[j];
    if (!a || !b) return std::optional<double>{};
    return cosine(*a, *b);
  });
  Measurement m;
  m.value = r.mean;
  m.units = units.vectors.size();
  m.matched = units.resolved;
  m.pairs = r.pairs;
  m.skipped = r.skipped;
  return m;
}

Measurement pcref_from(const EmbeddedUnits& units, Scheme scheme) {
  if (units.resolved == 0) {
    throw Error(ErrorKind::MissingResource, "no sentence resolves to an embedding");
  }
  return cosine_aggregate(units, scheme);
}

Measurement smcause_from(const EmbeddedUnits& units, Scheme scheme) {
  if (units.vectors.size() < 2) {
    throw Error(ErrorKind::MissingResource,
                std::to_string(units.vectors.size()) + " verb(s); need at least 2");
  }
  if (units.resolved == 0) throw Error(ErrorKind::MissingResource, "no verb has a vector");
  return cosine_aggregate(units, scheme);
}

std::string paragraph_text(const Paragraph& para) {
  std::string text;
  for (const auto& sent : para.sentences) {
    for (const auto& tok : sent.tokens) {
      if (!text.empty()) text += ' ';
      text += tok.surface;
    }
  }
  return text;
}

}  // namespace

Measurement pcref(const Document& doc, Scheme scheme, const Resources& res) {
  return pcref_from(sentence_embeddings(doc, res), scheme);
}

Measurement coref_index(const Document& doc) {
  Measurement m;
  double sum = 0.0;
  for (std::size_t p = 0; p < doc.paragraphs.size(); ++p) {
    const auto& para = doc.paragraphs[p];
    if (!para.coref_chain_count) {
      throw Error(ErrorKind::MissingResource,
                  "paragraph " + std::to_string(p) + " has no coreference chain count");
    }
    sum += static_cast<double>(*para.coref_chain_count) /
           static_cast<double>(para.sentences.size());
  }
  m.units = doc.paragraphs.size();
  m.matched = m.units;
  m.value = sum / static_cast<double>(doc.paragraphs.size());
  return m;
}

Measurement pcdc(const Document& doc, const ConnectivePatternSet& patterns) {
  std::string text;
  for (const auto& para : doc.paragraphs) {
    if (!text.empty()) text += '\n';
    text += paragraph_text(para);
  }
  Measurement m;
  m.units = doc.sentence_count();
  m.matched = patterns.find_all(text).size();
  m.value = static_cast<double>(m.matched) / static_cast<double>(m.units);
  return m;
}

Measurement smcause_embeddings(const Document& doc, Scheme scheme, const Resources& res,
                               const IndexConfig& cfg) {
  return smcause_from(verb_embeddings(collect_verbs(doc, cfg), res), scheme);
}

Measurement smcause_wordnet(const Document& doc, Scheme scheme, const WordNetDb& db,
                            const IndexConfig& cfg) {
  const VerbUnits verbs = collect_verbs(doc, cfg);
  if (verbs.verbs.size() < 2) {
    throw Error(ErrorKind::MissingResource,
                std::to_string(verbs.verbs.size()) + " verb(s); need at least 2");
  }
  const auto pairs = enumerate_pairs(verbs.group_sizes, scheme);
  Measurement m;
  m.units = verbs.verbs.size();
  m.pairs = pairs.size();
  for (const Token* v : verbs.verbs) {
    if (!db.synsets_of(v->lemma, Pos::Verb).empty()) ++m.matched;
  }
  std::size_t shared = 0;
  for (const auto& p : pairs) {
    if (db.same_synset(verbs.verbs[p.first]->lemma, verbs.verbs[p.second]->lemma, Pos::Verb)) {
      ++shared;
    }
  }
  const double denom = cfg.synset_overlap_norm == SynsetOverlapNorm::BySentences
                           ? static_cast<double>(doc.sentence_count())
                           : static_cast<double>(pairs.size());
  m.value = static_cast<double>(shared) / denom;
  return m;
}

ConcretenessImageability concreteness_imageability(const Document& doc,
                                                   const PsycholinguisticLexicon& lex) {
  double conc = 0.0, imag = 0.0;
  std::size_t units = 0, matched = 0;
  for (const auto& para : doc.paragraphs)
    for (const auto& sent : para.sentences)
      for (const auto& tok : sent.tokens) {
        if (!is_content(tok.pos)) continue;
        ++units;
        if (auto n = lex.lookup(tok)) {
          conc += n->concreteness;
          imag += n->imageability;
          ++matched;
        }
      }
  if (matched == 0) {
    throw Error(ErrorKind::MissingResource,
                "none of " + std::to_string(units) + " content tokens found in the " +
                    std::string(to_string(lex.source())) + " lexicon");
  }
  ConcretenessImageability out;
  out.concreteness.units = out.imageability.units = units;
  out.concreteness.matched = out.imageability.matched = matched;
  out.concreteness.value = conc / static_cast<double>(matched);
  out.imageability.value = imag / static_cast<double>(matched);
  return out;
}

Measurement hypernymy_nouns_verbs(const Document& doc, const WordNetDb& db) {
  double total = 0.0;
  Measurement m;
  for (const auto& para : doc.paragraphs)
    for (const auto& sent : para.sentences)
      for (const auto& tok : sent.tokens) {
        if (tok.pos != Pos::Noun && tok.pos != Pos::Verb) continue;
        ++m.units;
        auto synsets = db.synsets_of(tok.lemma.empty() ? tok.surface : tok.lemma, tok.pos);
        if (synsets.empty()) continue;
        double depth = 0.0;
        for (const auto& id : synsets) depth += db.hypernym_path_length(id);
        total += depth / static_cast<double>(synsets.size());
        ++m.matched;
      }
  if (m.matched == 0) {
    throw Error(ErrorKind::MissingResource, "no noun or verb resolves to a WordNet synset");
  }
  m.value = total / static_cast<double>(m.matched);
  return m;
}

IndexVector compute_index_vector(const Document& doc, const Resources& res,
                                 const IndexConfig& cfg) {
  IndexVector out;
  out.doc_id = doc.id;
  out.group_label = doc.group_label;

  auto enabled = [&](Variant v) { return cfg.enabled.contains(v); };
  auto any_enabled = [&](std::initializer_list<Variant> vs) {
    return std::any_of(vs.begin(), vs.end(), enabled);
  };
  auto record = [&](Variant v, auto&& compute) {
    if (!enabled(v)) return;
    VariantDiagnostic diag;
    try {
      diag.detail = compute();
      if (!std::isfinite(diag.detail.value)) {
        throw Error(ErrorKind::MissingResource, "non-finite value");
      }
      out.values[v] = diag.detail.value;
    } catch (const Error& e) {
      diag.error = e.kind();
      diag.message = e.detail();
    }
    out.diagnostics[v] = std::move(diag);
  };
  auto missing = [](const char* what) {
    return [what]() -> Measurement {
      throw Error(ErrorKind::MissingResource, std::string("no ") + what + " loaded");
    };
  };

  if (any_enabled({kPcref[0], kPcref[1], kPcref[2], kPcref[3]})) {
    const EmbeddedUnits sentences = sentence_embeddings(doc, res);
    for (Scheme s : kAllSchemes) {
      record(pcref_variant(s), [&] { return pcref_from(sentences, s); });
    }
  }
  record(Variant::CoREF, [&] { return coref_index(doc); });
  if (res.connectives) {
    record(Variant::PCDC, [&] { return pcdc(doc, *res.connectives); });
  } else {
    record(Variant::PCDC, missing("connective pattern set"));
  }

  const VerbUnits verbs = collect_verbs(doc, cfg);
  if (any_enabled({kSmcause[0], kSmcause[1], kSmcause[2], kSmcause[3]})) {
    const EmbeddedUnits embedded = verb_embeddings(verbs, res);
    for (Scheme s : kAllSchemes) {
      record(smcause_variant(s), [&] { return smcause_from(embedded, s); });
    }
  }
  for (Scheme s : kAllSchemes) {
    if (res.wordnet) {
      record(smcauswn_variant(s), [&] { return smcause_wordnet(doc, s, *res.wordnet, cfg); });
    } else {
      record(smcauswn_variant(s), missing("WordNet database"));
    }
  }

  for (LexiconSource src : {LexiconSource::Mrc, LexiconSource::Megahr}) {
    const PsycholinguisticLexicon* lex = src == LexiconSource::Mrc ? res.mrc : res.megahr;
    const Variant conc = pccnc_variant(src), imag = wrdimgc_variant(src);
    if (!enabled(conc) && !enabled(imag)) continue;
    if (!lex) {
      const std::string what = std::string(to_string(src)) + " lexicon";
      record(conc, missing(what.c_str()));
      record(imag, missing(what.c_str()));
      continue;
    }
    std::optional<ConcretenessImageability> ci;
    std::optional<Error> failure;
    try {
      ci = concreteness_imageability(doc, *lex);
    } catch (const Error& e) {
      failure = e;
    }
    record(conc, [&] {
      if (failure) throw *failure;
      return ci->concreteness;
    });
    record(imag, [&] {
      if (failure) throw *failure;
      return ci->imageability;
    });
  }

  if (res.wordnet) {
    record(Variant::WRDHYPnv, [&] { return hypernymy_nouns_verbs(doc, *res.wordnet); });
  } else {
    record(Variant::WRDHYPnv, missing("WordNet database"));
  }
  return out;
}

}  // namespace gist
