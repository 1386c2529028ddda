#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gist/connectives.hpp"
#include "gist/corpus.hpp"
#include "gist/parallel.hpp"
#include "gist/vectors.hpp"
#include "gist/wordnet.hpp"

namespace gist::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

const std::string& expect_string(const json& j, const std::string& where) {
  if (!j.is_string()) config_error(where + " must be a string");
  return j.get_ref<const std::string&>();
}

double expect_number(const json& j, const std::string& where) {
  if (!j.is_number()) config_error(where + " must be a number");
  return j.get<double>();
}

const std::array<Family, 5> kChoiceFamilies = {Family::PCREF, Family::SMCAUSe, Family::SMCAUSwn,
                                               Family::PCCNC, Family::WRDIMGc};

void set_choice(GisConfig& cfg, Family f, const std::string& value) {
  const std::string where = "variants." + std::string(to_string(f));
  auto bad = [&] { config_error(where + ": unknown choice '" + value + "'"); };
  switch (f) {
    case Family::PCREF:
      if (value == "CoREF") {
        cfg.referential = Variant::CoREF;
      } else if (auto s = scheme_from_postfix(value)) {
        cfg.referential = pcref_variant(*s);
      } else {
        bad();
      }
      return;
    case Family::SMCAUSe:
    case Family::SMCAUSwn: {
      auto s = scheme_from_postfix(value);
      if (!s) bad();
      (f == Family::SMCAUSe ? cfg.verb_embedding : cfg.verb_synset) = *s;
      return;
    }
    case Family::PCCNC:
    case Family::WRDIMGc: {
      auto s = parse_lexicon_source(value);
      if (!s) bad();
      (f == Family::PCCNC ? cfg.concreteness : cfg.imageability) = *s;
      return;
    }
    default: config_error(where + ": family has a single variant");
  }
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) config_error("config is not a JSON object");
  RunConfig rc;
  for (const auto& [key, val] : j.items()) {
    if (key == "variants") {
      if (!val.is_object()) config_error("variants must be an object");
      for (const auto& [fam, choice] : val.items()) {
        auto f = parse_family(fam);
        if (!f) config_error("variants: unknown family '" + fam + "'");
        set_choice(rc.gis, *f, expect_string(choice, "variants." + fam));
      }
    } else if (key == "weights") {
      if (!val.is_object()) config_error("weights must be an object");
      for (const auto& [fam, w] : val.items()) {
        auto f = parse_family(fam);
        if (!f) config_error("weights: unknown family '" + fam + "'");
        rc.gis.weights[*f] = expect_number(w, "weights." + fam);
      }
    } else if (key == "missing_policy") {
      auto p = parse_missing_policy(expect_string(val, key));
      if (!p) config_error("missing_policy must be error, drop or impute");
      rc.missing = *p;
    } else if (key == "variance") {
      const auto& s = expect_string(val, key);
      if (s == "pooled") rc.variance = VarianceMode::Pooled;
      else if (s == "welch") rc.variance = VarianceMode::Welch;
      else config_error("variance must be pooled or welch");
    } else if (key == "synset_overlap_norm") {
      const auto& s = expect_string(val, key);
      if (s == "sentences") rc.index.synset_overlap_norm = SynsetOverlapNorm::BySentences;
      else if (s == "pairs") rc.index.synset_overlap_norm = SynsetOverlapNorm::ByPairs;
      else config_error("synset_overlap_norm must be sentences or pairs");
    } else if (key == "verb_stoplist") {
      if (!val.is_array()) config_error("verb_stoplist must be an array");
      for (const auto& v : val) {
        std::string lemma = expect_string(v, "verb_stoplist entry");
        std::transform(lemma.begin(), lemma.end(), lemma.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        rc.index.verb_stoplist.insert(std::move(lemma));
      }
    } else if (key == "threshold") {
      rc.threshold = expect_number(val, key);
      if (!(rc.threshold > 0.0 && rc.threshold < 1.0)) config_error("threshold must be in (0, 1)");
    } else if (key == "labels") {
      if (!val.is_object()) config_error("labels must be an object");
      for (const auto& [side, name] : val.items()) {
        if (side == "low") rc.labels.low = expect_string(name, "labels.low");
        else if (side == "high") rc.labels.high = expect_string(name, "labels.high");
        else config_error("labels: unknown key '" + side + "'");
      }
    } else if (key == "resources") {
      if (!val.is_object()) config_error("resources must be an object");
      for (const auto& [name, p] : val.items()) {
        fs::path path = expect_string(p, "resources." + name);
        if (path.is_relative()) path = base_dir / path;
        if (name == "vectors") rc.resources.vectors = path;
        else if (name == "wordnet") rc.resources.wordnet = path;
        else if (name == "mrc") rc.resources.mrc = path;
        else if (name == "megahr") rc.resources.megahr = path;
        else if (name == "patterns") rc.resources.patterns = path;
        else if (name == "abbreviations") rc.resources.abbreviations = path;
        else config_error("resources: unknown key '" + name + "'");
      }
    } else {
      config_error("unknown config key '" + key + "'");
    }
  }
  validate(rc.gis);
  return rc;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorKind::ParseError, "unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string num(double v, int digits = 10) {
  if (v == 0.0) v = 0.0;  // no "-0"
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string fixed3(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string sci(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", p);
  return buf;
}

std::string p_cell(const GroupComparison& c) { return (c.significant ? "* " : "") + sci(c.p); }

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(cells[i]);
  }
  out << '\n';
}

// Left-aligned first `left` columns, the rest right-aligned.
void write_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows,
                 std::size_t left) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()));
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) line += "  ";
      const std::string pad(width[i] - r[i].size(), ' ');
      line += i < left ? r[i] + pad : pad + r[i];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
}

std::vector<std::string> choice_cells(const GisConfig& cfg) {
  std::vector<std::string> out;
  for (Family f : kChoiceFamilies) out.push_back(cfg.choice(f));
  return out;
}

}  // namespace

std::vector<std::string> score_csv_header() {
  std::vector<std::string> h{"doc_id", "group"};
  for (Variant v : kAllVariants) h.emplace_back(to_string(v));
  for (Family f : kAllFamilies) h.push_back("z_" + std::string(to_string(f)));
  h.emplace_back("gis");
  return h;
}

void write_score_csv(std::ostream& out, std::span<const IndexVector> vectors,
                     const GisBatch* batch) {
  write_row(out, score_csv_header());
  std::map<std::string, const GisResult*> by_id;
  if (batch) {
    for (const auto& r : batch->results) by_id[r.doc_id] = &r;
  }
  for (const auto& iv : vectors) {
    std::vector<std::string> row{iv.doc_id, iv.group_label.value_or("")};
    for (Variant v : kAllVariants) {
      auto x = iv.get(v);
      row.push_back(x ? num(*x) : "");
    }
    auto it = by_id.find(iv.doc_id);
    const GisResult* r = it == by_id.end() ? nullptr : it->second;
    for (Family f : kAllFamilies) row.push_back(r ? num(r->z.at(f)) : "");
    row.push_back(r ? num(r->gis) : "");
    write_row(out, row);
  }
}

std::vector<std::string> search_csv_header() {
  return {"rank",     "config_index", "PCREF",     "SMCAUSe", "SMCAUSwn", "PCCNC",
          "WRDIMGc",  "status",       "low_gist",  "high_gist", "distance", "t_statistic",
          "p_value",  "df",           "n_low",     "n_high",  "significant", "degenerate",
          "error"};
}

void write_search_csv(std::ostream& out, const SearchReport& report) {
  write_row(out, search_csv_header());
  std::size_t rank = 0;
  for (const auto& c : report.ranked) {
    std::vector<std::string> row{std::to_string(++rank), std::to_string(c.config_index)};
    for (auto& s : choice_cells(c.config)) row.push_back(std::move(s));
    for (auto s : {std::string("ok"), num(c.mean_low), num(c.mean_high), num(c.distance), num(c.t),
                   num(c.p, 6), num(c.df), std::to_string(c.n_low), std::to_string(c.n_high),
                   std::string(c.significant ? "1" : "0"), std::string(c.degenerate ? "1" : "0"),
                   std::string()}) {
      row.push_back(std::move(s));
    }
    write_row(out, row);
  }
  for (const auto& f : report.failures) {
    std::vector<std::string> row{"", std::to_string(f.config_index)};
    for (auto& s : choice_cells(f.config)) row.push_back(std::move(s));
    row.emplace_back("failed");
    for (int i = 0; i < 10; ++i) row.emplace_back();
    row.push_back(std::string(to_string(f.kind)) + ": " + f.message);
    write_row(out, row);
  }
}

std::vector<std::string> robustness_csv_header() {
  return {"seed",           "PCREF",           "SMCAUSe",        "SMCAUSwn",
          "PCCNC",          "WRDIMGc",         "train_n",        "train_low_gist",
          "train_high_gist", "train_distance", "train_t",        "train_p_value",
          "test_n",         "test_low_gist",   "test_high_gist", "test_distance",
          "test_t",         "test_p_value",    "test_significant"};
}

void write_robustness_csv(std::ostream& out, std::span<const RobustnessResult> results) {
  write_row(out, robustness_csv_header());
  for (const auto& r : results) {
    std::vector<std::string> row{std::to_string(r.seed)};
    for (auto& s : choice_cells(r.chosen)) row.push_back(std::move(s));
    for (const auto* c : {&r.train, &r.test}) {
      row.push_back(std::to_string(c->n_low + c->n_high));
      row.push_back(fixed3(c->mean_low));
      row.push_back(fixed3(c->mean_high));
      row.push_back(fixed3(c->distance));
      row.push_back(fixed3(c->t));
      row.push_back(sci(c->p));
    }
    row.emplace_back(r.test.significant ? "1" : "0");
    write_row(out, row);
  }
}

namespace {

// Failure with a chosen exit code; run_cli prints it and returns the code.
struct Failure {
  int code;
  std::string message;
};

template <class F>
auto in_phase(int code, const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Failure{code, what + ": " + e.what()};
  }
}

struct Options {
  std::string input, annotated, sidecar, config, labels_file, manifest, out, json_out;
  std::string vectors, wordnet, mrc, megahr, patterns, abbreviations;
  std::string missing_policy, low_label, high_label, synset_norm;
  std::string norms, save_norms, scores, seeds = "1,2,3";
  std::optional<double> threshold;
  unsigned jobs = 0;
  std::size_t top = 10;
  bool welch = false;
};

struct Loaded {
  std::optional<VectorStore> vectors, sidecar;
  std::optional<WordNetDb> wordnet;
  std::optional<PsycholinguisticLexicon> mrc, megahr;
  std::optional<ConnectivePatternSet> patterns;
  std::optional<SentenceSegmenter> segmenter;

  Resources view() const {
    Resources r;
    if (vectors) r.word_vectors = &*vectors;
    if (sidecar) r.sidecar = &*sidecar;
    if (wordnet) r.wordnet = &*wordnet;
    if (mrc) r.mrc = &*mrc;
    if (megahr) r.megahr = &*megahr;
    r.connectives = patterns ? &*patterns : &ConnectivePatternSet::builtin();
    return r;
  }
};

class Runner {
 public:
  Runner(std::string command, Options opt, std::ostream& out, std::ostream& err)
      : command_(std::move(command)), opt_(std::move(opt)), out_(out), err_(err) {}

  int run();

 private:
  void configure();
  void load_resources();
  void load_corpus();
  void score_documents();
  void report_diagnostics(const GisConfig& cfg) const;
  GisBatch gis_batch(const GisConfig& cfg, const FamilyNorms* reference) const;

  int cmd_score();
  int cmd_evaluate();
  int cmd_search();
  int cmd_robustness();
  int cmd_stats();

  std::ostream& sink(std::ofstream& file, const std::string& path, const std::string& what);
  void emit_manifest() const;

  std::string command_;
  Options opt_;
  std::ostream& out_;
  std::ostream& err_;

  RunConfig rc_;
  Loaded res_;
  Corpus corpus_;
  std::vector<IndexVector> vectors_;
};

void Runner::configure() {
  in_phase(kConfigFailure, "config", [&] {
    if (!opt_.config.empty()) {
      const fs::path p = opt_.config;
      std::ifstream in(p, std::ios::binary);
      if (!in) config_error("cannot open config file '" + p.string() + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      rc_ = parse_run_config(ss.str(), p.parent_path());
    }
    auto& r = rc_.resources;
    for (auto [flag, slot] : {std::pair{&opt_.vectors, &r.vectors}, {&opt_.wordnet, &r.wordnet},
                              {&opt_.mrc, &r.mrc}, {&opt_.megahr, &r.megahr},
                              {&opt_.patterns, &r.patterns},
                              {&opt_.abbreviations, &r.abbreviations}}) {
      if (!flag->empty()) *slot = fs::path(*flag);
    }
    if (!opt_.missing_policy.empty()) {
      auto p = parse_missing_policy(opt_.missing_policy);
      if (!p) config_error("--missing-policy must be error, drop or impute");
      rc_.missing = *p;
    }
    if (!opt_.synset_norm.empty()) {
      if (opt_.synset_norm == "sentences") rc_.index.synset_overlap_norm = SynsetOverlapNorm::BySentences;
      else if (opt_.synset_norm == "pairs") rc_.index.synset_overlap_norm = SynsetOverlapNorm::ByPairs;
      else config_error("--synset-norm must be sentences or pairs");
    }
    if (opt_.welch) rc_.variance = VarianceMode::Welch;
    if (!opt_.low_label.empty()) rc_.labels.low = opt_.low_label;
    if (!opt_.high_label.empty()) rc_.labels.high = opt_.high_label;
    if (opt_.threshold) {
      if (!(*opt_.threshold > 0.0 && *opt_.threshold < 1.0)) config_error("--threshold must be in (0, 1)");
      rc_.threshold = *opt_.threshold;
    }
    if (rc_.labels.low == rc_.labels.high) config_error("low and high labels must differ");
    if (opt_.input.empty() == opt_.annotated.empty() && opt_.scores.empty()) {
      config_error("give exactly one of --input or --annotated");
    }
    if (!opt_.sidecar.empty() && opt_.annotated.empty()) {
      config_error("--sidecar only applies to --annotated corpora");
    }
  });
}

void Runner::load_resources() {
  const auto& r = rc_.resources;
  auto load = [&](const char* what, const std::optional<fs::path>& p, auto&& fn) {
    if (!p) return;
    in_phase(kResourceFailure, std::string(what) + " '" + p->string() + "'", [&] { fn(*p); });
  };
  load("word vectors", r.vectors, [&](const fs::path& p) { res_.vectors = load_vectors(p); });
  load("wordnet", r.wordnet, [&](const fs::path& p) { res_.wordnet = load_wordnet(p); });
  load("mrc lexicon", r.mrc,
       [&](const fs::path& p) { res_.mrc = load_lexicon(p, LexiconSource::Mrc); });
  load("megahr lexicon", r.megahr,
       [&](const fs::path& p) { res_.megahr = load_lexicon(p, LexiconSource::Megahr); });
  load("connective patterns", r.patterns,
       [&](const fs::path& p) { res_.patterns = load_patterns(p); });
  load("abbreviations", r.abbreviations,
       [&](const fs::path& p) { res_.segmenter = SentenceSegmenter::from_file(p); });
  if (!opt_.sidecar.empty()) {
    load("sidecar vectors", std::optional<fs::path>(opt_.sidecar),
         [&](const fs::path& p) { res_.sidecar = load_vectors(p); });
  }
}

void Runner::load_corpus() {
  in_phase(kCorpusFailure, "corpus", [&] {
    if (!opt_.input.empty()) {
      corpus_ = load_raw_corpus(opt_.input,
                                res_.segmenter ? *res_.segmenter : SentenceSegmenter::builtin());
    } else {
      corpus_ = load_annotated_corpus(opt_.annotated, res_.sidecar ? &*res_.sidecar : nullptr);
    }
    if (!opt_.labels_file.empty()) {
      // Lowest-priority labels: only documents without one are filled.
      const fs::path p = opt_.labels_file;
      std::ifstream in(p, std::ios::binary);
      if (!in) throw Error(ErrorKind::IoError, "cannot open label file '" + p.string() + "'");
      std::map<std::string, std::string> labels;
      std::string line;
      std::size_t lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
          throw Error(ErrorKind::SchemaError, p.string() + ":" + std::to_string(lineno) +
                                                  ": expected '<doc_id>\\t<label>'");
        }
        labels[line.substr(0, tab)] = line.substr(tab + 1);
      }
      for (auto& d : corpus_.documents) {
        if (d.group_label) continue;
        if (auto it = labels.find(d.id); it != labels.end()) d.group_label = it->second;
      }
    }
  });
}

void Runner::score_documents() {
  const Resources view = res_.view();
  vectors_.assign(corpus_.documents.size(), {});
  parallel_for(corpus_.documents.size(), opt_.jobs, [&](std::size_t i) {
    vectors_[i] = compute_index_vector(corpus_.documents[i], view, rc_.index);
  });
  // Reports list documents by id, whatever the input order.
  std::sort(vectors_.begin(), vectors_.end(),
            [](const IndexVector& a, const IndexVector& b) { return a.doc_id < b.doc_id; });
}

void Runner::report_diagnostics(const GisConfig& cfg) const {
  std::set<Variant> selected;
  for (Family f : kAllFamilies) selected.insert(cfg.variant_for(f));
  for (const auto& iv : vectors_) {
    for (const auto& [v, d] : iv.diagnostics) {
      if (!d.error || !selected.count(v)) continue;
      err_ << "diagnostic: " << iv.doc_id << ' ' << to_string(v) << ' ' << to_string(*d.error)
           << ": " << d.message << '\n';
    }
  }
}

GisBatch Runner::gis_batch(const GisConfig& cfg, const FamilyNorms* reference) const {
  try {
    GisBatch batch = compute_gis(vectors_, cfg, rc_.missing, reference);
    for (const auto& id : batch.dropped) err_ << "dropped: " << id << '\n';
    for (const auto& what : batch.imputed) err_ << "imputed: " << what << '\n';
    for (Family f : batch.zero_variance) err_ << "zero variance: " << to_string(f) << '\n';
    return batch;
  } catch (const Error& e) {
    const int code = e.kind() == ErrorKind::ConfigError ? kConfigFailure : kCorpusFailure;
    throw Failure{code, std::string("scoring: ") + e.what()};
  }
}

std::ostream& Runner::sink(std::ofstream& file, const std::string& path, const std::string& what) {
  if (path.empty() || path == "-") return out_;
  file.open(path, std::ios::binary);
  if (!file) throw Failure{kConfigFailure, "cannot write " + what + " '" + path + "'"};
  return file;
}

int Runner::cmd_score() {
  score_documents();
  report_diagnostics(rc_.gis);
  std::optional<FamilyNorms> reference;
  if (!opt_.norms.empty()) {
    reference = in_phase(kConfigFailure, "norms", [&] { return load_norms(opt_.norms, rc_.gis); });
  }
  const GisBatch batch = gis_batch(rc_.gis, reference ? &*reference : nullptr);
  if (!opt_.save_norms.empty()) {
    in_phase(kConfigFailure, "norms", [&] { save_norms(batch.norms, rc_.gis, opt_.save_norms); });
  }
  std::ofstream file;
  write_score_csv(sink(file, opt_.out, "score CSV"), vectors_, &batch);
  return kOk;
}

int Runner::cmd_evaluate() {
  std::vector<GisResult> results;
  std::optional<GisConfig> cfg;
  if (!opt_.scores.empty()) {
    in_phase(kCorpusFailure, "scores '" + opt_.scores + "'", [&] {
      std::ifstream in(opt_.scores, std::ios::binary);
      if (!in) throw Error(ErrorKind::IoError, "cannot open");
      std::stringstream ss;
      ss << in.rdbuf();
      const auto rows = parse_csv(ss.str());
      if (rows.empty()) throw Error(ErrorKind::SchemaError, "empty file");
      std::map<std::string, std::size_t> col;
      for (std::size_t i = 0; i < rows[0].size(); ++i) col[rows[0][i]] = i;
      for (const char* need : {"doc_id", "group", "gis"}) {
        if (!col.count(need)) throw Error(ErrorKind::SchemaError, std::string("no '") + need + "' column");
      }
      for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != rows[0].size()) {
          throw Error(ErrorKind::SchemaError, "row " + std::to_string(r + 1) + " has " +
                                                  std::to_string(row.size()) + " fields");
        }
        const std::string& g = row[col["gis"]];
        if (g.empty()) continue;
        GisResult res;
        res.doc_id = row[col["doc_id"]];
        if (!row[col["group"]].empty()) res.group_label = row[col["group"]];
        try {
          std::size_t used = 0;
          res.gis = std::stod(g, &used);
          if (used != g.size()) throw std::invalid_argument(g);
        } catch (const std::exception&) {
          throw Error(ErrorKind::SchemaError, "row " + std::to_string(r + 1) + ": bad gis '" + g + "'");
        }
        results.push_back(std::move(res));
      }
    });
  } else {
    score_documents();
    report_diagnostics(rc_.gis);
    results = gis_batch(rc_.gis, nullptr).results;
    cfg = rc_.gis;
  }

  GroupComparison c;
  try {
    c = compare_groups(results, rc_.labels, rc_.threshold, rc_.variance);
  } catch (const Error& e) {
    throw Failure{kGroupFailure, std::string("evaluate: ") + e.what()};
  }
  if (cfg) {
    c.config = *cfg;
    out_ << "config: " << cfg->key() << '\n';
  }
  write_table(out_,
              {{"Low Gist (" + rc_.labels.low + ")", "High Gist (" + rc_.labels.high + ")",
                "Distance", "t-statistic", "df", "p-value"},
               {fixed3(c.mean_low), fixed3(c.mean_high), fixed3(c.distance), fixed3(c.t), num(c.df, 6),
                p_cell(c)}},
              0);
  out_ << "n: " << c.n_low << " low, " << c.n_high << " high; " << to_string(rc_.variance)
       << " variance; * p <= " << num(rc_.threshold, 6)
       << (c.degenerate ? "; degenerate groups (zero variance)" : "") << '\n';

  if (!opt_.json_out.empty()) {
    ordered_json j;
    if (cfg) j["config"] = json::parse(config_json(*cfg));
    j["low_label"] = rc_.labels.low;
    j["high_label"] = rc_.labels.high;
    j["n_low"] = c.n_low;
    j["n_high"] = c.n_high;
    j["mean_low"] = c.mean_low;
    j["mean_high"] = c.mean_high;
    j["distance"] = c.distance;
    j["t_statistic"] = std::isfinite(c.t) ? json(c.t) : json(num(c.t));
    j["df"] = c.df;
    j["p_value"] = c.p;
    j["threshold"] = rc_.threshold;
    j["significant"] = c.significant;
    j["degenerate"] = c.degenerate;
    std::ofstream file;
    sink(file, opt_.json_out, "JSON report") << j.dump(2) << '\n';
  }
  return kOk;
}

SearchOptions search_options(const RunConfig& rc, unsigned jobs) {
  SearchOptions o;
  o.labels = rc.labels;
  o.threshold = rc.threshold;
  o.variance = rc.variance;
  o.missing = rc.missing;
  o.weights = rc.gis.weights;
  o.jobs = jobs;
  return o;
}

int Runner::cmd_search() {
  score_documents();
  SearchReport report;
  try {
    report = combination_search(vectors_, search_options(rc_, opt_.jobs));
  } catch (const Error& e) {
    throw Failure{kGroupFailure, std::string("search: ") + e.what()};
  }
  std::vector<std::vector<std::string>> rows{{"PCREF", "SMCAUSe", "SMCAUSwn", "PCCNC", "WRDIMGc",
                                              "Low Gist", "High Gist", "Distance", "t-statistic",
                                              "p-value"}};
  for (std::size_t i = 0; i < std::min(opt_.top, report.ranked.size()); ++i) {
    const auto& c = report.ranked[i];
    auto row = choice_cells(c.config);
    for (auto s : {fixed3(c.mean_low), fixed3(c.mean_high), fixed3(c.distance), fixed3(c.t), p_cell(c)})
      row.push_back(std::move(s));
    rows.push_back(std::move(row));
  }
  write_table(out_, rows, 5);
  const std::size_t n_sig = report.significant().size();
  out_ << report.ranked.size() << " configs scored, " << report.failures.size() << " failed, "
       << n_sig << " significant (* p <= " << num(rc_.threshold, 6) << ")\n";
  for (const auto& f : report.failures) {
    err_ << "failed: " << f.config.key() << ": " << to_string(f.kind) << ": " << f.message << '\n';
  }
  if (!opt_.out.empty()) {
    std::ofstream file;
    write_search_csv(sink(file, opt_.out, "search CSV"), report);
  }
  return kOk;
}

int Runner::cmd_robustness() {
  std::vector<std::uint64_t> seeds;
  in_phase(kConfigFailure, "--seeds", [&] {
    for (const auto& s : CLI::detail::split(opt_.seeds, ',')) {
      std::uint64_t v = 0;
      const auto* end = s.data() + s.size();
      auto [p, ec] = std::from_chars(s.data(), end, v);
      if (ec != std::errc() || p != end) config_error("bad seed '" + s + "'");
      seeds.push_back(v);
    }
    if (seeds.empty()) config_error("no seeds given");
  });
  score_documents();
  const SearchOptions so = search_options(rc_, opt_.jobs);
  std::vector<RobustnessResult> results;
  for (std::uint64_t seed : seeds) {
    try {
      results.push_back(robustness_split_eval(vectors_, so, seed));
    } catch (const Error& e) {
      const bool group = e.kind() == ErrorKind::GroupTooSmall || e.kind() == ErrorKind::MissingLabel;
      throw Failure{group ? kGroupFailure : kCorpusFailure, std::string("robustness: ") + e.what()};
    }
  }
  std::vector<std::vector<std::string>> rows{
      {"Seed", "PCREF", "SMCAUSe", "SMCAUSwn", "PCCNC", "WRDIMGc", "Train Low", "Train High",
       "Train p", "Test Low", "Test High", "Test p"}};
  for (const auto& r : results) {
    std::vector<std::string> row{std::to_string(r.seed)};
    for (auto& s : choice_cells(r.chosen)) row.push_back(std::move(s));
    for (const auto* c : {&r.train, &r.test}) {
      row.push_back(fixed3(c->mean_low));
      row.push_back(fixed3(c->mean_high));
      row.push_back(p_cell(*c));
    }
    rows.push_back(std::move(row));
  }
  write_table(out_, rows, 6);
  if (!opt_.out.empty()) {
    std::ofstream file;
    write_robustness_csv(sink(file, opt_.out, "robustness CSV"), results);
  }
  return kOk;
}

int Runner::cmd_stats() {
  std::map<std::string, std::vector<const Document*>> groups;
  std::vector<const Document*> all;
  for (const auto& d : corpus_.documents) {
    all.push_back(&d);
    groups[d.group_label.value_or("(none)")].push_back(&d);
  }
  std::vector<std::vector<std::string>> rows{
      {"group", "documents", "paragraphs", "sentences", "sentences/paragraph"}};
  auto add = [&](const std::string& name, const std::vector<const Document*>& docs) {
    const CorpusShape s = corpus_shape_stats(docs);
    rows.push_back({name, std::to_string(s.n_docs), std::to_string(s.n_paragraphs),
                    std::to_string(s.n_sentences), num(s.sentences_per_paragraph, 3)});
  };
  for (const auto& [name, docs] : groups) add(name, docs);
  add("all", all);
  write_table(out_, rows, 1);
  return kOk;
}

std::string checksum(const fs::path& p) {
  std::vector<fs::path> files;
  if (fs::is_directory(p)) {
    for (const auto& e : fs::recursive_directory_iterator(p)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(p);
  }
  std::string blob;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    blob += fs::relative(f, fs::is_directory(p) ? p : p.parent_path()).generic_string();
    blob += '\0';
    blob += hex64(fnv1a64(ss.str()));
  }
  return hex64(fnv1a64(blob));
}

void Runner::emit_manifest() const {
  ordered_json j;
  j["command"] = command_;
  j["config_hash"] = config_hash(rc_.gis);
  j["config"] = json::parse(config_json(rc_.gis));
  j["missing_policy"] = std::string(to_string(rc_.missing));
  j["variance"] = std::string(to_string(rc_.variance));
  ordered_json resources = ordered_json::object();
  const auto& r = rc_.resources;
  auto add = [&](const char* name, const std::optional<fs::path>& p) {
    if (p) resources[name] = {{"path", p->string()}, {"fnv1a64", checksum(*p)}};
  };
  add("vectors", r.vectors);
  add("wordnet", r.wordnet);
  add("mrc", r.mrc);
  add("megahr", r.megahr);
  add("patterns", r.patterns);
  add("abbreviations", r.abbreviations);
  if (!opt_.sidecar.empty()) add("sidecar", fs::path(opt_.sidecar));
  j["resources"] = resources;
  ordered_json corpus;
  const std::string input = !opt_.input.empty() ? opt_.input : !opt_.annotated.empty() ? opt_.annotated : opt_.scores;
  corpus["path"] = input;
  corpus["fnv1a64"] = checksum(input);
  corpus["source"] = corpus_.provenance.source;
  corpus["parser"] = corpus_.provenance.parser;
  corpus["documents"] = corpus_.documents.size();
  j["corpus"] = corpus;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char ts[32];
  std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", &tm);
  j["timestamp"] = ts;
  std::ofstream out(opt_.manifest, std::ios::binary);
  if (!out) throw Failure{kConfigFailure, "cannot write manifest '" + opt_.manifest + "'"};
  out << j.dump(2) << '\n';
}

int Runner::run() {
  configure();
  int rc = kOk;
  if (command_ == "evaluate" && !opt_.scores.empty()) {
    rc = cmd_evaluate();
  } else {
    load_resources();
    load_corpus();
    if (command_ == "score") rc = cmd_score();
    else if (command_ == "evaluate") rc = cmd_evaluate();
    else if (command_ == "search") rc = cmd_search();
    else if (command_ == "robustness") rc = cmd_robustness();
    else rc = cmd_stats();
  }
  if (!opt_.manifest.empty()) emit_manifest();
  return rc;
}

void add_corpus_options(CLI::App& app, Options& o) {
  app.add_option("--input", o.input, "Directory of raw .txt documents (sub-directory = group)");
  app.add_option("--annotated", o.annotated, "Annotated corpus (JSON array, object or JSONL)");
  app.add_option("--sidecar", o.sidecar, "Vector sidecar resolving embedding/vector refs");
  app.add_option("--labels", o.labels_file, "TSV of doc_id<TAB>label for unlabelled documents");
  app.add_option("--abbreviations", o.abbreviations, "Abbreviation list for raw text");
  app.add_option("--emit-manifest", o.manifest, "Write a run manifest (JSON)");
  app.add_option("--config", o.config, "Config file (JSON)");
}

void add_index_options(CLI::App& app, Options& o) {
  app.add_option("--vectors", o.vectors, "Static word vectors (text or .bin)");
  app.add_option("--wordnet", o.wordnet, "WordNet database directory");
  app.add_option("--mrc", o.mrc, "MRC-style lexicon TSV");
  app.add_option("--megahr", o.megahr, "megahr-style lexicon TSV");
  app.add_option("--patterns", o.patterns, "Causal connective patterns TSV");
  app.add_option("--missing-policy", o.missing_policy, "error | drop | impute");
  app.add_option("--synset-norm", o.synset_norm, "SMCAUSwn denominator: sentences | pairs");
  app.add_option("--jobs,-j", o.jobs, "Worker threads (0 = all cores)");
}

void add_group_options(CLI::App& app, Options& o) {
  app.add_option("--low-label", o.low_label, "Low-gist group label (default low)");
  app.add_option("--high-label", o.high_label, "High-gist group label (default high)");
  app.add_option("--threshold", o.threshold, "Significance threshold (default 0.05)");
  app.add_flag("--welch", o.welch, "Unequal-variance t-test");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gist Inference Score engine"};
  app.name("gist");
  app.require_subcommand(1);
  Options o;

  auto* score = app.add_subcommand("score", "Index values, z-scores and GIS per document (CSV)");
  add_corpus_options(*score, o);
  add_index_options(*score, o);
  score->add_option("--out,-o", o.out, "Output CSV (default stdout)");
  score->add_option("--norms", o.norms, "Reference norms file to z-score against");
  score->add_option("--save-norms", o.save_norms, "Write this batch's norms");

  auto* evaluate = app.add_subcommand("evaluate", "Compare low vs high gist groups");
  add_corpus_options(*evaluate, o);
  add_index_options(*evaluate, o);
  add_group_options(*evaluate, o);
  evaluate->add_option("--scores", o.scores, "Score CSV from `gist score` instead of a corpus");
  evaluate->add_option("--json", o.json_out, "Write the comparison as JSON");

  auto* search = app.add_subcommand("search", "Rank all variant combinations by GIS distance");
  add_corpus_options(*search, o);
  add_index_options(*search, o);
  add_group_options(*search, o);
  search->add_option("--top", o.top, "Rows in the printed table (default 10)");
  search->add_option("--out,-o", o.out, "Full report CSV");

  auto* robust = app.add_subcommand("robustness", "Seeded train/test split evaluation");
  add_corpus_options(*robust, o);
  add_index_options(*robust, o);
  add_group_options(*robust, o);
  robust->add_option("--seeds", o.seeds, "Comma-separated seeds (default 1,2,3)");
  robust->add_option("--out,-o", o.out, "Report CSV");

  auto* stats = app.add_subcommand("stats", "Corpus shape: documents, paragraphs, sentences");
  add_corpus_options(*stats, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigFailure;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Runner runner(command, std::move(o), out, err);
    return runner.run();
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  }
}

}  // namespace gist::cli
