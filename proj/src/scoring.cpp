#include "gist/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "text_util.hpp"

namespace gist {

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::PCREF: return "PCREF";
    case Family::PCDC: return "PCDC";
    case Family::SMCAUSe: return "SMCAUSe";
    case Family::SMCAUSwn: return "SMCAUSwn";
    case Family::PCCNC: return "PCCNC";
    case Family::WRDIMGc: return "WRDIMGc";
    case Family::WRDHYPnv: return "WRDHYPnv";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
  for (Family f : kAllFamilies) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

Weights default_weights() {
  return {{Family::PCREF, 1.0},     {Family::PCDC, 1.0},  {Family::SMCAUSe, 1.0},
          {Family::SMCAUSwn, -1.0}, {Family::PCCNC, -1.0}, {Family::WRDIMGc, -1.0},
          {Family::WRDHYPnv, -1.0}};
}

std::string_view to_string(MissingPolicy p) noexcept {
  switch (p) {
    case MissingPolicy::Error: return "error";
    case MissingPolicy::Drop: return "drop";
    case MissingPolicy::Impute: return "impute";
  }
  return "?";
}

std::optional<MissingPolicy> parse_missing_policy(std::string_view name) noexcept {
  if (name == "error") return MissingPolicy::Error;
  if (name == "drop") return MissingPolicy::Drop;
  if (name == "impute") return MissingPolicy::Impute;
  return std::nullopt;
}

Variant GisConfig::variant_for(Family f) const {
  switch (f) {
    case Family::PCREF: return referential;
    case Family::PCDC: return Variant::PCDC;
    case Family::SMCAUSe: return smcause_variant(verb_embedding);
    case Family::SMCAUSwn: return smcauswn_variant(verb_synset);
    case Family::PCCNC: return pccnc_variant(concreteness);
    case Family::WRDIMGc: return wrdimgc_variant(imageability);
    case Family::WRDHYPnv: return Variant::WRDHYPnv;
  }
  return Variant::PCDC;
}

std::string GisConfig::choice(Family f) const {
  switch (f) {
    case Family::PCREF:
      if (referential == Variant::CoREF) return "CoREF";
      for (Scheme s : kAllSchemes) {
        if (pcref_variant(s) == referential) return std::string(postfix(s));
      }
      return std::string(to_string(referential));
    case Family::SMCAUSe: return std::string(postfix(verb_embedding));
    case Family::SMCAUSwn: return std::string(postfix(verb_synset));
    case Family::PCCNC: return std::string(to_string(concreteness));
    case Family::WRDIMGc: return std::string(to_string(imageability));
    case Family::PCDC:
    case Family::WRDHYPnv: return std::string(to_string(f));
  }
  return "?";
}

std::string GisConfig::key() const {
  std::string k;
  for (Family f : {Family::PCREF, Family::SMCAUSe, Family::SMCAUSwn, Family::PCCNC,
                   Family::WRDIMGc}) {
    if (!k.empty()) k += ' ';
    k += std::string(to_string(f)) + "=" + choice(f);
  }
  return k;
}

void validate(const GisConfig& cfg) {
  const bool pcref_ok = cfg.referential == Variant::CoREF ||
                        std::any_of(kAllSchemes.begin(), kAllSchemes.end(), [&](Scheme s) {
                          return pcref_variant(s) == cfg.referential;
                        });
  if (!pcref_ok) {
    throw Error(ErrorKind::ConfigError, "PCREF variant '" +
                                            std::string(to_string(cfg.referential)) +
                                            "' is not a referential cohesion variant");
  }
  for (Family f : kAllFamilies) {
    auto it = cfg.weights.find(f);
    if (it == cfg.weights.end()) {
      throw Error(ErrorKind::ConfigError, "no weight for " + std::string(to_string(f)));
    }
    if (!std::isfinite(it->second)) {
      throw Error(ErrorKind::ConfigError, "weight for " + std::string(to_string(f)) + " is not finite");
    }
  }
}

ZScores zscore_batch(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorKind::TooFewDocuments,
                "z-scores need at least 2 values, got " + std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::MissingResource, "non-finite value in z-score batch");
  }
  ZScores out;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  double mean = sum / n;
  // One refinement pass; matters when the spread is tiny next to the mean.
  double resid = 0.0;
  for (double v : values) resid += v - mean;
  mean += resid / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  out.stats = {mean, std::sqrt(ss / n), values.size()};

  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  out.zero_variance = *lo == *hi || out.stats.stddev == 0.0;
  if (out.zero_variance) {
    out.stats.stddev = 0.0;
    out.z.assign(values.size(), 0.0);
  } else {
    out.z.reserve(values.size());
    for (double v : values) out.z.push_back((v - mean) / out.stats.stddev);
  }
  return out;
}

double zscore(double x, const NormStats& norms) noexcept {
  if (norms.stddev == 0.0) return 0.0;
  return (x - norms.mean) / norms.stddev;
}

GisBatch compute_gis(std::span<const IndexVector> vectors, const GisConfig& config,
                     MissingPolicy policy, const FamilyNorms* reference) {
  validate(config);
  GisBatch batch;

  // Which documents survive the missing-value policy.
  std::vector<const IndexVector*> kept;
  for (const auto& iv : vectors) {
    bool complete = true;
    for (Family f : kAllFamilies) {
      const Variant v = config.variant_for(f);
      if (iv.get(v)) continue;
      complete = false;
      if (policy == MissingPolicy::Error) {
        std::string why;
        if (auto d = iv.diagnostics.find(v); d != iv.diagnostics.end() && d->second.error) {
          why = " (" + std::string(to_string(*d->second.error)) + ": " + d->second.message + ")";
        }
        throw Error(ErrorKind::MissingVariant, "document '" + iv.doc_id + "' lacks " +
                                                   std::string(to_string(v)) + " for family " +
                                                   std::string(to_string(f)) + why);
      }
    }
    if (!complete && policy == MissingPolicy::Drop) {
      batch.dropped.push_back(iv.doc_id);
      continue;
    }
    kept.push_back(&iv);
  }

  const std::size_t n = kept.size();
  std::map<Family, std::vector<double>> z;
  for (Family f : kAllFamilies) {
    const Variant v = config.variant_for(f);
    std::vector<double> raw(n);
    std::optional<double> fill;
    for (std::size_t i = 0; i < n; ++i) {
      if (auto x = kept[i]->get(v)) {
        raw[i] = *x;
        continue;
      }
      if (!fill) {
        double sum = 0.0;
        std::size_t present = 0;
        for (const auto* iv : kept) {
          if (auto x = iv->get(v)) sum += *x, ++present;
        }
        if (present == 0) {
          throw Error(ErrorKind::MissingVariant,
                      "no document has " + std::string(to_string(v)) + " to impute from");
        }
        fill = sum / static_cast<double>(present);
      }
      raw[i] = *fill;
      batch.imputed.push_back(kept[i]->doc_id + ":" + std::string(to_string(v)));
    }

    if (reference) {
      auto it = reference->find(f);
      if (it == reference->end() || it->second.variant != v) {
        throw Error(ErrorKind::ConfigError, "reference norms do not cover " +
                                                std::string(to_string(v)) + " for family " +
                                                std::string(to_string(f)));
      }
      batch.norms[f] = it->second;
      if (it->second.stats.stddev == 0.0) batch.zero_variance.insert(f);
      auto& zf = z[f];
      for (double x : raw) zf.push_back(zscore(x, it->second.stats));
    } else {
      ZScores zs = zscore_batch(raw);
      batch.norms[f] = {v, zs.stats};
      if (zs.zero_variance) batch.zero_variance.insert(f);
      z[f] = std::move(zs.z);
    }
  }

  batch.results.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    GisResult r;
    r.doc_id = kept[i]->doc_id;
    r.group_label = kept[i]->group_label;
    for (Family f : kAllFamilies) {
      const double zf = z[f][i];
      r.z[f] = zf;
      r.gis += config.weights.at(f) * zf;
    }
    batch.results.push_back(std::move(r));
  }
  return batch;
}

std::vector<GisConfig> enumerate_combinations(const CombinationSpace& space,
                                              const Weights& weights) {
  std::vector<GisConfig> out;
  out.reserve(space.referential.size() * space.verb_embedding.size() * space.verb_synset.size() *
              space.concreteness.size() * space.imageability.size());
  for (Variant ref : space.referential)
    for (Scheme se : space.verb_embedding)
      for (Scheme sw : space.verb_synset)
        for (LexiconSource c : space.concreteness)
          for (LexiconSource i : space.imageability) {
            GisConfig cfg;
            cfg.referential = ref;
            cfg.verb_embedding = se;
            cfg.verb_synset = sw;
            cfg.concreteness = c;
            cfg.imageability = i;
            cfg.weights = weights;
            out.push_back(std::move(cfg));
          }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string config_json(const GisConfig& cfg) {
  nlohmann::json j;
  for (Family f : {Family::PCREF, Family::SMCAUSe, Family::SMCAUSwn, Family::PCCNC,
                   Family::WRDIMGc}) {
    j["variants"][std::string(to_string(f))] = cfg.choice(f);
  }
  for (const auto& [f, w] : cfg.weights) j["weights"][std::string(to_string(f))] = w;
  return j.dump();
}

std::string config_hash(const GisConfig& cfg) { return hex64(fnv1a64(config_json(cfg))); }

void save_norms(const FamilyNorms& norms, const GisConfig& cfg, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["format"] = 1;
  j["config_hash"] = config_hash(cfg);
  for (Family f : kAllFamilies) {
    auto it = norms.find(f);
    if (it == norms.end()) continue;
    auto& e = j["families"][std::string(to_string(f))];
    e["variant"] = std::string(to_string(it->second.variant));
    e["mean"] = it->second.stats.mean;
    e["std"] = it->second.stats.stddev;
    e["n"] = it->second.stats.n;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write norms file '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

FamilyNorms load_norms(const std::filesystem::path& path, const GisConfig& cfg) {
  const std::string text = detail::read_file(path, "norms file");
  auto fail = [&](const std::string& what) -> void {
    throw Error(ErrorKind::ConfigError, path.string() + ": " + what);
  };
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) fail("not a JSON object");
  if (j.value("format", 0) != 1) fail("unsupported norms format");
  if (!j.contains("families") || !j["families"].is_object()) fail("missing 'families'");
  FamilyNorms out;
  for (Family f : kAllFamilies) {
    const std::string name(to_string(f));
    if (!j["families"].contains(name)) fail("missing family " + name);
    const auto& e = j["families"][name];
    try {
      auto v = parse_variant(e.at("variant").get<std::string>());
      if (!v) fail("unknown variant for " + name);
      if (*v != cfg.variant_for(f)) {
        fail("norms were computed for " + std::string(to_string(*v)) + " but the config selects " +
             std::string(to_string(cfg.variant_for(f))));
      }
      FamilyNorm fn{*v, {e.at("mean").get<double>(), e.at("std").get<double>(),
                         e.at("n").get<std::size_t>()}};
      if (fn.stats.stddev < 0.0) fail("negative std for " + name);
      out[f] = fn;
    } catch (const nlohmann::json::exception& ex) {
      fail("family " + name + ": " + ex.what());
    }
  }
  return out;
}

}  // namespace gist
