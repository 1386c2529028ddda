#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gist/indices.hpp"

namespace gist {

// The seven index families combined into GIS.
enum class Family { PCREF, PCDC, SMCAUSe, SMCAUSwn, PCCNC, WRDIMGc, WRDHYPnv };

inline constexpr std::array<Family, 7> kAllFamilies = {
    Family::PCREF, Family::PCDC,    Family::SMCAUSe,  Family::SMCAUSwn,
    Family::PCCNC, Family::WRDIMGc, Family::WRDHYPnv};

std::string_view to_string(Family f) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;

using Weights = std::map<Family, double>;

// +1 for the families that support gist (cohesion, causal connectives,
// verb overlap in embedding space), -1 for the rest.
Weights default_weights();

// What to do with a document lacking a selected variant.
enum class MissingPolicy { Error, Drop, Impute };

std::string_view to_string(MissingPolicy p) noexcept;
std::optional<MissingPolicy> parse_missing_policy(std::string_view name) noexcept;

struct GisConfig {
  Variant referential = Variant::PCREF_ap;  // one of PCREF_* or CoREF
  Scheme verb_embedding = Scheme::AdjacentInParagraph;
  Scheme verb_synset = Scheme::AllPairs;
  LexiconSource concreteness = LexiconSource::Megahr;
  LexiconSource imageability = LexiconSource::Megahr;
  Weights weights = default_weights();

  Variant variant_for(Family f) const;
  // "PCREF=ap SMCAUSe=1p SMCAUSwn=a PCCNC=megahr WRDIMGc=megahr"
  std::string key() const;
  // Variant choice of one family as printed in reports ("ap", "CoREF", "mrc").
  std::string choice(Family f) const;

  bool operator==(const GisConfig&) const = default;
};

// Throws ConfigError for an unusable config (non-PCREF referential variant,
// missing or non-finite weight).
void validate(const GisConfig& cfg);

struct NormStats {
  double mean = 0.0;
  double stddev = 0.0;  // population
  std::size_t n = 0;

  bool operator==(const NormStats&) const = default;
};

struct ZScores {
  std::vector<double> z;
  NormStats stats;
  bool zero_variance = false;
};

// Population z-scores; a zero-variance batch maps to all zeros with the
// flag set. Throws TooFewDocuments for fewer than two values and
// MissingResource for non-finite input.
ZScores zscore_batch(std::span<const double> values);

// z against fixed norms (0 when their stddev is 0).
double zscore(double x, const NormStats& norms) noexcept;

struct FamilyNorm {
  Variant variant;
  NormStats stats;

  bool operator==(const FamilyNorm&) const = default;
};
using FamilyNorms = std::map<Family, FamilyNorm>;

struct GisResult {
  std::string doc_id;
  std::optional<std::string> group_label;
  std::map<Family, double> z;
  double gis = 0.0;
};

struct GisBatch {
  std::vector<GisResult> results;      // input order, dropped documents removed
  FamilyNorms norms;                   // what the z-values were computed against
  std::vector<std::string> dropped;    // under MissingPolicy::Drop
  std::vector<std::string> imputed;    // "doc_id:variant" under MissingPolicy::Impute
  std::set<Family> zero_variance;
};

// GIS = sum over families of weight * z, summed in kAllFamilies order.
// Z-scores use the batch unless `reference` norms are given. Throws
// MissingVariant (policy Error) naming the document and family.
GisBatch compute_gis(std::span<const IndexVector> vectors, const GisConfig& config,
                     MissingPolicy policy = MissingPolicy::Error,
                     const FamilyNorms* reference = nullptr);

// Variant options per family; the default is the full 5x4x4x2x2 space.
struct CombinationSpace {
  std::vector<Variant> referential{Variant::PCREF_1, Variant::PCREF_a, Variant::PCREF_1p,
                                   Variant::PCREF_ap, Variant::CoREF};
  std::vector<Scheme> verb_embedding{kAllSchemes.begin(), kAllSchemes.end()};
  std::vector<Scheme> verb_synset{kAllSchemes.begin(), kAllSchemes.end()};
  std::vector<LexiconSource> concreteness{LexiconSource::Mrc, LexiconSource::Megahr};
  std::vector<LexiconSource> imageability{LexiconSource::Mrc, LexiconSource::Megahr};
};

// Cartesian product in nesting order PCREF, SMCAUSe, SMCAUSwn, PCCNC,
// WRDIMGc (last varies fastest). All configs share `weights`.
std::vector<GisConfig> enumerate_combinations(const CombinationSpace& space = {},
                                              const Weights& weights = default_weights());

// 64-bit FNV-1a; used for config hashes and file checksums.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t v);

// Structured text form of a config (JSON); used for hashing and manifests.
std::string config_json(const GisConfig& cfg);
std::string config_hash(const GisConfig& cfg);

// Norms file: {"format": 1, "config_hash": ..., "families": {...}}.
void save_norms(const FamilyNorms& norms, const GisConfig& cfg, const std::filesystem::path& path);
// Throws ConfigError when the stored variants differ from `cfg`'s choices.
FamilyNorms load_norms(const std::filesystem::path& path, const GisConfig& cfg);

}  // namespace gist
