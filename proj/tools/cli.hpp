#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gist/evaluation.hpp"
#include "gist/indices.hpp"
#include "gist/scoring.hpp"

namespace gist::cli {

// Process exit codes.
enum Exit : int {
  kOk = 0,
  kConfigFailure = 2,    // bad flags, config file or norms file
  kResourceFailure = 3,  // a resource path is unreadable or malformed
  kCorpusFailure = 4,    // corpus unreadable, invalid, or missing selected variants
  kGroupFailure = 5,     // a group label is absent or has fewer than two documents
};

struct ResourcePaths {
  std::optional<std::filesystem::path> vectors;
  std::optional<std::filesystem::path> wordnet;  // directory with data.* / index.*
  std::optional<std::filesystem::path> mrc;
  std::optional<std::filesystem::path> megahr;
  std::optional<std::filesystem::path> patterns;
  std::optional<std::filesystem::path> abbreviations;
};

// Everything a config file can set. Command-line flags override it.
struct RunConfig {
  GisConfig gis;
  MissingPolicy missing = MissingPolicy::Error;
  VarianceMode variance = VarianceMode::Pooled;
  IndexConfig index;
  double threshold = 0.05;
  GroupLabels labels;
  ResourcePaths resources;
};

// Strict JSON reader (unknown keys are errors). Relative resource paths
// resolve against `base_dir`. Throws ConfigError.
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir);

// Minimal RFC 4180 support for the report files.
std::string csv_escape(std::string_view field);
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

std::vector<std::string> score_csv_header();
// One row per index vector; z/GIS cells are empty for documents missing
// from `batch` (dropped, or no batch at all).
void write_score_csv(std::ostream& out, std::span<const IndexVector> vectors,
                     const GisBatch* batch);

std::vector<std::string> search_csv_header();
// Ranked rows first, then failed configs.
void write_search_csv(std::ostream& out, const SearchReport& report);

std::vector<std::string> robustness_csv_header();
void write_robustness_csv(std::ostream& out, std::span<const RobustnessResult> results);

// Entry point behind the `gist` executable.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gist::cli
