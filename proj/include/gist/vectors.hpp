#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gist {

// Dense vectors keyed by word form or by an embedding ref. Rows live in one
// contiguous buffer; lookups hand out views into it.
class VectorStore {
 public:
  explicit VectorStore(std::size_t dim);

  // Throws DimMismatch or DuplicateKey.
  void add(std::string key, std::span<const float> values);

  // Exact key first, then the lower-cased key.
  std::optional<std::span<const float>> lookup(std::string_view key) const;
  bool contains(std::string_view key) const;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return keys_.size(); }
  // Keys in insertion (file) order.
  const std::vector<std::string>& keys() const noexcept { return keys_; }

 private:
  std::optional<std::span<const float>> find_exact(const std::string& key) const;

  std::size_t dim_;
  std::vector<float> data_;
  std::vector<std::string> keys_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class VectorFormat { Auto, Text, Binary };

// Text: a "<count> <dim>" header, then "<key> <f1> ... <fdim>" per line.
// Binary (word2vec style): the same header line, then per row the key, one
// space, and dim little-endian float32 values, optionally followed by '\n'.
// Auto picks Binary for a ".bin" extension.
VectorStore load_vectors(const std::filesystem::path& path, VectorFormat format = VectorFormat::Auto);
VectorStore parse_text_vectors(std::string_view contents, std::string_view origin);
VectorStore parse_binary_vectors(std::string_view contents, std::string_view origin);

// Shortest round-trip float formatting, so reloading is bit-exact.
void write_text_vectors(const VectorStore& store, std::ostream& out);
void write_binary_vectors(const VectorStore& store, std::ostream& out);

// Undefined (nullopt) when either vector has zero norm.
std::optional<double> cosine(std::span<const double> a, std::span<const double> b);

}  // namespace gist
