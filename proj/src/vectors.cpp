#include "gist/vectors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <ostream>

#include "gist/error.hpp"
#include "text_util.hpp"

namespace gist {

VectorStore::VectorStore(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error(ErrorKind::DimMismatch, "vector dimensionality must be positive");
}

void VectorStore::add(std::string key, std::span<const float> values) {
  if (values.size() != dim_) {
    throw Error(ErrorKind::DimMismatch, "key '" + key + "' has " + std::to_string(values.size()) +
                                            " values, expected " + std::to_string(dim_));
  }
  if (index_.contains(key)) throw Error(ErrorKind::DuplicateKey, "key '" + key + "'");
  index_.emplace(key, keys_.size());
  keys_.push_back(std::move(key));
  data_.insert(data_.end(), values.begin(), values.end());
}

std::optional<std::span<const float>> VectorStore::find_exact(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return std::span<const float>(data_.data() + it->second * dim_, dim_);
}

std::optional<std::span<const float>> VectorStore::lookup(std::string_view key) const {
  std::string k(key);
  if (auto hit = find_exact(k)) return hit;
  std::string lower = detail::to_lower_ascii(k);
  if (lower != k) return find_exact(lower);
  return std::nullopt;
}

bool VectorStore::contains(std::string_view key) const { return lookup(key).has_value(); }

namespace {

struct Header {
  std::size_t count;
  std::size_t dim;
};

Header parse_header(std::string_view line, std::string_view origin) {
  auto fields = detail::split_ws(line);
  Header h{};
  auto parse = [](std::string_view s, std::size_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
  };
  if (fields.size() != 2 || !parse(fields[0], h.count) || !parse(fields[1], h.dim) || h.dim == 0) {
    throw Error(ErrorKind::ParseError,
                std::string(origin) + ":1: expected header '<count> <dim>', got '" +
                    std::string(line) + "'");
  }
  return h;
}

void check_count(const VectorStore& store, const Header& h, std::string_view origin) {
  if (store.size() != h.count) {
    throw Error(ErrorKind::ParseError, std::string(origin) + ": header declares " +
                                           std::to_string(h.count) + " rows, found " +
                                           std::to_string(store.size()));
  }
}

}  // namespace

VectorStore parse_text_vectors(std::string_view contents, std::string_view origin) {
  auto lines = detail::split_lines(contents);
  if (lines.empty()) throw Error(ErrorKind::ParseError, std::string(origin) + ": empty vector file");
  const Header h = parse_header(lines[0], origin);
  VectorStore store(h.dim);
  std::vector<float> row(h.dim);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = detail::split_ws(lines[i]);
    if (fields.empty()) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(i + 1);
    if (fields.size() - 1 != h.dim) {
      throw Error(ErrorKind::DimMismatch, where + ": row '" + std::string(fields[0]) + "' has " +
                                              std::to_string(fields.size() - 1) +
                                              " values, header declares " + std::to_string(h.dim));
    }
    for (std::size_t d = 0; d < h.dim; ++d) {
      if (!detail::parse_float(fields[d + 1], row[d])) {
        throw Error(ErrorKind::ParseError, where + ": bad number '" + std::string(fields[d + 1]) + "'");
      }
    }
    try {
      store.add(std::string(fields[0]), row);
    } catch (const Error& e) {
      throw Error(e.kind(), where + ": " + e.detail());
    }
  }
  check_count(store, h, origin);
  return store;
}

VectorStore parse_binary_vectors(std::string_view contents, std::string_view origin) {
  static_assert(sizeof(float) == 4);
  const std::size_t nl = contents.find('\n');
  if (nl == std::string_view::npos) {
    throw Error(ErrorKind::ParseError, std::string(origin) + ": missing header line");
  }
  const Header h = parse_header(contents.substr(0, nl), origin);
  VectorStore store(h.dim);
  std::vector<float> row(h.dim);
  std::size_t pos = nl + 1;
  for (std::size_t r = 0; r < h.count; ++r) {
    while (pos < contents.size() && (contents[pos] == '\n' || contents[pos] == ' ')) ++pos;
    const std::size_t sp = contents.find(' ', pos);
    if (sp == std::string_view::npos || sp == pos) {
      throw Error(ErrorKind::ParseError,
                  std::string(origin) + ": truncated at row " + std::to_string(r));
    }
    std::string key(contents.substr(pos, sp - pos));
    pos = sp + 1;
    if (contents.size() - pos < h.dim * 4) {
      throw Error(ErrorKind::DimMismatch, std::string(origin) + ": row '" + key +
                                              "' is shorter than " + std::to_string(h.dim) +
                                              " floats");
    }
    for (std::size_t d = 0; d < h.dim; ++d) {
      std::array<unsigned char, 4> b;
      std::memcpy(b.data(), contents.data() + pos + d * 4, 4);
      if constexpr (std::endian::native == std::endian::big) std::swap(b[0], b[3]), std::swap(b[1], b[2]);
      std::memcpy(&row[d], b.data(), 4);
    }
    pos += h.dim * 4;
    try {
      store.add(std::move(key), row);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(origin) + ": row " + std::to_string(r) + ": " + e.detail());
    }
  }
  return store;
}

VectorStore load_vectors(const std::filesystem::path& path, VectorFormat format) {
  if (format == VectorFormat::Auto) {
    format = path.extension() == ".bin" ? VectorFormat::Binary : VectorFormat::Text;
  }
  const std::string contents = detail::read_file(path, "vector file");
  return format == VectorFormat::Binary ? parse_binary_vectors(contents, path.string())
                                        : parse_text_vectors(contents, path.string());
}

void write_text_vectors(const VectorStore& store, std::ostream& out) {
  out << store.size() << ' ' << store.dim() << '\n';
  std::array<char, 64> buf;
  for (const auto& key : store.keys()) {
    out << key;
    const std::span<const float> row = *store.lookup(key);
    for (float v : row) {
      auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
      out << ' ' << std::string_view(buf.data(), static_cast<std::size_t>(p - buf.data()));
    }
    out << '\n';
  }
}

void write_binary_vectors(const VectorStore& store, std::ostream& out) {
  out << store.size() << ' ' << store.dim() << '\n';
  for (const auto& key : store.keys()) {
    out << key << ' ';
    const std::span<const float> row = *store.lookup(key);
    for (float v : row) {
      std::array<unsigned char, 4> b;
      std::memcpy(b.data(), &v, 4);
      if constexpr (std::endian::native == std::endian::big) std::swap(b[0], b[3]), std::swap(b[1], b[2]);
      out.write(reinterpret_cast<const char*>(b.data()), 4);
    }
    out << '\n';
  }
}

std::optional<double> cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimMismatch, "cosine of vectors with different lengths");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return std::nullopt;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace gist
