#pragma once

#include <string_view>

// Contents of the files under data/, embedded at configure time.
namespace gist::detail {

std::string_view builtin_abbreviations() noexcept;
std::string_view builtin_connectives() noexcept;

}  // namespace gist::detail
