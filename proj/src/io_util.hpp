#pragma once

#include <filesystem>
#include <string_view>

namespace prnls::detail {

/// Writes `bytes` to `path` via a temporary sibling and a rename.
void write_atomic(const std::filesystem::path& path, std::string_view bytes);

/// "%.17g" with inf spelled "inf".
std::string format_double(double v);

}  // namespace prnls::detail
