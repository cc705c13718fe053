#include "io_util.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include <fmt/format.h>

#include "prnls/error.hpp"

namespace prnls::detail {

void write_atomic(const std::filesystem::path& path, std::string_view bytes) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec)
      fail(ErrorKind::io, "cannot create directory " +
                              path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::io, "write failed: " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec)
    fail(ErrorKind::io, "cannot rename " + tmp.string() + " to " +
                            path.string() + ": " + ec.message());
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.17g}", v);
}

}  // namespace prnls::detail
