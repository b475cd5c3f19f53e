#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>

#include "crh/errors.hpp"

namespace crh {

// Shortest round-trip decimal form; identical input bits give identical text.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Write-to-temp then atomic rename, so no partial output file survives a
// failure. `fill` receives the open binary stream.
template <typename Fill>
void atomic_write_stream(const std::filesystem::path& path, Fill&& fill) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw io_error(tmp.string() + ": cannot open for writing");
    try {
      fill(os);
    } catch (...) {
      os.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw;
    }
    os.flush();
    if (!os) {
      os.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw io_error(tmp.string() + ": write failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ec2;
    fs::remove(tmp, ec2);
    throw io_error(path.string() + ": rename failed: " + ec.message());
  }
}

}  // namespace crh
