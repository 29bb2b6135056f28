#pragma once

#include <filesystem>
#include <iosfwd>

#include "preciseum/xarray.hpp"

namespace preciseum {

// XARR1 layout, all integers little-endian:
//   "XARR1"                 5 bytes
//   format code             1 byte   (0 binary64, 1 binary32, 2 binary16, 3 bfloat16)
//   rank                    1 byte   (<= 8)
//   extents                 8 bytes each, unsigned
//   values                  IEEE encoding in the array's format, row-major
//   exact bits              1 byte per element

/// Throws Error when the sink fails.
void save(const XArray& a, std::ostream& sink);

/// Throws FormatError on bad magic, unknown format code, rank > 8 or
/// truncation; ValidationError when a bit count exceeds the format.
XArray load(std::istream& source);

void save_file(const XArray& a, const std::filesystem::path& path);
XArray load_file(const std::filesystem::path& path);

}  // namespace preciseum
