#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace hardyspec::io {

/// 17 significant digits ("%.17g"); infinities as "inf" / "-inf", NaN as "nan".
std::string format_double(double value);

/// Writes contents to a sibling temporary file, then renames it over path.
/// Throws std::runtime_error on I/O failure.
void write_atomically(const std::filesystem::path& path, std::string_view contents);

}  // namespace hardyspec::io
