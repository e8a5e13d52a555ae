#pragma once

#include <string>
#include <vector>

namespace apblow {

// Write via a temp file in the same directory, then rename.
void atomic_write_file(const std::string& path, const std::string& contents);

std::string read_file(const std::string& path);

// Minimal CSV assembly; numeric cells are printed with enough digits to
// round-trip doubles.
std::string csv_line(const std::vector<std::string>& cells);
std::string format_double(double v);

}  // namespace apblow
