#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

// Minimal CSV helpers shared by the data, featurize and report writers.
namespace winpred::csv {

// Splits one CSV record. Double-quoted fields may contain commas; `""` inside
// a quoted field is a literal quote. Throws Error(MalformedRow) on an
// unterminated quote.
std::vector<std::string> split_line(std::string_view line);

// Reads a whole file as LF-separated lines; a trailing CR is stripped and a
// final empty line is dropped. Throws Error(Io) if the file cannot be opened.
std::vector<std::string> read_lines(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

std::int64_t parse_int(std::string_view field, std::string_view what);
double parse_real(std::string_view field, std::string_view what);
bool parse_bool(std::string_view field, std::string_view what);

// Fixed 6-decimal formatting with trailing zeros (and a bare '.') removed.
std::string format_real(double value);

// 17 significant digits; parses back to the identical double.
std::string format_exact(double value);

}  // namespace winpred::csv
