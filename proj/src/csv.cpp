#include "winpred/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "winpred/error.hpp"

namespace winpred::csv {

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (quoted) {
    throw Error(ErrorKind::MalformedRow, fmt::format("unterminated quote in '{}'", line));
  }
  fields.push_back(std::move(current));
  return fields;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::Io, fmt::format("cannot open '{}'", path.string()));
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::Io, fmt::format("cannot open '{}'", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::Io, fmt::format("cannot write '{}'", path.string()));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    throw Error(ErrorKind::Io, fmt::format("write failed for '{}'", path.string()));
  }
}

std::int64_t parse_int(std::string_view field, std::string_view what) {
  std::int64_t value = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::MalformedRow, fmt::format("{}: '{}' is not an integer", what, field));
  }
  return value;
}

double parse_real(std::string_view field, std::string_view what) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::MalformedRow, fmt::format("{}: '{}' is not a number", what, field));
  }
  return value;
}

bool parse_bool(std::string_view field, std::string_view what) {
  if (field == "true") return true;
  if (field == "false") return false;
  throw Error(ErrorKind::MalformedRow, fmt::format("{}: '{}' is not true/false", what, field));
}

std::string format_real(double value) {
  std::string s = fmt::format("{:.6f}", value);
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string format_exact(double value) { return fmt::format("{:.17g}", value); }

}  // namespace winpred::csv
