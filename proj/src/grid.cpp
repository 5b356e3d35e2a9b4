#include "winpred/grid.hpp"

#include <sstream>

#include <fmt/format.h>

#include "winpred/error.hpp"

namespace winpred {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::vector<RunConfig> parse_grid(std::string_view text,
                                  const std::map<std::string, std::string>& defaults) {
  std::vector<std::map<std::string, std::string>> blocks;
  std::vector<int> block_lines;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line == "[run]") {
      blocks.emplace_back();
      block_lines.push_back(line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidConfig, fmt::format("grid line {}: expected key = value", line_no));
    }
    if (blocks.empty()) {
      throw Error(ErrorKind::InvalidConfig, fmt::format("grid line {}: setting outside a [run] block", line_no));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw Error(ErrorKind::InvalidConfig, fmt::format("grid line {}: empty key or value", line_no));
    }
    if (!blocks.back().emplace(key, value).second) {
      throw Error(ErrorKind::InvalidConfig, fmt::format("grid line {}: duplicate key '{}'", line_no, key));
    }
  }
  if (blocks.empty()) throw Error(ErrorKind::InvalidConfig, "grid has no [run] blocks");

  std::vector<RunConfig> runs;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto settings = defaults;
    for (const auto& [k, v] : blocks[i]) settings[k] = v;
    if (!settings.count("id")) settings["id"] = fmt::format("run{}", i + 1);
    try {
      runs.push_back(make_run_config(settings));
    } catch (const Error& e) {
      throw Error(ErrorKind::InvalidConfig,
                  fmt::format("grid block at line {}: {}", block_lines[i], e.what()));
    }
  }
  return runs;
}

}  // namespace winpred
