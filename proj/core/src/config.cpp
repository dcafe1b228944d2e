#include "roadocc/config.hpp"

#include <fstream>
#include <sstream>

#include "roadocc/error.hpp"

namespace roadocc {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_key_value(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  long line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    std::string_view key = trim(line.substr(0, eq));
    if (key.starts_with("--")) key.remove_prefix(2);
    if (key.empty()) throw ParseError("empty key", line_no);
    out.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> load_key_value(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_key_value(buffer.str());
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

}  // namespace roadocc
