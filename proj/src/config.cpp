#include "thermaloc/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "thermaloc/error.hpp"

namespace thermaloc {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_commas(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    std::string item = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double to_double(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::config, "key '" + key + "': '" + text + "' is not a number");
}

long long to_int(const std::string& text, const std::string& key) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    fail(ErrorKind::config, "key '" + key + "': '" + text + "' is not an integer");
  return v;
}

}  // namespace

Config Config::parse(std::string_view text, std::string source) {
  Config cfg;
  cfg.source_ = std::move(source);
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::config, cfg.source_ + ":" + std::to_string(number) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty()) fail(ErrorKind::config, cfg.source_ + ":" + std::to_string(number) + ": empty key");
    if (cfg.values_.count(key))
      fail(ErrorKind::config, cfg.source_ + ":" + std::to_string(number) + ": duplicate key '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::config, "cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  Config cfg = parse(buffer.str(), path.string());
  cfg.base_dir_ = path.parent_path();
  return cfg;
}

std::string Config::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) fail(ErrorKind::config, source_ + ": missing key '" + key + "'");
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const { return to_double(get_string(key), key); }
double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long Config::get_int(const std::string& key) const { return to_int(get_string(key), key); }
long long Config::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(ErrorKind::config, "key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<std::string> Config::get_strings(const std::string& key) const { return split_commas(get_string(key)); }

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : get_strings(key)) out.push_back(to_double(item, key));
  if (out.empty()) fail(ErrorKind::config, "key '" + key + "' is an empty list");
  return out;
}

VertexSet Config::get_vertices(const std::string& key) const {
  try {
    return parse_vertex_list(get_string(key));
  } catch (const Error& e) {
    fail(ErrorKind::config, "key '" + key + "': " + e.what());
  }
}

VertexSet parse_vertex_list(std::string_view text) {
  std::vector<Vertex> out;
  for (const auto& item : split_commas(text)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(static_cast<Vertex>(to_int(item, "vertex list")));
      continue;
    }
    const auto lo = to_int(trim(std::string_view(item).substr(0, dots)), "vertex list");
    const auto hi = to_int(trim(std::string_view(item).substr(dots + 2)), "vertex list");
    if (hi < lo) fail(ErrorKind::config, "empty vertex range '" + item + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(static_cast<Vertex>(v));
  }
  return make_vertex_set(std::move(out));
}

}  // namespace thermaloc
