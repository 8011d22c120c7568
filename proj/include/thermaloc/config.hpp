#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thermaloc/lattice.hpp"

namespace thermaloc {

/// Flat `key = value` experiment configuration. Keys may be dotted
/// (graph.kind); `#` starts a comment; blank lines are ignored. Every lookup
/// failure throws Error with ErrorKind::config.
class Config {
 public:
  static Config parse(std::string_view text, std::string source = "<string>");
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  /// Directory of the loaded file; relative paths in values resolve against it.
  const std::filesystem::path& base_dir() const noexcept { return base_dir_; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated list.
  std::vector<std::string> get_strings(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  /// Comma-separated vertices and inclusive ranges such as "1..6".
  VertexSet get_vertices(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
  std::string source_;
  std::filesystem::path base_dir_;
};

/// Parses "0,2..4,7" into a sorted vertex set. Throws config on bad syntax.
VertexSet parse_vertex_list(std::string_view text);

}  // namespace thermaloc
