#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tcff/common.hpp"

namespace tcff {

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Shortest decimal that round-trips a double (17 significant digits).
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Flat key-value configuration: `key = value` lines, '#' comments, plus
/// command-line overrides that win over the file.
class Config {
 public:
  Config() = default;

  static Config from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
      }
      cfg.set(trim(trimmed.substr(0, eq)), trim(trimmed.substr(eq + 1)));
    }
    return cfg;
  }

  void set(const std::string& key, const std::string& value) {
    if (key.empty()) throw ConfigError("empty config key");
    values_[key] = value;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(key, it->second);
  }

  int get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t pos = 0;
      const int v = std::stoi(it->second, &pos);
      if (pos != it->second.size()) throw ConfigError("");
      return v;
    } catch (...) {
      throw ConfigError("config key '" + key + "': expected integer, got '" + it->second + "'");
    }
  }

  bool get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("config key '" + key + "': expected true/false");
  }

  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const std::string t = trim(tok);
      if (!t.empty()) out.push_back(parse_double(key, t));
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
  }

  /// Unknown keys are errors; typos must not be silently absorbed.
  void require_known(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : values_) {
      if (!allowed.count(k)) {
        std::string msg = "unknown config key '" + k + "'; allowed:";
        for (const auto& a : allowed) msg += " " + a;
        throw ConfigError(msg);
      }
    }
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  static double parse_double(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw ConfigError("");
      return x;
    } catch (...) {
      throw ConfigError("config key '" + key + "': expected number, got '" + v + "'");
    }
  }

  std::map<std::string, std::string> values_;
};

/// Resolved-run manifest: tool version, experiment, every config key, seeds.
/// The same block is echoed as '#' comments at the top of every CSV, keyed by
/// an FNV-1a hash of the resolved configuration so files can be traced back
/// to the run. Result summaries land in a separate, unhashed section.
struct Manifest {
  std::string experiment;
  std::map<std::string, std::string> entries;  // resolved config; hashed
  std::map<std::string, std::string> results;  // run summaries; not hashed

  std::string canonical() const {
    std::string s = "tool = tcff " + std::string(kVersion) + "\n";
    s += "experiment = " + experiment + "\n";
    for (const auto& [k, v] : entries) s += k + " = " + v + "\n";
    return s;
  }

  std::string hash_hex() const {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical())));
    return buf;
  }

  std::vector<std::string> comment_lines() const {
    std::vector<std::string> lines;
    std::stringstream ss(canonical());
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    lines.push_back("manifest_hash = " + hash_hex());
    return lines;
  }

  void write(const std::filesystem::path& dir) const {
    std::ofstream out(dir / "manifest.txt", std::ios::binary);
    if (!out) throw ConfigError("cannot write manifest in " + dir.string());
    for (const auto& line : comment_lines()) out << line << "\n";
    for (const auto& [k, v] : results) out << k << " = " << v << "\n";
  }
};

/// CSV writer: '#'-prefixed manifest block, one header row, then numeric rows
/// printed with 17 significant digits so re-reading reproduces the doubles
/// exactly. Output is byte-stable across reruns (no timestamps, "C" locale).
class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const Manifest& manifest,
          const std::vector<std::string>& columns)
      : out_(path, std::ios::binary) {
    if (!out_) throw ConfigError("cannot open output file: " + path.string());
    for (const auto& line : manifest.comment_lines()) out_ << "# " << line << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
    }
    out_ << "\n";
  }

  void row(const std::vector<double>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out_ << format_double(cells[i]) << (i + 1 < cells.size() ? "," : "");
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

struct CsvData {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline CsvData read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open csv: " + path.string());
  CsvData data;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      data.comments.push_back(line);
      continue;
    }
    std::stringstream ss(line);
    std::string tok;
    if (!have_header) {
      while (std::getline(ss, tok, ',')) data.columns.push_back(tok);
      have_header = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, tok, ',')) row.push_back(std::strtod(tok.c_str(), nullptr));
    data.rows.push_back(std::move(row));
  }
  return data;
}

}  // namespace tcff
