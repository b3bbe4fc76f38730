#pragma once

#include <map>
#include <string>
#include <vector>

namespace bnf {

// INI-style run configuration: "[section]" headers, "key = value" lines, '#'
// or ';' comments. Keys may repeat only where the schema allows it. Unknown
// sections and keys are rejected with their line number.
class Config {
 public:
  struct Entry {
    std::string value;
    int line;
  };

  static Config parse(const std::string& text, const std::string& origin = "<config>");
  static Config load(const std::string& path);

  const std::string& text() const { return text_; }
  const std::string& origin() const { return origin_; }
  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;

  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_real(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  // Comma or whitespace separated list.
  std::vector<double> get_reals(const std::string& section, const std::string& key,
                                const std::vector<double>& fallback = {}) const;
  std::vector<int> get_ints(const std::string& section, const std::string& key,
                            const std::vector<int>& fallback = {}) const;
  std::vector<Entry> all(const std::string& section, const std::string& key) const;

  // "[section] key (line n)" for messages
  std::string where(const std::string& section, const std::string& key) const;

 private:
  const Entry* find(const std::string& section, const std::string& key) const;
  std::string text_, origin_;
  std::map<std::string, std::map<std::string, std::vector<Entry>>> data_;
};

}  // namespace bnf
