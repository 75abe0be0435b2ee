#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pulseforge::cli {

// Flat key = value configuration with dotted keys. Every key has a default;
// unknown keys are rejected with Error(ConfigError).
class RunConfig {
 public:
  RunConfig();

  // '#' starts a comment; blank lines are ignored. Later assignments win.
  void merge_file(const std::filesystem::path& path);
  void merge_text(const std::string& text, const std::string& origin = "<text>");

  // "key=value" as given to --set.
  void set_assignment(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  const std::string& get(const std::string& key) const;
  double number(const std::string& key) const;
  double positive(const std::string& key) const;
  long long integer(const std::string& key) const;
  std::vector<double> number_list(const std::string& key) const;

  bool is_default(const std::string& key) const;
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

  // key = value lines in key order; feeding the text back through
  // merge_text reproduces this config.
  std::string to_text() const;

  static const std::vector<std::string>& modes();

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> defaults_;
};

}  // namespace pulseforge::cli
