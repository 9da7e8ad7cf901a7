#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rovella::lab {

/// Any problem with the configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat dotted key=value pairs. Blank lines and lines starting with '#' are ignored.
class Config {
 public:
  static Config parse_text(std::string_view text, const std::string& origin = "<text>");
  static Config parse_file(const std::filesystem::path& path);

  /// "key=value"; later assignments replace earlier ones.
  void set(std::string_view assignment);
  void set(const std::string& key, const std::string& value);

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

enum class KeyKind { real, integer, flag, text, real_list };

struct KeySpec {
  std::string key;
  KeyKind kind;
  std::string fallback;
};

/// Config resolved against a schema: every key present, every value type-checked.
class Settings {
 public:
  Settings(const Config& config, const std::vector<KeySpec>& schema);

  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  int small_integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  /// True when the value is the literal "auto".
  bool is_auto(const std::string& key) const;

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  const std::string& raw(const std::string& key) const;

  std::map<std::string, std::string> values_;
};

double parse_real(const std::string& key, const std::string& value);
long parse_integer(const std::string& key, const std::string& value);

}  // namespace rovella::lab
