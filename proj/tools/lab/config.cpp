#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace rovella::lab {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::pair<std::string, std::string> split_assignment(std::string_view line, const std::string& where) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) throw ConfigError(where + ": expected key=value");
  const std::string key(trim(line.substr(0, eq)));
  const std::string value(trim(line.substr(eq + 1)));
  if (key.empty()) throw ConfigError(where + ": empty key");
  return {key, value};
}

}  // namespace

Config Config::parse_text(std::string_view text, const std::string& origin) {
  Config c;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    auto [key, value] = split_assignment(line, where);
    if (c.entries_.contains(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    c.entries_.emplace(std::move(key), std::move(value));
  }
  return c;
}

Config Config::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path.string());
}

void Config::set(std::string_view assignment) {
  auto [key, value] = split_assignment(assignment, "--set " + std::string(assignment));
  entries_[key] = value;
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = value; }

double parse_real(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw ConfigError(key + ": expected a finite real, got '" + value + "'");
  return v;
}

long parse_integer(const std::string& key, const std::string& value) {
  long v = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec == std::errc{} && ptr == end) return v;
  // Accept integral values written in scientific notation, such as 1e5.
  const double d = parse_real(key, value);
  if (d != std::floor(d) || std::fabs(d) > static_cast<double>(std::numeric_limits<long>::max() / 2))
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return static_cast<long>(d);
}

namespace {

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::string_view rest = value;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_real(key, std::string(trim(rest.substr(0, comma)))));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

void check_kind(const KeySpec& spec, const std::string& value) {
  if (value == "auto" && spec.fallback == "auto") return;
  switch (spec.kind) {
    case KeyKind::real: parse_real(spec.key, value); break;
    case KeyKind::integer: parse_integer(spec.key, value); break;
    case KeyKind::flag:
      if (value != "true" && value != "false") throw ConfigError(spec.key + ": expected true or false, got '" + value + "'");
      break;
    case KeyKind::text:
      if (value.empty()) throw ConfigError(spec.key + ": empty value");
      break;
    case KeyKind::real_list: parse_list(spec.key, value); break;
  }
}

}  // namespace

Settings::Settings(const Config& config, const std::vector<KeySpec>& schema) {
  std::map<std::string, const KeySpec*> known;
  for (const auto& spec : schema) known.emplace(spec.key, &spec);
  for (const auto& [key, value] : config.entries()) {
    if (!known.contains(key)) throw ConfigError("unknown key '" + key + "'");
  }
  for (const auto& spec : schema) {
    const auto it = config.entries().find(spec.key);
    const std::string& value = it == config.entries().end() ? spec.fallback : it->second;
    check_kind(spec, value);
    values_[spec.key] = value;
  }
}

const std::string& Settings::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw std::logic_error("settings: key not in schema: " + key);
  return it->second;
}

double Settings::real(const std::string& key) const { return parse_real(key, raw(key)); }
long Settings::integer(const std::string& key) const { return parse_integer(key, raw(key)); }

int Settings::small_integer(const std::string& key) const {
  const long v = integer(key);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(key + ": out of range");
  return static_cast<int>(v);
}

bool Settings::flag(const std::string& key) const { return raw(key) == "true"; }
const std::string& Settings::text(const std::string& key) const { return raw(key); }
std::vector<double> Settings::reals(const std::string& key) const { return parse_list(key, raw(key)); }
bool Settings::is_auto(const std::string& key) const { return raw(key) == "auto"; }

}  // namespace rovella::lab
