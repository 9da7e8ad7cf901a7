#include "output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace rovella::lab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return {buf, ptr};
}

void check_table(const Table& t) {
  if (t.header.empty()) throw std::invalid_argument("table " + t.name + ": empty header");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.rows[r].size() != t.header.size())
      throw std::invalid_argument("table " + t.name + ": row " + std::to_string(r) + " has " +
                                  std::to_string(t.rows[r].size()) + " cells, header has " +
                                  std::to_string(t.header.size()));
  }
}

std::filesystem::path csv_path(const std::filesystem::path& dir, const std::string& experiment,
                               const std::string& name) {
  return dir / (experiment + "_" + name + ".csv");
}

namespace {

std::string render(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

}  // namespace

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void emit_csv(const std::filesystem::path& dir, const std::string& experiment, const Table& t) {
  check_table(t);
  std::string text;
  for (std::size_t i = 0; i < t.header.size(); ++i) text += (i ? "," : "") + t.header[i];
  text += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) text += ',';
      text += render(row[i]);
    }
    text += '\n';
  }
  write_file(csv_path(dir, experiment, t.name), text);
}

}  // namespace rovella::lab
