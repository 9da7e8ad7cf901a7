#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace rovella::lab {

using Cell = std::variant<long long, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

/// Scientific notation with 17 significant digits; nan and inf spelled as such.
std::string format_double(double v);

/// Throws std::invalid_argument when a row's width differs from the header's.
void check_table(const Table& t);

std::filesystem::path csv_path(const std::filesystem::path& dir, const std::string& experiment,
                               const std::string& name);

/// Writes <dir>/<experiment>_<name>.csv with LF line endings, header first.
void emit_csv(const std::filesystem::path& dir, const std::string& experiment, const Table& t);

/// Writes text verbatim; failures carry the path.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rovella::lab
