#pragma once

// Canonical artifacts: JSON with sorted keys and reals as decimal strings,
// RFC-4180 CSV with LF line endings, and atomic file replacement.

#include <string>
#include <vector>

#include "json.hpp"

#include "flatdirac/precision.hpp"

namespace flatdirac {

using Json = nlohmann::json;

// Two-space indented, keys sorted, trailing newline.
std::string canonical_json(const Json& doc);

inline Json real_json(double x) { return to_decimal_string(x); }
inline Json real_json(const HighReal& x) { return to_decimal_string(x); }

template <class Range>
Json real_array(const Range& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(real_json(x));
  return a;
}

// Accepts a decimal string or a JSON number.
template <class T>
T json_real(const Json& j);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> fields);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_escape(const std::string& field);

std::string read_file(const std::string& path);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace flatdirac
