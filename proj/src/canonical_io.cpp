#include "flatdirac/canonical_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "flatdirac/error.hpp"

namespace flatdirac {

std::string canonical_json(const Json& doc) { return doc.dump(2) + "\n"; }

template <class T>
T json_real(const Json& j) {
  if (j.is_string()) return parse_real<T>(j.get<std::string>());
  if (j.is_number_integer()) return T(j.get<long long>());
  if (j.is_number()) return T(j.get<double>());
  throw InvalidArgument("expected a real number, got " + j.dump());
}

template double json_real<double>(const Json&);
template HighReal json_real<HighReal>(const Json&);

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw InvalidArgument("CSV header must not be empty");
}

void CsvTable::add_row(std::vector<std::string> fields) {
  if (fields.size() != header_.size()) throw InvalidArgument("CSV row width does not match the header");
  rows_.push_back(std::move(fields));
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out += ',';
      out += csv_escape(fields[i]);
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write '" + tmp + "'");
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw InvalidArgument("short write to '" + tmp + "'");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    const std::error_code ec(errno, std::generic_category());
    std::remove(tmp.c_str());
    throw InvalidArgument("cannot rename onto '" + path + "': " + ec.message());
  }
}

}  // namespace flatdirac
