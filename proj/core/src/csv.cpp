#include "weylab/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace weylab {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<Cell> row) {
  if (!header_.empty() && row.size() != header_.size())
    throw std::invalid_argument("csv: row width does not match header");
  std::vector<std::string> cells;
  for (const auto& c : row) {
    if (const auto* s = std::get_if<std::string>(&c))
      cells.push_back(*s);
    else if (const auto* d = std::get_if<double>(&c))
      cells.push_back(format_number(*d));
    else
      cells.push_back(std::to_string(std::get<long long>(c)));
  }
  rows_.push_back(std::move(cells));
}

std::string CsvTable::body() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(cells[i]);
    }
    out += '\n';
  };
  if (!header_.empty()) emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

void CsvTable::write(std::ostream& out, const std::string& config_hash) const {
  out << "# config-hash=" << config_hash << '\n' << body();
}

std::string Assertion::line() const {
  return "assert," + csv_escape(name) + (pass ? ",PASS," : ",FAIL,") + csv_escape(detail);
}

bool all_pass(const std::vector<Assertion>& assertions) {
  for (const auto& a : assertions)
    if (!a.pass) return false;
  return true;
}

}  // namespace weylab
