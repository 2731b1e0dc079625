#pragma once

// RFC 4180 tables with a leading `# config-hash=<hex>` comment, and
// machine-readable assertion lines `assert,<name>,PASS|FAIL,<detail>`.

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace weylab {

using Cell = std::variant<std::string, double, long long>;

/// %.17g, with inf, -inf and nan spelled out.
std::string format_number(double value);
std::string csv_escape(const std::string& field);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header = {});

  void add_row(std::vector<Cell> row);
  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t i) const { return rows_.at(i); }

  /// Header and rows, CRLF-free ('\n' line ends).
  std::string body() const;
  void write(std::ostream& out, const std::string& config_hash) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;

  std::string line() const;
};

bool all_pass(const std::vector<Assertion>& assertions);

}  // namespace weylab
