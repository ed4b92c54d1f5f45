#include "pslet/reference_tables.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "pslet/errors.hpp"

namespace pslet {

namespace detail {
extern const char* const kReferenceTablesText;
}

double ReferenceValue::rounding() const { return 0.5 * std::pow(10.0, -decimals); }

std::vector<ReferenceValue> parse_reference_tables(std::string_view text) {
  std::vector<ReferenceValue> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string table, row, column, value, extra;
    if (!(fields >> table)) continue;
    if (!(fields >> row >> column >> value) || (fields >> extra))
      throw DomainError("reference tables line " + std::to_string(line_no) + ": expected 4 fields");
    ReferenceValue r;
    char* end = nullptr;
    r.table = static_cast<int>(std::strtol(table.c_str(), &end, 10));
    if (*end != '\0') throw DomainError("reference tables line " + std::to_string(line_no) + ": bad table id");
    r.value = std::strtod(value.c_str(), &end);
    if (*end != '\0') throw DomainError("reference tables line " + std::to_string(line_no) + ": bad value");
    const auto dot = value.find('.');
    r.decimals = dot == std::string::npos ? 0 : static_cast<int>(value.size() - dot - 1);
    r.row = std::move(row);
    r.column = std::move(column);
    out.push_back(std::move(r));
  }
  return out;
}

const std::vector<ReferenceValue>& reference_values() {
  static const std::vector<ReferenceValue> values = parse_reference_tables(detail::kReferenceTablesText);
  return values;
}

std::optional<ReferenceValue> reference_value(int table, std::string_view row, std::string_view column) {
  for (const auto& r : reference_values())
    if (r.table == table && r.row == row && r.column == column) return r;
  return std::nullopt;
}

}  // namespace pslet
