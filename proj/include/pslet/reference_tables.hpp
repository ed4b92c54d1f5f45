#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pslet {

/// One printed table cell.
struct ReferenceValue {
  int table = 0;
  std::string row;
  std::string column;
  double value = 0.0;
  /// Digits after the decimal point as printed.
  int decimals = 0;

  /// Half a unit in the last printed place.
  double rounding() const;
};

/// Parses "table row column value" records; '#' starts a comment. Throws DomainError.
std::vector<ReferenceValue> parse_reference_tables(std::string_view text);

/// The fixture compiled into the library.
const std::vector<ReferenceValue>& reference_values();

std::optional<ReferenceValue> reference_value(int table, std::string_view row, std::string_view column);

}  // namespace pslet
