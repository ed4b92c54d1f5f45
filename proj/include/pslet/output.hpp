#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pslet/runner.hpp"

namespace pslet {

enum class Format { Csv, Json };

std::optional<Format> parse_format(std::string_view s);

/// %.9g, with "nan" for missing values.
std::string csv_number(double v);

void write_energy(std::ostream& os, const std::vector<EnergyRecord>& records, Format format, Convention convention);
void write_verify(std::ostream& os, const std::vector<VerifyRecord>& records, Format format, Convention convention);
void write_wavefunction(std::ostream& os, const WavefunctionReport& report, Format format, Convention convention);
void write_table_cells(std::ostream& os, const TableReport& report, Format format);

/// Human-readable reproduction with per-cell diffs and a pass/fail summary.
std::string format_table_text(const TableReport& report);

}  // namespace pslet
