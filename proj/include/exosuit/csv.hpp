#pragma once

#include <string>
#include <vector>

// Strict CSV helpers for the toolkit's table formats: mandatory header row,
// comma separation, LF line endings, no quoting (none of our formats needs
// it). Readers report the offending row on failure.

namespace exosuit::csv {

/// Deterministic shortest-ish rendering (%.12g) used by every writer.
std::string format_double(double v);

std::vector<std::string> split_line(const std::string& line);

/// Read a numeric table, enforcing the exact expected header.
std::vector<std::vector<double>> read_numeric(const std::string& path,
                                              const std::vector<std::string>& header);

/// Write header + rows with LF endings.
void write_table(const std::string& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);

std::string join(const std::vector<std::string>& fields);

}  // namespace exosuit::csv
