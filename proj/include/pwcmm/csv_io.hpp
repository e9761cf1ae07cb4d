#pragma once

#include <span>
#include <string>
#include <vector>

namespace pwcmm {

// Reads a signal from CSV: one value per line, or index,value rows with an
// optional header. Rejects NaN/Inf and files with fewer than 2 values;
// parse errors name the offending line.
std::vector<double> read_signal_csv(const std::string& path);

// Column `col` (0-based) of a CSV table, skipping '#' comments and a header
// row when the first data cell is not numeric. Empty cells are skipped.
std::vector<double> read_csv_column(const std::string& path, int col);

// Shortest round-trippable decimal form (17 significant digits).
std::string format_full(double v);

} // namespace pwcmm
