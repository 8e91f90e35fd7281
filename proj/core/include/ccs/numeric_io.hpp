// Locale-independent numeric text: 17 significant digits via to_chars, plus a
// small CSV reader for field files.
#pragma once

#include <string>
#include <vector>

namespace ccs {

// shortest-form general format at 17 significant digits; round-trips exactly
std::string format_double(double value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns; // column-major
    int column(const std::string& name) const; // -1 if absent
};

CsvTable read_csv(const std::string& path);

} // namespace ccs
