#include "ccs/numeric_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "ccs/errors.hpp"

namespace ccs {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

int CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open csv file: " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty csv file: " + path);
    {
        std::stringstream ss(line);
        std::string cellstr;
        while (std::getline(ss, cellstr, ',')) table.header.push_back(cellstr);
    }
    table.columns.resize(table.header.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        // split manually: getline-with-delimiter drops a trailing empty cell,
        // and an empty cell (an inapplicable column) reads as NaN
        size_t col = 0;
        size_t begin = 0;
        while (begin <= line.size()) {
            const size_t comma = line.find(',', begin);
            const size_t end = (comma == std::string::npos) ? line.size() : comma;
            if (col >= table.columns.size())
                throw ConfigError("csv row has too many cells: " + path);
            if (end == begin) {
                table.columns[col].push_back(std::numeric_limits<double>::quiet_NaN());
            } else {
                double v = 0.0;
                const auto res = std::from_chars(line.data() + begin, line.data() + end, v);
                if (res.ec != std::errc{} || res.ptr != line.data() + end)
                    throw ConfigError("csv cell is not a number: '" +
                                      line.substr(begin, end - begin) + "' in " + path);
                table.columns[col].push_back(v);
            }
            ++col;
            if (comma == std::string::npos) break;
            begin = comma + 1;
        }
        if (col != table.columns.size())
            throw ConfigError("csv row has too few cells: " + path);
    }
    return table;
}

} // namespace ccs
