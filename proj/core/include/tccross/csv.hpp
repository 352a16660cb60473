#ifndef TCCROSS_CSV_HPP
#define TCCROSS_CSV_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tc {

// Shortest round-trip decimal form of x (std::to_chars).  Deterministic:
// the same bit pattern always formats to the same string.
std::string format_double(double x);

// Empty string for missing values; files never contain NaN tokens.
std::string format_cell(const std::optional<double>& x);

// One parsed CSV payload: '#' comment lines, a header row, string cells.
struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column index by name; throws ConfigError naming the column if absent.
    std::size_t column(const std::string& name) const;

    // Cell as double; empty cells map to nullopt.  Throws ConfigError on
    // malformed numbers.
    std::optional<double> value(std::size_t row, std::size_t col) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

} // namespace tc

#endif
