#include "tccross/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <system_error>

#include "tccross/errors.hpp"

namespace tc {

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string format_cell(const std::optional<double>& x) {
    if (!x || !std::isfinite(*x))
        return {};
    return format_double(*x);
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(ch);
        }
    }
    out.push_back(std::move(field));
    return out;
}

} // namespace

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    throw ConfigError("csv is missing required column '" + name + "'");
}

std::optional<double> CsvTable::value(std::size_t row, std::size_t col) const {
    const std::string& cell = rows.at(row).at(col);
    if (cell.empty())
        return std::nullopt;
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
        throw ConfigError("malformed numeric cell '" + cell + "'");
    return v;
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.front() == '#') {
            table.comments.push_back(line);
            continue;
        }
        if (!header_seen) {
            table.header = split_fields(line);
            header_seen = true;
        } else {
            table.rows.push_back(split_fields(line));
        }
    }
    if (!header_seen)
        throw ConfigError("csv has no header row");
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open csv file '" + path + "'");
    return read_csv(in);
}

} // namespace tc
