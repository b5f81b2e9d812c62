#include "bikelab/lab/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "bikelab/errors.hpp"

namespace bikelab::lab {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

CsvWriter::CsvWriter(std::vector<std::string> columns, std::string comment_line)
    : column_count_(columns.size()) {
    buffer_ += "# ";
    buffer_ += comment_line;
    buffer_ += '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += columns[i];
    }
    buffer_ += '\n';
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != column_count_) {
        throw Error("csv row has " + std::to_string(cells.size()) + " cells, expected " +
                    std::to_string(column_count_));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += cells[i];
    }
    buffer_ += '\n';
}

void CsvWriter::add_row_numeric(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    add_row(cells);
}

void CsvWriter::write_file(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << buffer_;
}

}  // namespace bikelab::lab
