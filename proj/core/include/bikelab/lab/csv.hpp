#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

// CSV output with shortest round-trip number formatting, so golden files are
// stable across reruns and platforms. Every file carries a header row and a
// comment line with the config hash and rng seed.

namespace bikelab::lab {

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view data);

class CsvWriter {
public:
    CsvWriter(std::vector<std::string> columns, std::string comment_line);

    void add_row(const std::vector<std::string>& cells);
    void add_row_numeric(const std::vector<double>& values);

    const std::string& str() const { return buffer_; }
    void write_file(const std::filesystem::path& path) const;

private:
    std::size_t column_count_;
    std::string buffer_;
};

}  // namespace bikelab::lab
