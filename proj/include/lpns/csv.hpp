#pragma once

// Deterministic CSV writing and reading: shortest round-trip decimal for
// doubles, "\n" line endings, no locale dependence, no quoting (cell content
// never contains commas in this project's tables).

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lpns::csv {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);
std::string format_int(long long v);
std::string format_u64(std::uint64_t v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Size-checked against the header.
    void append(std::vector<std::string> row);

    std::size_t column(const std::string& name) const;  // throws when absent
    bool has_column(const std::string& name) const;

    void write(const std::filesystem::path& p) const;
};

Table read(const std::filesystem::path& p);  // throws std::runtime_error on shape errors

double parse_double(const std::string& cell);  // throws std::runtime_error on junk

}  // namespace lpns::csv
