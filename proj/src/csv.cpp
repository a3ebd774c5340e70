#include "lpns/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace lpns::csv {

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

std::string format_int(long long v) {
    char buf[24];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("format_int: conversion failed");
    return std::string(buf, ptr);
}

std::string format_u64(std::uint64_t v) {
    char buf[24];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("format_u64: conversion failed");
    return std::string(buf, ptr);
}

void Table::append(std::vector<std::string> row) {
    if (row.size() != header.size())
        throw std::invalid_argument("csv: row width disagrees with header");
    rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error("csv: no column named " + name);
    return static_cast<std::size_t>(it - header.begin());
}

bool Table::has_column(const std::string& name) const {
    return std::find(header.begin(), header.end(), name) != header.end();
}

void Table::write(const std::filesystem::path& p) const {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("csv: cannot open " + p.string());
    const auto put_line = [&os](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os.put(',');
            os << cells[i];
        }
        os.put('\n');
    };
    put_line(header);
    for (const auto& row : rows) put_line(row);
    if (!os) throw std::runtime_error("csv: write failed for " + p.string());
}

Table read(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw std::runtime_error("csv: cannot open " + p.string());

    const auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss(line);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        return cells;
    };

    Table t;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("csv: empty file " + p.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    t.header = split(line);
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        t.append(split(line));
    }
    return t;
}

double parse_double(const std::string& cell) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw std::runtime_error("csv: cell is not a number: " + cell);
    return v;
}

}  // namespace lpns::csv
