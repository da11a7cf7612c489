#include "xgram/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "xgram/error.hpp"

namespace xgram {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::optional<double> parse_number(const std::string& cell) {
    const std::string t = trim(cell);
    if (t.empty()) {
        return std::nullopt;
    }
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (*first == '+') {
        ++first;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        return std::nullopt;
    }
    return value;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

}  // namespace

std::vector<std::vector<double>> read_numeric_columns(const std::filesystem::path& path, std::size_t columns) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    std::vector<std::vector<double>> out(columns);
    std::string line;
    std::size_t line_no = 0;
    bool seen_first = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        const auto cells = split(t);
        if (cells.size() != columns) {
            throw DataError("row " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                            " column(s), found " + std::to_string(cells.size()));
        }
        std::vector<double> parsed;
        bool numeric = true;
        for (const auto& cell : cells) {
            const auto v = parse_number(cell);
            if (!v) {
                numeric = false;
                break;
            }
            parsed.push_back(*v);
        }
        const bool header_row = !seen_first && !numeric;
        seen_first = true;
        if (header_row) {
            continue;
        }
        if (!numeric) {
            throw DataError("row " + std::to_string(line_no) + ": non-numeric cell '" + t + "'");
        }
        for (std::size_t c = 0; c < columns; ++c) {
            if (!std::isfinite(parsed[c])) {
                throw DataError("row " + std::to_string(line_no) + ": non-finite value");
            }
            out[c].push_back(parsed[c]);
        }
    }
    return out;
}

Series ingest_csv(const std::filesystem::path& path) {
    auto columns = read_numeric_columns(path, 1);
    if (columns[0].size() < 2) {
        throw DataError("'" + path.string() + "': at least 2 numeric rows required");
    }
    return Series(std::move(columns[0]), IngestedOrigin{path.string()});
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf.data(), ptr);
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << '\n'; }

void CsvWriter::header(std::span<const std::string> names) {
    bool first = true;
    for (const auto& name : names) {
        write_cell(name, first);
    }
    out_ << '\n';
}

void CsvWriter::header(std::initializer_list<std::string> names) {
    header(std::span<const std::string>(names.begin(), names.size()));
}

void CsvWriter::separator(bool& first) {
    if (!first) {
        out_ << ',';
    }
    first = false;
}

void CsvWriter::write_cell(double v, bool& first) {
    separator(first);
    out_ << format_double(v);
}

void CsvWriter::write_cell(const std::string& v, bool& first) {
    separator(first);
    out_ << v;
}

}  // namespace xgram
