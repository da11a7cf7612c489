#pragma once

#include <filesystem>
#include <ostream>
#include <initializer_list>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "xgram/models.hpp"

namespace xgram {

/**
 * Reads a single numeric column. The first non-comment line is treated as a
 * header when it does not parse as a number; lines starting with '#' are
 * skipped. Errors name the 1-based line number of the offending row.
 */
Series ingest_csv(const std::filesystem::path& path);

/// Reads `columns` comma-separated numeric columns (optional header).
std::vector<std::vector<double>> read_numeric_columns(const std::filesystem::path& path, std::size_t columns);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

/**
 * Minimal CSV emitter: optional leading "# key: value" comment lines, one
 * header, then rows. Output is a pure function of the inputs.
 */
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void comment(const std::string& text);
    void header(std::span<const std::string> names);
    void header(std::initializer_list<std::string> names);

    template <typename... Cells>
    void row(const Cells&... cells) {
        bool first = true;
        ((write_cell(cells, first)), ...);
        out_ << '\n';
    }

private:
    void write_cell(double v, bool& first);
    void write_cell(const std::string& v, bool& first);
    void write_cell(const char* v, bool& first) { write_cell(std::string(v), first); }
    template <typename Int>
        requires std::is_integral_v<Int>
    void write_cell(Int v, bool& first) {
        separator(first);
        out_ << v;
    }
    void separator(bool& first);

    std::ostream& out_;
};

}  // namespace xgram
