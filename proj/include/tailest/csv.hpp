#pragma once

// Plain-text sample ingestion: one positive numeric value per line. A
// non-numeric first line is treated as a header and skipped; blank lines are
// ignored; anything else non-numeric is a parse_error carrying its 1-based
// line number. An optional diagnostics stream receives a one-line summary
// (count, min, max) so CLI users can sanity-check what was read.

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "sample.hpp"
#include "types.hpp"

namespace tailest {

namespace detail {

// Full-line strtod: leading/trailing whitespace tolerated, anything else
// after the number makes the line non-numeric.
inline bool parse_double(const std::string& line, double& out) {
    const char* begin = line.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end != '\0') {
        if (!std::isspace(static_cast<unsigned char>(*end))) return false;
        ++end;
    }
    return true;
}

inline bool is_blank(const std::string& line) {
    for (char ch : line)
        if (!std::isspace(static_cast<unsigned char>(ch))) return false;
    return true;
}

}  // namespace detail

// Reads a sample from a stream; `name` labels error messages. Values are
// validated and sorted by Sample::from_values.
inline Sample read_sample_stream(std::istream& in, const std::string& name,
                                 std::ostream* diagnostics = nullptr) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::is_blank(line)) continue;
        double v;
        if (!detail::parse_double(line, v)) {
            if (first_content_line) {
                // Header row; tolerated once, at the top.
                first_content_line = false;
                continue;
            }
            throw parse_error(name + ":" + std::to_string(line_no) +
                                  ": not a number: '" + line + "'",
                              line_no);
        }
        first_content_line = false;
        values.push_back(v);
    }
    if (values.size() < 2)
        throw sample_error(name + ": needs at least 2 values, found " +
                           std::to_string(values.size()));
    Sample s = Sample::from_values(std::move(values));
    if (diagnostics)
        *diagnostics << name << ": read " << s.size() << " values, min="
                     << format_full(s.min()) << " max=" << format_full(s.max())
                     << "\n";
    return s;
}

// Reads a sample from a file path; "-" means standard input is handled by
// the caller (this function only opens real files).
inline Sample read_sample(const std::string& path,
                          std::ostream* diagnostics = nullptr) {
    std::ifstream in(path);
    if (!in)
        throw error("cannot open input file: " + path);
    return read_sample_stream(in, path, diagnostics);
}

}  // namespace tailest
