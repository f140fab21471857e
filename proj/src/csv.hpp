#pragma once

// Minimal CSV helpers shared by the readers. Fields are comma separated with
// no quoting; `#` lines and blank lines are skipped.

#include <charconv>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "tranchelab/error.hpp"

namespace tranchelab::detail {

struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        auto field = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        out.emplace_back(trim(field));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::vector<CsvRow> read_rows(std::istream& in) {
    std::vector<CsvRow> rows;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        rows.push_back({n, split_fields(t)});
    }
    return rows;
}

inline std::string where(const CsvRow& row, std::size_t col) {
    return "line " + std::to_string(row.line) + ", column " + std::to_string(col + 1);
}

inline void expect_header(const std::vector<CsvRow>& rows, const std::vector<std::string>& header) {
    if (rows.empty()) throw Error(ErrorCode::MalformedCsv, "missing header row");
    if (rows.front().fields != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(rows.front().line) +
                                                 ": expected header `" + want + "`");
    }
}

inline void expect_width(const CsvRow& row, std::size_t width) {
    if (row.fields.size() != width)
        throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(row.line) + ": expected " +
                                                 std::to_string(width) + " fields, got " +
                                                 std::to_string(row.fields.size()));
}

inline double parse_double(const CsvRow& row, std::size_t col) {
    const std::string& s = row.fields[col];
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw Error(ErrorCode::MalformedCsv, where(row, col) + ": not a number `" + s + "`");
    return value;
}

inline long long parse_int(const CsvRow& row, std::size_t col) {
    const std::string& s = row.fields[col];
    long long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw Error(ErrorCode::MalformedCsv, where(row, col) + ": not an integer `" + s + "`");
    return value;
}

inline bool parse_bool01(const CsvRow& row, std::size_t col) {
    const std::string& s = row.fields[col];
    if (s == "0") return false;
    if (s == "1") return true;
    throw Error(ErrorCode::MalformedCsv, where(row, col) + ": expected 0 or 1, got `" + s + "`");
}

// FNV-1a, 64-bit.
class Fnv1a {
public:
    void add(std::string_view bytes) {
        for (unsigned char c : bytes) {
            h_ ^= c;
            h_ *= 0x100000001b3ULL;
        }
    }
    std::uint64_t value() const { return h_; }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace tranchelab::detail
