#pragma once

// Eigenvalue data files. One record per line,
//
//   e=<decimal> convention=<A|Aprime> digits=<int> M=<int> N=<int> dist=<cheb|uniform> lambda=<decimal>
//
// decimals written without exponent, lines sorted by e, '#' lines ignored.
// e is written in its shortest exact form, lambda with exactly `digits`
// significant digits, so reading and writing a file reproduces its bytes.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "geometry.hpp"

namespace ellipse_lab {

namespace detail {

/// Counts significant digits of a plain decimal literal; rejects exponents.
inline unsigned decimal_significant_digits(std::string_view text) {
    if (text.empty()) throw ParseError("empty decimal");
    std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    bool seen_point = false, seen_digit = false, leading = true;
    unsigned sig = 0;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (seen_point) throw ParseError("malformed decimal '" + std::string(text) + "'");
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            seen_digit = true;
            if (leading && c == '0') continue;
            leading = false;
            ++sig;
        } else {
            throw ParseError("malformed decimal '" + std::string(text) + "' (no exponent form allowed)");
        }
    }
    if (!seen_digit) throw ParseError("malformed decimal '" + std::string(text) + "'");
    return std::max(sig, 1u);
}

inline unsigned parse_unsigned(std::string_view text, std::string_view key) {
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError("bad integer for " + std::string(key) + ": '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace detail

/// Extra decimal digits carried beyond what the text holds when parsing.
inline constexpr unsigned kRecordParseGuard = 30;

inline std::string format_record(const EigenvalueRecord& rec) {
    const unsigned e_digits = std::max(1u, static_cast<unsigned>(rec.shape.eccentricity().precision()) - 1);
    std::string out;
    out += "e=" + format_fixed(rec.shape.eccentricity(), e_digits, true);
    out += " convention=" + std::string(convention_tag(rec.shape.convention()));
    out += " digits=" + std::to_string(rec.digits_claimed);
    out += " M=" + std::to_string(rec.solver.basis_size);
    out += " N=" + std::to_string(rec.solver.collocation_count);
    out += " dist=" + std::string(distribution_tag(rec.solver.distribution));
    out += " lambda=" + format_fixed(rec.lambda, std::max(1u, rec.digits_claimed));
    return out;
}

inline EigenvalueRecord parse_record(std::string_view line) {
    static constexpr std::string_view keys[] = {"e", "convention", "digits", "M", "N", "dist", "lambda"};
    std::string_view values[7];
    std::size_t pos = 0;
    for (std::size_t k = 0; k < 7; ++k) {
        while (pos < line.size() && line[pos] == ' ') ++pos;
        std::size_t end = line.find(' ', pos);
        if (end == std::string_view::npos) end = line.size();
        std::string_view field = line.substr(pos, end - pos);
        std::size_t eq = field.find('=');
        if (eq == std::string_view::npos || field.substr(0, eq) != keys[k]) {
            throw ParseError("record field " + std::to_string(k + 1) + " should be '" + std::string(keys[k]) +
                             "=...': '" + std::string(line) + "'");
        }
        values[k] = field.substr(eq + 1);
        pos = end;
    }
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\r')) ++pos;
    if (pos != line.size()) throw ParseError("trailing text in record: '" + std::string(line) + "'");

    const unsigned digits = detail::parse_unsigned(values[2], "digits");
    detail::decimal_significant_digits(values[0]);  // validates the literal
    const unsigned l_sig = detail::decimal_significant_digits(values[6]);
    // Enough precision that e is re-rendered exactly.
    const unsigned e_prec = static_cast<unsigned>(values[0].size()) + kRecordParseGuard;
    Real e = parse_real(values[0], e_prec);
    Real lambda = parse_real(values[6], std::max(digits, l_sig) + kRecordParseGuard);
    if (lambda <= 0) throw ParseError("record lambda must be positive: '" + std::string(line) + "'");
    SolverMeta meta{detail::parse_unsigned(values[3], "M"), detail::parse_unsigned(values[4], "N"),
                    parse_distribution(values[5])};
    return EigenvalueRecord{EllipseShape(std::move(e), parse_convention(values[1])), std::move(lambda), digits, meta};
}

/// Orders records by eccentricity, then convention, for writing.
inline void sort_records(std::vector<EigenvalueRecord>& records) {
    std::stable_sort(records.begin(), records.end(), [](const EigenvalueRecord& a, const EigenvalueRecord& b) {
        if (a.shape.eccentricity() != b.shape.eccentricity()) return a.shape.eccentricity() < b.shape.eccentricity();
        return static_cast<int>(a.shape.convention()) < static_cast<int>(b.shape.convention());
    });
}

inline std::vector<EigenvalueRecord> read_records(std::istream& in) {
    std::vector<EigenvalueRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view v(line);
        std::size_t first = v.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || v[first] == '#') continue;
        try {
            out.push_back(parse_record(v.substr(first)));
        } catch (const ParseError& ex) {
            throw ParseError("line " + std::to_string(lineno) + ": " + ex.what());
        }
    }
    return out;
}

inline std::vector<EigenvalueRecord> read_data_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open data file " + path.string());
    return read_records(in);
}

/// Writes records sorted by e.
inline void write_records(std::ostream& out, std::vector<EigenvalueRecord> records) {
    sort_records(records);
    for (const auto& r : records) out << format_record(r) << '\n';
}

/// Replaces `path` by the sorted records; the new content appears in one
/// rename, so readers never see a half-written file.
inline void write_data_file(const std::filesystem::path& path, const std::vector<EigenvalueRecord>& records) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        write_records(out, records);
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace ellipse_lab
