#pragma once

#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "bellmdl/errors.hpp"

// Minimal CSV emission/parsing: header row, LF line endings, RFC-style
// quoting, doubles at 17 significant digits so a re-read reproduces the
// value bit-exactly.

namespace bellmdl {

/// Shortest-safe decimal form of a double: 17 significant digits.
inline std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Quotes a field when it contains a comma, quote, or newline.
inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void row(std::span<const std::string> fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) os_ << ',';
            os_ << csv_quote(fields[i]);
        }
        os_ << '\n';
        if (!os_) throw IoError("csv: write failed");
    }

    void row(std::initializer_list<std::string> fields) {
        row(std::span<const std::string>(fields.begin(), fields.size()));
    }

    void numeric_row(std::span<const double> values) {
        std::vector<std::string> fields;
        fields.reserve(values.size());
        for (double v : values) fields.push_back(csv_double(v));
        row(fields);
    }

    void numeric_row(std::initializer_list<double> values) {
        numeric_row(std::span<const double>(values.begin(), values.size()));
    }

private:
    std::ostream& os_;
};

/// Parses CSV text back into rows of fields (quoting rules as written by
/// CsvWriter). Used by tests to check round-trips.
inline std::vector<std::vector<std::string>> csv_parse(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c == '\n') {
            fields.push_back(std::move(cur));
            cur.clear();
            rows.push_back(std::move(fields));
            fields.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty() || !fields.empty()) {
        fields.push_back(std::move(cur));
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace bellmdl
