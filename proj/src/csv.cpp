#include "scimap/csv.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "scimap/errors.hpp"

namespace scimap {

std::vector<CsvRow> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    std::vector<CsvRow> rows;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool row_has_content = false;
    std::size_t line = 1;
    std::size_t row_start_line = 1;

    auto end_field = [&] {
        fields.push_back(field);
        field.clear();
        field_was_quoted = false;
    };
    auto end_row = [&] {
        end_field();
        // a lone empty unquoted field on its own line is a blank line
        if (fields.size() > 1 || !fields[0].empty() || row_has_content) {
            rows.push_back({std::move(fields), row_start_line});
        }
        fields = {};
        row_has_content = false;
        row_start_line = line;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty()) {
                    throw ParseError(path, line, "unexpected quote inside unquoted field");
                }
                in_quotes = true;
                field_was_quoted = true;
                row_has_content = true;
                break;
            case ',':
                end_field();
                row_has_content = true;
                break;
            case '\r':
                break;
            case '\n':
                ++line;
                end_row();
                break;
            default:
                field.push_back(c);
                break;
        }
    }
    if (in_quotes) {
        throw ParseError(path, row_start_line, "unterminated quoted field");
    }
    if (!field.empty() || !fields.empty() || field_was_quoted) {
        end_row();
    }
    return rows;
}

std::string csv_quote(const std::string& field) {
    const bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string csv_join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += csv_quote(fields[i]);
    }
    return out;
}

std::string format_exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::string format_compact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

double parse_double(const std::string& s, const std::string& path, std::size_t line,
                    const std::string& what) {
    const std::string t = trim(s);
    if (t.empty()) {
        throw ParseError(path, line, what + ": empty numeric field");
    }
    double value = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError(path, line, what + ": not a number: '" + t + "'");
    }
    return value;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace scimap
