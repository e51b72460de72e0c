#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace scimap {

struct CsvRow {
    std::vector<std::string> fields;
    std::size_t line = 0;  // 1-based line the row starts on
};

// RFC-4180-style reader: quoted fields, embedded commas, quotes and newlines.
// Skips blank lines between records.
std::vector<CsvRow> read_csv(const std::string& path);

// Quotes a field only when it needs quoting.
std::string csv_quote(const std::string& field);
std::string csv_join(const std::vector<std::string>& fields);

// %.17g — parses back to the identical double.
std::string format_exact(double v);
// Fixed-point with the given number of decimals.
std::string format_fixed(double v, int decimals);
// %g — compact form for ranks and histogram bins.
std::string format_compact(double v);

// Strict double parse; throws ParseError mentioning `what` on failure.
double parse_double(const std::string& s, const std::string& path, std::size_t line,
                    const std::string& what);

std::string trim(const std::string& s);

}  // namespace scimap
