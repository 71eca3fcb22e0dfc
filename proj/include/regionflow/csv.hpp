#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace regionflow::csv {

/// Minimal header-driven CSV reader. Fields are comma separated; a field may be
/// wrapped in double quotes (with "" as an escaped quote). Blank lines and lines
/// starting with '#' are skipped. Columns are resolved by header name.
class Reader {
public:
    explicit Reader(const std::string& path);

    /// Index of a header column, or nullopt when absent.
    std::optional<std::size_t> column(std::string_view name) const;
    /// Like column(), but throws InputError("malformed_header") when absent.
    std::size_t require_column(std::string_view name) const;

    /// Reads the next data row into `fields`. Returns false at end of file.
    bool next(std::vector<std::string>& fields);

    /// 1-based line number of the row most recently returned by next().
    std::size_t line_number() const { return line_no_; }
    /// 0-based index of the row most recently returned by next().
    std::size_t row_index() const { return rows_ - 1; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ifstream in_;
    std::vector<std::string> header_;
    std::string line_;
    std::size_t line_no_ = 0;
    std::size_t rows_ = 0;
};

/// Splits one CSV line into fields (quotes honoured, surrounding whitespace kept).
void split_line(std::string_view line, std::vector<std::string>& fields);

/// Parses a strictly formatted integer / floating point field.
std::optional<long long> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);
/// Accepts 1/0, true/false, yes/no, y/n, t/f (case-insensitive).
std::optional<bool> parse_bool(std::string_view s);

/// Quotes a field when it contains a comma, quote, or newline.
std::string escape(std::string_view field);

}  // namespace regionflow::csv
