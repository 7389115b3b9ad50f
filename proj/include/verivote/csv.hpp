#pragma once

#include <string>
#include <variant>
#include <vector>

namespace verivote {

// Minimal CSV with the project conventions: header row, comma separators,
// LF line endings, reals printed with nine fixed decimals.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::variant<std::string, double, long long>> cells);
    std::string to_string() const;
    void write(const std::string& path) const;

    const std::vector<std::string>& header() const { return header_; }
    std::size_t num_rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string format_real(double x);

struct ParsedCsv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Reads a CSV produced by this project; throws on ragged rows.
ParsedCsv read_csv(const std::string& path);

// Aligned fixed-point rendering of a parsed CSV; rows are sorted by the
// first column when every value in it parses as a number.
std::string render_table(const ParsedCsv& csv);

} // namespace verivote
