#include "verivote/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace verivote {

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", x);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw std::invalid_argument("csv needs at least one column");
}

void CsvTable::add_row(std::vector<std::variant<std::string, double, long long>> cells) {
    if (cells.size() != header_.size()) throw std::invalid_argument("csv row width mismatch");
    std::vector<std::string> row;
    row.reserve(cells.size());
    for (auto& cell : cells) {
        if (std::holds_alternative<double>(cell))
            row.push_back(format_real(std::get<double>(cell)));
        else if (std::holds_alternative<long long>(cell))
            row.push_back(std::to_string(std::get<long long>(cell)));
        else
            row.push_back(std::move(std::get<std::string>(cell)));
    }
    rows_.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
    std::ostringstream os;
    for (std::size_t j = 0; j < header_.size(); ++j)
        os << (j ? "," : "") << header_[j];
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << row[j];
        os << '\n';
    }
    return os.str();
}

void CsvTable::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << to_string();
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

ParsedCsv read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open csv file: " + path);
    ParsedCsv out;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cur;
        for (char ch : s) {
            if (ch == ',') {
                cells.push_back(cur);
                cur.clear();
            } else if (ch != '\r') {
                cur.push_back(ch);
            }
        }
        cells.push_back(cur);
        return cells;
    };
    if (!std::getline(in, line)) throw std::runtime_error("csv file is empty");
    out.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != out.header.size())
            throw std::runtime_error("csv row width does not match the header");
        out.rows.push_back(std::move(cells));
    }
    return out;
}

namespace {

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end && *end == '\0';
}

} // namespace

std::string render_table(const ParsedCsv& csv) {
    if (csv.rows.empty()) return "no rows\n";

    std::vector<std::vector<std::string>> rows = csv.rows;
    bool numeric_first = true;
    for (const auto& row : rows) {
        double v;
        if (!parse_number(row[0], v)) {
            numeric_first = false;
            break;
        }
    }
    if (numeric_first) {
        std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            double x = 0, y = 0;
            parse_number(a[0], x);
            parse_number(b[0], y);
            return x < y;
        });
    }

    std::vector<std::vector<std::string>> cells;
    cells.push_back(csv.header);
    for (const auto& row : rows) {
        std::vector<std::string> line;
        for (const auto& cell : row) {
            double v;
            line.push_back(parse_number(cell, v) ? format_real(v) : cell);
        }
        cells.push_back(std::move(line));
    }

    std::vector<std::size_t> width(csv.header.size(), 0);
    for (const auto& row : cells)
        for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());

    std::ostringstream os;
    for (const auto& row : cells) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) os << "  ";
            os << row[j] << std::string(width[j] - row[j].size(), ' ');
        }
        os << '\n';
    }
    return os.str();
}

} // namespace verivote
