#include "hazstereo/io/csv.hpp"

#include <charconv>
#include <fstream>

#include "hazstereo/core/error.hpp"

namespace hazstereo {

std::string format_float(double v) {
    char buf[48];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

std::string format_float(float v) {
    char buf[48];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

namespace {

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n") != std::string::npos;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    if (header.empty()) raise(Errc::InvalidConfig, "csv header must be nonempty");
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) out_ += ',';
        out_ += needs_quoting(header[i]) ? quote(header[i]) : header[i];
    }
    out_ += '\n';
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        raise(Errc::ShapeMismatch, "csv row has " + std::to_string(cells.size()) + " cells, header has " +
                                       std::to_string(columns_));
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ += ',';
        out_ += needs_quoting(cells[i]) ? quote(cells[i]) : cells[i];
    }
    out_ += '\n';
}

std::string CsvWriter::str() const { return out_; }

void CsvWriter::save(const std::string& path) const { save_text(path, out_); }

void save_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) raise(Errc::IoError, "cannot open " + path + " for writing");
    f << text;
    if (!f) raise(Errc::IoError, "write failed: " + path);
}

int CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> cur;
    std::string cell;
    bool in_quotes = false;
    bool row_started = false;

    for (size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cell += c;
            }
            continue;
        }
        switch (c) {
            case '"': in_quotes = true; row_started = true; break;
            case ',':
                cur.push_back(cell);
                cell.clear();
                row_started = true;
                break;
            case '\r': break;
            case '\n':
                if (row_started || !cell.empty() || !cur.empty()) {
                    cur.push_back(cell);
                    records.push_back(cur);
                }
                cell.clear();
                cur.clear();
                row_started = false;
                break;
            default: cell += c; row_started = true; break;
        }
    }
    if (in_quotes) raise(Errc::ParseError, "csv: unterminated quoted cell");
    if (row_started || !cell.empty() || !cur.empty()) {
        cur.push_back(cell);
        records.push_back(cur);
    }
    if (records.empty()) raise(Errc::ParseError, "csv: no header row");

    CsvTable t;
    t.header = records.front();
    for (size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != t.header.size())
            raise(Errc::ParseError, "csv: row " + std::to_string(r) + " has " +
                                        std::to_string(records[r].size()) + " cells, header has " +
                                        std::to_string(t.header.size()));
        t.rows.push_back(records[r]);
    }
    return t;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) raise(Errc::IoError, "cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return parse_csv(text);
}

} // namespace hazstereo
