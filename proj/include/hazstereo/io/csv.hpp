#pragma once

#include <string>
#include <vector>

namespace hazstereo {

// Shortest round-trip decimal form, so rewriting identical data yields
// byte-identical files.
std::string format_float(double v);
std::string format_float(float v);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(const std::vector<std::string>& cells); // ShapeMismatch on arity
    std::string str() const;
    void save(const std::string& path) const;

private:
    size_t columns_;
    std::string out_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 when absent
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv_file(const std::string& path);

void save_text(const std::string& path, const std::string& text); // IoError

} // namespace hazstereo
