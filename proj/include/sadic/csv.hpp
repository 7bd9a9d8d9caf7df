// Deterministic CSV writing/reading and a minimal SVG line chart, shared by
// the experiment runner and the CLI.
#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace sadic {

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(const std::vector<std::string>& cells);
    std::size_t rows() const { return rows_.size(); }

    // Fixed "%.12g" formatting keeps outputs byte-identical across runs.
    static std::string format(double value);
    static std::string format(long value);
    static std::string format(const std::string& value) { return value; }

    std::string to_string() const;
    void write(const std::string& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 when absent
    double number(std::size_t row, int col) const;
};

CsvTable read_csv(const std::string& path);

// Polyline chart of (x, y) series on log-log or linear axes; enough for a
// quick look at sweep output without external tooling.
std::string render_svg_lines(const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series,
                             bool log_x, bool log_y, int width = 640, int height = 400);

} // namespace sadic
