#include "sadic/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sadic {

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw std::invalid_argument("CsvWriter: empty header");
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) throw std::invalid_argument("CsvWriter: row width mismatch");
    rows_.push_back(cells);
}

std::string CsvWriter::format(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string CsvWriter::format(long value) { return std::to_string(value); }

std::string CsvWriter::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
    os << "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    return os.str();
}

void CsvWriter::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("CsvWriter: cannot open " + path);
    out << to_string();
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

double CsvTable::number(std::size_t row, int col) const {
    if (col < 0 || row >= rows.size() || static_cast<std::size_t>(col) >= rows[row].size())
        throw std::out_of_range("CsvTable: cell out of range");
    return std::stod(rows[row][static_cast<std::size_t>(col)]);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    if (first) throw std::runtime_error("read_csv: empty file " + path);
    return table;
}

std::string render_svg_lines(
    const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series, bool log_x,
    bool log_y, int width, int height) {
    auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& [name, pts] : series)
        for (auto [x, y] : pts) {
            if (log_x && !(x > 0)) continue;
            if (log_y && !(y > 0)) continue;
            xmin = std::min(xmin, tx(x));
            xmax = std::max(xmax, tx(x));
            ymin = std::min(ymin, ty(y));
            ymax = std::max(ymax, ty(y));
        }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;
    const double pad = 40.0;
    auto px = [&](double x) { return pad + (tx(x) - xmin) / (xmax - xmin) * (width - 2 * pad); };
    auto py = [&](double y) { return height - pad - (ty(y) - ymin) / (ymax - ymin) * (height - 2 * pad); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    int color = 0;
    for (const auto& [name, pts] : series) {
        os << "<polyline fill=\"none\" stroke=\"" << palette[color % 6] << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : pts) {
            if ((log_x && !(x > 0)) || (log_y && !(y > 0))) continue;
            os << px(x) << "," << py(y) << " ";
        }
        os << "\"/>\n";
        os << "<text x=\"" << (pad + 6) << "\" y=\"" << (pad + 14 * (color + 1)) << "\" fill=\""
           << palette[color % 6] << "\" font-size=\"12\">" << name << "</text>\n";
        ++color;
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace sadic
