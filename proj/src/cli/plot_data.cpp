#include <cstdio>
#include <fstream>
#include <sstream>

#include "fluctuon/cli.hpp"
#include "fluctuon/errors.hpp"

namespace fluctuon::cli {

void emit_plot_data(const Series& series, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write plot data to '" + path + "'");
    for (std::size_t i = 0; i < series.columns.size(); ++i) out << (i ? "," : "") << series.columns[i];
    out << '\n';
    char buf[32];
    for (const auto& row : series.rows) {
        if (row.size() != series.columns.size()) throw ShapeError("plot row width does not match the header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("write to '" + path + "' failed");
}

Series read_plot_data(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read plot data from '" + path + "'");
    Series series;
    std::string line;
    if (!std::getline(in, line)) return series;
    std::stringstream header(line);
    for (std::string cell; std::getline(header, cell, ',');) series.columns.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::stod(cell));
        series.rows.push_back(std::move(row));
    }
    return series;
}

} // namespace fluctuon::cli
