#include "bica/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bica {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Eigen::MatrixXd read_csv_matrix(const std::string& path, bool header) {
    std::ifstream in(path);
    if (!in) throw CsvParseError("cannot open file: " + path, 0, 0);

    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (header && lineno == 1) continue;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            try {
                size_t pos = 0;
                row.push_back(std::stod(cell, &pos));
                while (pos < cell.size() &&
                       (cell[pos] == ' ' || cell[pos] == '\r' || cell[pos] == '\t'))
                    ++pos;
                if (pos != cell.size())
                    throw CsvParseError("trailing characters in cell", lineno, col);
            } catch (const CsvParseError&) {
                throw;
            } catch (const std::exception&) {
                throw CsvParseError("not a number: '" + cell + "'", lineno, col);
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw CsvParseError("ragged row", lineno, static_cast<int>(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw CsvParseError("empty matrix: " + path, lineno, 0);

    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& header) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    if (!header.empty()) {
        for (size_t j = 0; j < header.size(); ++j)
            out << (j ? "," : "") << header[j];
        out << '\n';
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out << (j ? "," : "") << format_double(m(i, j));
        out << '\n';
    }
    if (!out) throw Error("write failed: " + path);
}

} // namespace bica
