#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "bica/errors.hpp"

namespace bica {

// CSV parse failure with 1-based position information.
class CsvParseError : public Error {
public:
    CsvParseError(std::string message, int line, int column)
        : Error(std::move(message) + " (line " + std::to_string(line) +
                ", column " + std::to_string(column) + ")"),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Reads a rectangular numeric matrix; rows = components, columns = samples.
Eigen::MatrixXd read_csv_matrix(const std::string& path, bool header = false);

// Writes with 17 significant digits so a write/read round trip is lossless
// and re-serializes to identical text.
void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& header = {});

std::string format_double(double v);

} // namespace bica
