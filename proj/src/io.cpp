#include "mdlcomp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mdlcomp::io {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::vector<double>> read_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<double> row;
        for (const std::string& cell : split_csv_line(line)) {
            try {
                row.push_back(parse_number(cell));
            } catch (const InputError&) {
                throw InputError(path + ":" + std::to_string(line_no) + ": non-numeric cell '" +
                                 cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError("'" + path + "' contains no data");
    return rows;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_number(const std::string& cell) {
    if (cell.empty()) throw InputError("empty cell");
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(cell, &used);
    } catch (const std::logic_error&) {
        throw InputError("non-numeric cell '" + cell + "'");
    }
    if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw InputError("non-numeric cell '" + cell + "'");
    return value;
}

Matrix read_matrix_csv(const std::string& path) {
    const auto rows = read_rows(path);
    const std::size_t cols = rows.front().size();
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw InputError("'" + path + "' has ragged rows (" + std::to_string(rows[i].size()) +
                             " vs " + std::to_string(cols) + " cells)");
        for (std::size_t j = 0; j < cols; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    if (!all_finite(m)) throw InputError("'" + path + "' contains non-finite values");
    return m;
}

Vector read_vector_csv(const std::string& path) {
    const Matrix m = read_matrix_csv(path);
    if (m.cols() == 1) return m.col(0);
    if (m.rows() == 1) return m.row(0).transpose();
    throw InputError("'" + path + "' is not a vector (expected one row or one column)");
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << content;
    if (!out) throw InputError("failed writing '" + path + "'");
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
    std::string text;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) text += ',';
            text += format_number(m(i, j));
        }
        text += '\n';
    }
    write_text_file(path, text);
}

void write_vector_csv(const std::string& path, const Vector& v) {
    write_matrix_csv(path, Matrix(v));
}

}  // namespace mdlcomp::io
