#include <gtest/gtest.h>

#include <fstream>

#include "mdlcomp/io.hpp"
#include "support.hpp"

using namespace mdlcomp;

TEST(Io, FormatsTwelveSignificantDigits) {
    EXPECT_EQ(io::format_number(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(io::format_number(2.0), "2");
    EXPECT_EQ(io::format_number(1e-20), "1e-20");
    EXPECT_EQ(io::format_number(INFINITY), "inf");
    EXPECT_EQ(io::format_number(-INFINITY), "-inf");
    EXPECT_EQ(io::format_number(NAN), "nan");
}

TEST(Io, SplitsAndParsesCells) {
    EXPECT_EQ(io::split_csv_line(" a, b ,c"), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(io::split_csv_line("1,,2").size(), 3u);
    EXPECT_DOUBLE_EQ(io::parse_number(" 2.5e3 "), 2500.0);
    EXPECT_THROW(io::parse_number("2.5x"), InputError);
    EXPECT_THROW(io::parse_number(""), InputError);
}

TEST(Io, MatrixRoundTrip) {
    const auto dir = testing_support::scratch_dir("io_matrix");
    const std::string path = (dir / "m.csv").string();
    Matrix m(2, 3);
    m << 1, -2.5, 3e-7, 0.25, 5, 6;
    io::write_matrix_csv(path, m);
    EXPECT_EQ(io::read_matrix_csv(path), m);
    io::write_vector_csv(path, Vector::LinSpaced(4, 1, 4));
    EXPECT_EQ(io::read_vector_csv(path), Vector::LinSpaced(4, 1, 4));
}

TEST(Io, VectorAcceptsSingleRow) {
    const auto dir = testing_support::scratch_dir("io_row");
    const std::string path = (dir / "v.csv").string();
    std::ofstream(path) << "1,2,3\n";
    EXPECT_EQ(io::read_vector_csv(path), Vector::LinSpaced(3, 1, 3));
}

TEST(Io, RejectsMalformedFiles) {
    const auto dir = testing_support::scratch_dir("io_bad");
    const std::string ragged = (dir / "ragged.csv").string(), text = (dir / "text.csv").string(),
                      empty = (dir / "empty.csv").string(), grid = (dir / "grid.csv").string();
    std::ofstream(ragged) << "1,2\n3\n";
    std::ofstream(text) << "1,abc\n";
    std::ofstream(empty) << "";
    std::ofstream(grid) << "1,2\n3,4\n";
    EXPECT_THROW(io::read_matrix_csv(ragged), InputError);
    EXPECT_THROW(io::read_matrix_csv(text), InputError);
    EXPECT_THROW(io::read_matrix_csv(empty), InputError);
    EXPECT_THROW(io::read_matrix_csv((dir / "missing.csv").string()), InputError);
    EXPECT_THROW(io::read_vector_csv(grid), InputError);
}
