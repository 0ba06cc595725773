#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "symland/matrix_io.hpp"
#include "symland/sumgate.hpp"

using namespace symland;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "symland_io_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_raw(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST(MatrixIo, JsonRoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Mat m = random_symplectic(3, seed, 1.3).matrix();
    const fs::path p = temp_path("rt.json");
    write_matrix(p.string(), m, MatrixFormat::Json);
    const Mat back = read_matrix(p.string());
    ASSERT_EQ(back.rows(), m.rows());
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      EXPECT_EQ(back.data()[i], m.data()[i]);
    }
  }
}

TEST(MatrixIo, JsonAwkwardValues) {
  Mat m(2, 2);
  m << 0.1, -1e-300, std::numeric_limits<double>::denorm_min(), 1.0 / 3.0;
  const Mat back = parse_matrix_json(matrix_to_json(m));
  EXPECT_EQ(back, m);
}

TEST(MatrixIo, CsvRoundTripIsBitExact) {
  const Mat m = random_symplectic(2, 77, 0.9).matrix();
  const fs::path p = temp_path("rt.csv");
  write_matrix(p.string(), m, MatrixFormat::Csv);
  EXPECT_EQ(format_for_path(p.string()), MatrixFormat::Csv);
  EXPECT_EQ(read_matrix(p.string()), m);
}

TEST(MatrixIo, ParsesHandWrittenInputs) {
  const Mat j = parse_matrix_json(R"({"rows": [[0, 1], [-1, 0]]})");
  EXPECT_EQ(j, symplectic_form(1));
  const Mat c = parse_matrix_csv("1, 0, 0, 0\n1,1,0,0\n0,0,1,-1\n0,0,0,1\n");
  EXPECT_EQ(c, sum::gate());
}

TEST(MatrixIo, Errors) {
  EXPECT_THROW(read_matrix(temp_path("missing.json").string()), IoError);
  EXPECT_THROW(parse_matrix_json("{not json"), ValidationError);
  EXPECT_THROW(parse_matrix_json(R"({"data": []})"), ValidationError);
  EXPECT_THROW(parse_matrix_json(R"({"rows": [[1, "x"], [0, 1]]})"), ValidationError);
  EXPECT_THROW(parse_matrix_json(R"({"rows": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})"), DimensionError);
  EXPECT_THROW(parse_matrix_json(R"({"rows": [[1, 0], [0]]})"), DimensionError);
  EXPECT_THROW(parse_matrix_json(R"({"n": 2, "rows": [[1, 0], [0, 1]]})"), DimensionError);
  EXPECT_THROW(parse_matrix_csv("1,0\n0,abc\n"), ValidationError);
  EXPECT_THROW(parse_matrix_csv("1,0\n0\n"), DimensionError);
  EXPECT_THROW(parse_format("xml"), ValidationError);

  const fs::path p = temp_path("bad.json");
  write_raw(p, "[1, 2]");
  EXPECT_THROW(read_matrix(p.string()), ValidationError);
}

TEST(MatrixIo, AtomicWriteReplacesAndLeavesNoTemp) {
  const fs::path p = temp_path("atomic.txt");
  write_text_atomic(p.string(), "first\n");
  write_text_atomic(p.string(), "second\n");
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "second");
  EXPECT_FALSE(fs::exists(p.string() + ".tmp"));
  EXPECT_THROW(write_text_atomic((temp_path("no_such_dir") / "x" / "y.txt").string(), "z"), IoError);
}
