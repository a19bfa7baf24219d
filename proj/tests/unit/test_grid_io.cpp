#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "weylchar/error.hpp"
#include "weylchar/grid_io.hpp"

using namespace weylchar;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "weylchar_grid_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("complex grids round trip bit for bit") {
  const PhaseGrid grid = PhaseGrid::make(3.5, 8);
  Eigen::MatrixXcd v(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) v(i, j) = {std::sin(0.1 * i + 1.0 / 3.0), std::exp(-0.7 * j) * 1e-300};
  const auto path = scratch("c.csv").string();
  io::write_grid(path, grid, v, {{"task", "char"}, {"hbar", 0.5}});
  const auto back = io::read_grid(path);
  CHECK(back.complex);
  CHECK(back.grid == grid);
  CHECK(back.values == v);
  CHECK(back.meta["task"] == "char");
  CHECK(back.meta["points"] == 8);
}

TEST_CASE("real grids and layout") {
  const PhaseGrid grid = PhaseGrid::make(1.0, 8, Axes::q_p);
  Eigen::MatrixXd v = Eigen::MatrixXd::Random(8, 8);
  const auto path = scratch("r.csv").string();
  io::write_grid(path, grid, v);
  const auto back = io::read_grid(path);
  CHECK_FALSE(back.complex);
  CHECK(back.grid.axes == Axes::q_p);
  CHECK(back.values.real() == v);

  std::ifstream in(path);
  std::string meta, header, first;
  std::getline(in, meta);
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "i,j,x,y,value");
  CHECK(first.rfind("0,0,-1,-1,", 0) == 0);
}

TEST_CASE("malformed files") {
  CHECK_THROWS_AS(io::read_grid(scratch("missing.csv").string()), IoError);
  const auto path = scratch("bad.csv").string();
  {
    std::ofstream out(path);
    out << "{\"extent\":1,\"points\":8,\"axes\":\"eta_xi\",\"value\":\"complex\"}\ni,j,x,y,re,im\n0,0,-1,-1,1\n";
  }
  CHECK_THROWS_AS(io::read_grid(path), IoError);
  {
    std::ofstream out(path);
    out << "not json\n";
  }
  CHECK_THROWS_AS(io::read_grid(path), IoError);
}
