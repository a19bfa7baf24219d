#include "weylchar/grid_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "weylchar/error.hpp"

namespace weylchar::io {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json header(const PhaseGrid& grid, nlohmann::json meta, bool complex) {
  if (!meta.is_object()) throw DomainError("write_grid: metadata must be a JSON object");
  meta["extent"] = grid.extent;
  meta["points"] = grid.points;
  meta["axes"] = grid.axes == Axes::eta_xi ? "eta_xi" : "q_p";
  meta["value"] = complex ? "complex" : "real";
  return meta;
}

template <class Row>
void write_rows(const std::string& path, const PhaseGrid& grid, const nlohmann::json& meta, const char* columns,
                Row row) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << meta.dump() << '\n' << columns << '\n';
  for (int i = 0; i < grid.points; ++i) {
    for (int j = 0; j < grid.points; ++j) {
      out << i << ',' << j << ',' << fmt(grid.coord(i)) << ',' << fmt(grid.coord(j)) << ',' << row(i, j) << '\n';
    }
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double to_double(const std::string& s, const std::string& path, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError(path + ":" + std::to_string(line) + ": bad number '" + s + "'");
  }
}

}  // namespace

void write_grid(const std::string& path, const PhaseGrid& grid, const Eigen::MatrixXcd& values, nlohmann::json meta) {
  if (values.rows() != grid.points || values.cols() != grid.points) {
    throw DimensionError("write_grid: values do not match the grid");
  }
  write_rows(path, grid, header(grid, std::move(meta), true), "i,j,x,y,re,im",
             [&](int i, int j) { return fmt(values(i, j).real()) + ',' + fmt(values(i, j).imag()); });
}

void write_grid(const std::string& path, const PhaseGrid& grid, const Eigen::MatrixXd& values, nlohmann::json meta) {
  if (values.rows() != grid.points || values.cols() != grid.points) {
    throw DimensionError("write_grid: values do not match the grid");
  }
  write_rows(path, grid, header(grid, std::move(meta), false), "i,j,x,y,value",
             [&](int i, int j) { return fmt(values(i, j)); });
}

GridFile read_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  GridFile file;
  try {
    file.meta = nlohmann::json::parse(line);
    const std::string axes = file.meta.at("axes").get<std::string>();
    file.grid = PhaseGrid::make(file.meta.at("extent").get<double>(), file.meta.at("points").get<int>(),
                                parse_axes(axes));
    file.complex = file.meta.at("value").get<std::string>() == "complex";
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": bad metadata line: " + e.what());
  } catch (const DomainError& e) {
    throw IoError(path + ": bad metadata line: " + e.what());
  }
  if (!std::getline(in, line)) throw IoError(path + ": missing column line");
  const std::size_t expected_cols = file.complex ? 6 : 5;
  if (split(line).size() != expected_cols) throw IoError(path + ": unexpected column line '" + line + "'");
  const int m = file.grid.points;
  file.values = Eigen::MatrixXcd::Zero(m, m);
  int lineno = 2;
  for (int k = 0; k < m * m; ++k) {
    ++lineno;
    if (!std::getline(in, line)) throw IoError(path + ": truncated after line " + std::to_string(lineno - 1));
    const auto cells = split(line);
    if (cells.size() != expected_cols) throw IoError(path + ":" + std::to_string(lineno) + ": wrong column count");
    const int i = static_cast<int>(to_double(cells[0], path, lineno));
    const int j = static_cast<int>(to_double(cells[1], path, lineno));
    if (i != k / m || j != k % m) throw IoError(path + ":" + std::to_string(lineno) + ": rows out of order");
    const double re = to_double(cells[4], path, lineno);
    const double im = file.complex ? to_double(cells[5], path, lineno) : 0.0;
    file.values(i, j) = {re, im};
  }
  return file;
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace weylchar::io
