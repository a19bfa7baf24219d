#pragma once

#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "weylchar/phase_grid.hpp"

namespace weylchar::io {

/// Grid exchange format.
///
/// Line 1: compact JSON object with at least "extent", "points", "axes"
/// ("eta_xi" or "q_p") and "value" ("complex" or "real"), plus any job metadata.
/// Line 2: column names, "i,j,x,y,re,im" or "i,j,x,y,value".
/// Then points^2 rows, i outer and j inner, numbers printed with %.17g.
/// x = coord(i) is the first axis, y = coord(j) the second.
struct GridFile {
  nlohmann::json meta;
  PhaseGrid grid;
  Eigen::MatrixXcd values;
  bool complex = true;
};

void write_grid(const std::string& path, const PhaseGrid& grid, const Eigen::MatrixXcd& values,
                nlohmann::json meta = nlohmann::json::object());
void write_grid(const std::string& path, const PhaseGrid& grid, const Eigen::MatrixXd& values,
                nlohmann::json meta = nlohmann::json::object());

/// Throws IoError on unreadable files and malformed content.
GridFile read_grid(const std::string& path);

/// Writes `doc` pretty-printed with a trailing newline.
void write_json(const std::string& path, const nlohmann::json& doc);

}  // namespace weylchar::io
