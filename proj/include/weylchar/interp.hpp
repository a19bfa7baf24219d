#pragma once

#include <complex>

#include <Eigen/Dense>

#include "weylchar/phase_grid.hpp"

namespace weylchar {

/// Bicubic (Keys cubic convolution, a = -1/2) interpolation of complex grid
/// samples. Points within 1e-9 grid spacings of a node return the node value
/// exactly. Throws DomainError when the 4x4 stencil leaves the grid.
class GridInterpolator {
 public:
  GridInterpolator(PhaseGrid grid, Eigen::MatrixXcd values);

  std::complex<double> operator()(double x, double y) const;
  /// True when (x, y) can be evaluated (node or full stencil inside the grid).
  bool contains(double x, double y) const;

  const PhaseGrid& grid() const { return grid_; }

 private:
  PhaseGrid grid_;
  Eigen::MatrixXcd values_;
};

}  // namespace weylchar
