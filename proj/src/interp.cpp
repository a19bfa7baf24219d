#include "weylchar/interp.hpp"

#include <array>
#include <cmath>
#include <string>

#include "weylchar/error.hpp"

namespace weylchar {

namespace {

constexpr double kSnap = 1e-9;

double keys(double t) {
  constexpr double a = -0.5;
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

struct AxisPos {
  int base;      // node index (snapped) or floor index
  double frac;   // 0 for snapped nodes
  bool snapped;
};

AxisPos locate(const PhaseGrid& g, double x) {
  const double u = (x + g.extent) / g.spacing();
  const double r = std::round(u);
  if (std::abs(u - r) < kSnap) return {static_cast<int>(r), 0.0, true};
  const double f = std::floor(u);
  return {static_cast<int>(f), u - f, false};
}

bool in_range(const PhaseGrid& g, const AxisPos& p) {
  if (p.snapped) return p.base >= 0 && p.base < g.points;
  return p.base >= 1 && p.base + 2 < g.points;
}

}  // namespace

GridInterpolator::GridInterpolator(PhaseGrid grid, Eigen::MatrixXcd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.rows() != grid_.points || values_.cols() != grid_.points) {
    throw DimensionError("GridInterpolator: values do not match the grid");
  }
}

bool GridInterpolator::contains(double x, double y) const {
  return in_range(grid_, locate(grid_, x)) && in_range(grid_, locate(grid_, y));
}

std::complex<double> GridInterpolator::operator()(double x, double y) const {
  const AxisPos px = locate(grid_, x);
  const AxisPos py = locate(grid_, y);
  if (!in_range(grid_, px) || !in_range(grid_, py)) {
    throw DomainError("GridInterpolator: point (" + std::to_string(x) + ", " + std::to_string(y) +
                      ") outside the interpolation domain");
  }
  std::array<double, 4> wx{0, 1, 0, 0}, wy{0, 1, 0, 0};
  if (!px.snapped) {
    for (int k = 0; k < 4; ++k) wx[k] = keys(px.frac - (k - 1));
  }
  if (!py.snapped) {
    for (int k = 0; k < 4; ++k) wy[k] = keys(py.frac - (k - 1));
  }
  std::complex<double> acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    if (wx[a] == 0.0) continue;
    const int i = px.base + a - 1;
    std::complex<double> row = 0.0;
    for (int b = 0; b < 4; ++b) {
      if (wy[b] == 0.0) continue;
      row += wy[b] * values_(i, py.base + b - 1);
    }
    acc += wx[a] * row;
  }
  return acc;
}

}  // namespace weylchar
