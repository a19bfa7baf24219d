#include "weylchar/phase_grid.hpp"

#include <cmath>
#include <numbers>

#include "weylchar/error.hpp"

namespace weylchar {

const char* axis_name(Axes axes, int which) {
  if (axes == Axes::eta_xi) return which == 0 ? "eta" : "xi";
  return which == 0 ? "q" : "p";
}

Axes parse_axes(const std::string& text) {
  if (text == "eta_xi" || text == "eta,xi") return Axes::eta_xi;
  if (text == "q_p" || text == "q,p") return Axes::q_p;
  throw DomainError("unknown axis pair '" + text + "'");
}

PhaseGrid PhaseGrid::make(double extent, int points, Axes axes) {
  if (!(extent > 0.0) || !std::isfinite(extent)) throw DomainError("PhaseGrid: extent must be positive");
  if (points < 8 || points % 2 != 0) throw DomainError("PhaseGrid: points must be even and at least 8");
  return PhaseGrid{extent, points, axes};
}

PhaseGrid PhaseGrid::scaled(double factor) const { return make(extent * factor, points, axes); }

PhaseGrid PhaseGrid::with_axes(Axes a) const { return PhaseGrid{extent, points, a}; }

PhaseGrid reciprocal_grid(const PhaseGrid& grid, double hbar) {
  if (!(hbar > 0.0)) throw DomainError("reciprocal_grid: hbar must be positive");
  const Axes other = grid.axes == Axes::eta_xi ? Axes::q_p : Axes::eta_xi;
  return PhaseGrid::make(std::numbers::pi * hbar * grid.points / (2.0 * grid.extent), grid.points, other);
}

}  // namespace weylchar
