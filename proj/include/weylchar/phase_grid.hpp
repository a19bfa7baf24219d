#pragma once

#include <string>

namespace weylchar {

/// Which conjugate pair a grid samples.
enum class Axes {
  eta_xi,  ///< group translation coordinates (characteristic functions, observables)
  q_p,     ///< phase-space coordinates (Wigner functions, classical densities)
};

const char* axis_name(Axes axes, int which);
Axes parse_axes(const std::string& text);

/// Uniform square grid over [-extent, extent) in each axis.
///
/// Node k sits at -extent + k*spacing with spacing = 2*extent/points, so the
/// origin is node points/2 and the grid is FFT-periodic. Node k and node
/// points-k are mirror images for 1 <= k < points; node 0 has no partner.
struct PhaseGrid {
  double extent = 0.0;
  int points = 0;
  Axes axes = Axes::eta_xi;

  /// Validating constructor: extent > 0, points even and >= 8.
  static PhaseGrid make(double extent, int points, Axes axes = Axes::eta_xi);

  double spacing() const { return 2.0 * extent / points; }
  double coord(int k) const { return -extent + k * spacing(); }
  int origin() const { return points / 2; }
  /// Index of the mirror node of k, or -1 for node 0.
  int mirror(int k) const { return k == 0 ? -1 : points - k; }
  /// Same node layout with a different extent (used by rescalings).
  PhaseGrid scaled(double factor) const;
  PhaseGrid with_axes(Axes a) const;

  bool operator==(const PhaseGrid&) const = default;
};

/// Grid whose nodes are the FFT-conjugate points of `grid` under the kernel
/// exp(-i (eta q - xi p) / hbar): extent pi*hbar*points/(2*extent).
PhaseGrid reciprocal_grid(const PhaseGrid& grid, double hbar);

}  // namespace weylchar
