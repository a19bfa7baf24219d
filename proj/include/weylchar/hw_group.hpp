#pragma once

#include <span>
#include <vector>

namespace weylchar::hw {

/// Point (s, eta, xi) of the Heisenberg-Weyl group H_n.
///
/// `s` is the central (phase) coordinate, `eta` and `xi` the phase-space
/// translation coordinates. Units are left to the caller; only hbar*s enters
/// exponents of the physical representation.
struct GroupElement {
  double s = 0.0;
  std::vector<double> eta;
  std::vector<double> xi;

  /// Validating constructor: equal lengths, n >= 1, all components finite.
  static GroupElement make(double s, std::vector<double> eta, std::vector<double> xi);
  /// Single-mode shorthand.
  static GroupElement single(double s, double eta, double xi);
  static GroupElement identity(int n);

  int n() const { return static_cast<int>(eta.size()); }
  bool operator==(const GroupElement&) const = default;
};

/// xi_a . eta_b - eta_a . xi_b, i.e. (eta_a, xi_a)^T omega (eta_b, xi_b) with
/// omega = [[0, -1], [1, 0]].
double symplectic_form(std::span<const double> eta_a, std::span<const double> xi_a,
                       std::span<const double> eta_b, std::span<const double> xi_b);
double symplectic_form(const GroupElement& a, const GroupElement& b);

/// (s + s' + omega/2, eta + eta', xi + xi').
GroupElement multiply(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);

/// Constant prefactor of the rescaled Haar measure on S_n = [0, 2pi/hbar] x R^{2n}:
/// 1 / ((2 pi)^2 (2 pi hbar)^{n-1}).
double haar_weight(double hbar, int n);

}  // namespace weylchar::hw
