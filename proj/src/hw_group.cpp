#include "weylchar/hw_group.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "weylchar/error.hpp"

namespace weylchar::hw {

namespace {

void require_same_n(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

GroupElement GroupElement::make(double s, std::vector<double> eta, std::vector<double> xi) {
  if (eta.empty()) throw DimensionError("GroupElement: n must be at least 1");
  require_same_n(eta.size(), xi.size(), "GroupElement");
  if (!std::isfinite(s) || !all_finite(eta) || !all_finite(xi)) {
    throw DomainError("GroupElement: non-finite coordinate");
  }
  return GroupElement{s, std::move(eta), std::move(xi)};
}

GroupElement GroupElement::single(double s, double eta, double xi) {
  return make(s, {eta}, {xi});
}

GroupElement GroupElement::identity(int n) {
  if (n < 1) throw DimensionError("GroupElement::identity: n must be at least 1");
  return GroupElement{0.0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
}

double symplectic_form(std::span<const double> eta_a, std::span<const double> xi_a,
                       std::span<const double> eta_b, std::span<const double> xi_b) {
  require_same_n(eta_a.size(), xi_a.size(), "symplectic_form");
  require_same_n(eta_b.size(), xi_b.size(), "symplectic_form");
  require_same_n(eta_a.size(), eta_b.size(), "symplectic_form");
  double acc = 0.0;
  for (std::size_t j = 0; j < eta_a.size(); ++j) {
    acc += xi_a[j] * eta_b[j] - eta_a[j] * xi_b[j];
  }
  return acc;
}

double symplectic_form(const GroupElement& a, const GroupElement& b) {
  return symplectic_form(a.eta, a.xi, b.eta, b.xi);
}

GroupElement multiply(const GroupElement& g, const GroupElement& h) {
  require_same_n(g.eta.size(), h.eta.size(), "multiply");
  GroupElement out;
  out.s = g.s + h.s + 0.5 * symplectic_form(g, h);
  out.eta.resize(g.eta.size());
  out.xi.resize(g.xi.size());
  for (std::size_t j = 0; j < g.eta.size(); ++j) {
    out.eta[j] = g.eta[j] + h.eta[j];
    out.xi[j] = g.xi[j] + h.xi[j];
  }
  return out;
}

GroupElement inverse(const GroupElement& g) {
  GroupElement out{-g.s, g.eta, g.xi};
  for (auto& x : out.eta) x = -x;
  for (auto& x : out.xi) x = -x;
  return out;
}

double haar_weight(double hbar, int n) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("haar_weight: hbar must be positive");
  if (n < 1) throw DomainError("haar_weight: n must be at least 1");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return 1.0 / (two_pi * two_pi * std::pow(two_pi * hbar, n - 1));
}

}  // namespace weylchar::hw
