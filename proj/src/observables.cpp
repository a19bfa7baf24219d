#include "weylchar/observables.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "weylchar/error.hpp"
#include "weylchar/repr.hpp"
#include "weylchar/spectral.hpp"

namespace weylchar::obs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_match(const PhaseGrid& grid, const Eigen::MatrixXcd& values, const char* where) {
  if (values.rows() != grid.points || values.cols() != grid.points) {
    throw DimensionError(std::string(where) + ": values do not match the grid");
  }
}

Moments moments_from(const PhaseGrid& grid, const Eigen::MatrixXcd& values, double hbar, int order) {
  require_match(grid, values, "quadrature_moments");
  if (order != 1 && order != 2) throw DomainError("quadrature_moments: order must be 1 or 2");
  Moments m;
  m.boundary_ratio = nct::boundary_ratio(values);
  if (m.boundary_ratio > nct::kInverseDecayTolerance) {
    std::ostringstream msg;
    msg << "quadrature_moments: char does not decay at the boundary (ratio " << m.boundary_ratio
        << "), spectral derivatives would alias";
    throw DecayError(msg.str());
  }
  const double h = grid.spacing();
  const int o = grid.origin();
  const Eigen::MatrixXcd d_eta = spectral::derivative(values, 0, 1, h);
  const Eigen::MatrixXcd d_xi = spectral::derivative(values, 1, 1, h);
  const cplx q = cplx(0.0, -hbar) * d_eta(o, o);
  const cplx p = cplx(0.0, hbar) * d_xi(o, o);
  m.mean_q = q.real();
  m.mean_p = p.real();
  m.imag_residue = std::max(std::abs(q.imag()), std::abs(p.imag()));
  if (order == 1) return m;
  const cplx q2 = -hbar * hbar * spectral::derivative(values, 0, 2, h)(o, o);
  const cplx p2 = -hbar * hbar * spectral::derivative(values, 1, 2, h)(o, o);
  const cplx qp = hbar * hbar * spectral::derivative(d_xi, 0, 1, h)(o, o);
  m.q2 = q2.real();
  m.p2 = p2.real();
  m.qp_sym = qp.real();
  m.imag_residue = std::max({m.imag_residue, std::abs(q2.imag()), std::abs(p2.imag()), std::abs(qp.imag())});
  m.var_q = m.q2 - m.mean_q * m.mean_q;
  m.var_p = m.p2 - m.mean_p * m.mean_p;
  return m;
}

// Central 5-point weights on offsets -2..2.
constexpr std::array<double, 5> kFirst{1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
constexpr std::array<double, 5> kSecond{-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};

struct StencilDerivs {
  cplx eta, xi, eta2, xi2, mixed;
};

StencilDerivs stencil_at(const Eigen::MatrixXcd& v, int o, int step, double h) {
  StencilDerivs d{};
  const double hs = step * h;
  for (int a = 0; a < 5; ++a) {
    const int off = (a - 2) * step;
    d.eta += kFirst[a] * v(o + off, o);
    d.xi += kFirst[a] * v(o, o + off);
    d.eta2 += kSecond[a] * v(o + off, o);
    d.xi2 += kSecond[a] * v(o, o + off);
    for (int b = 0; b < 5; ++b) d.mixed += kFirst[a] * kFirst[b] * v(o + off, o + (b - 2) * step);
  }
  d.eta /= hs;
  d.xi /= hs;
  d.eta2 /= hs * hs;
  d.xi2 /= hs * hs;
  d.mixed /= hs * hs;
  return d;
}

}  // namespace

double reality_error(const PhaseGrid& grid, const Eigen::MatrixXcd& values) {
  require_match(grid, values, "reality_error");
  const int m = grid.points;
  double err = 0.0;
  for (int i = 1; i < m; ++i)
    for (int j = 1; j < m; ++j) err = std::max(err, std::abs(values(m - i, m - j) - std::conj(values(i, j))));
  return err;
}

MeanValue mean(const ObservableFunction& f, const nct::CharFunction& chi) {
  require_match(f.grid, f.values, "mean");
  require_match(chi.grid, chi.values, "mean");
  if (!(f.grid == chi.grid)) throw DimensionError("mean: observable and state live on different grids");
  if (f.hbar != chi.hbar) throw DomainError("mean: observable and state use different hbar");
  const double h = f.grid.spacing();
  const cplx total = (f.values.array() * chi.values.array()).sum() * (h * h / (kTwoPi * f.hbar));
  return {total.real(), std::abs(total.imag())};
}

Eigen::MatrixXcd to_operator(const ObservableFunction& f, int dim) {
  require_match(f.grid, f.values, "to_operator");
  if (dim < 1) throw DomainError("to_operator: Fock dimension must be positive");
  if (f.grid.axes != Axes::eta_xi) throw DomainError("to_operator: expected an (eta, xi) grid");
  const double ratio = nct::boundary_ratio(f.values);
  if (ratio > nct::kInverseDecayTolerance) {
    std::ostringstream msg;
    msg << "to_operator: observable function does not decay at the grid boundary (ratio " << ratio << ")";
    throw DecayError(msg.str());
  }
  const int m = f.grid.points;
  const double h = f.grid.spacing();
  const double weight = h * h / (kTwoPi * f.hbar);
  std::vector<Eigen::MatrixXcd> rows(m, Eigen::MatrixXcd::Zero(dim, dim));
#pragma omp parallel
  {
    repr::DisplacementTable table(dim);
#pragma omp for schedule(static)
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const cplx c = f.values(i, j);
        if (c == 0.0) continue;
        table.fill(repr::displacement_amplitude(f.hbar, f.grid.coord(i), f.grid.coord(j)));
        table.accumulate(weight * c, rows[i]);
      }
    }
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& r : rows) out += r;
  return out;
}

ObservableFunction from_operator(const Eigen::MatrixXcd& a, double hbar, const PhaseGrid& grid) {
  if (a.rows() != a.cols() || a.rows() < 1) throw DimensionError("from_operator: operator must be square");
  if (!(hbar > 0.0)) throw DomainError("from_operator: hbar must be positive");
  if (grid.axes != Axes::eta_xi) throw DomainError("from_operator: expected an (eta, xi) grid");
  ObservableFunction f;
  f.hbar = hbar;
  f.grid = grid;
  const int m = grid.points;
  f.values.resize(m, m);
#pragma omp parallel
  {
    repr::DisplacementTable table(static_cast<int>(a.rows()));
#pragma omp for schedule(static)
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        table.fill(repr::displacement_amplitude(hbar, grid.coord(i), grid.coord(j)));
        f.values(i, j) = table.trace_with_adjoint(a);
      }
    }
  }
  return f;
}

Moments quadrature_moments(const nct::CharFunction& chi, int order) {
  return moments_from(chi.grid, chi.values, chi.hbar, order);
}

Moments classical_moments(const cl::ClassicalChar& cc, int order) {
  return moments_from(cc.grid, cc.values, 1.0, order);
}

Moments stencil_moments(const nct::CharFunction& chi) {
  require_match(chi.grid, chi.values, "stencil_moments");
  const int o = chi.grid.origin();
  if (o < 4) throw DomainError("stencil_moments: grid too small for the stencil");
  const double h = chi.grid.spacing();
  const StencilDerivs fine = stencil_at(chi.values, o, 1, h);
  const StencilDerivs coarse = stencil_at(chi.values, o, 2, h);
  auto rich = [](cplx f, cplx c) { return (16.0 * f - c) / 15.0; };
  const double hb = chi.hbar;
  Moments m;
  const cplx q = cplx(0.0, -hb) * rich(fine.eta, coarse.eta);
  const cplx p = cplx(0.0, hb) * rich(fine.xi, coarse.xi);
  const cplx q2 = -hb * hb * rich(fine.eta2, coarse.eta2);
  const cplx p2 = -hb * hb * rich(fine.xi2, coarse.xi2);
  const cplx qp = hb * hb * rich(fine.mixed, coarse.mixed);
  m.mean_q = q.real();
  m.mean_p = p.real();
  m.q2 = q2.real();
  m.p2 = p2.real();
  m.qp_sym = qp.real();
  m.var_q = m.q2 - m.mean_q * m.mean_q;
  m.var_p = m.p2 - m.mean_p * m.mean_p;
  m.imag_residue = std::max({std::abs(q.imag()), std::abs(p.imag()), std::abs(q2.imag()), std::abs(p2.imag()),
                             std::abs(qp.imag())});
  m.boundary_ratio = nct::boundary_ratio(chi.values);
  return m;
}

PhaseFunction classical_observable(const cl::ClassicalChar& f, const PhaseGrid& out_grid) {
  require_match(f.grid, f.values, "classical_observable");
  const double peak = f.values.cwiseAbs().maxCoeff();
  const double err = reality_error(f.grid, f.values);
  if (err > kRealityTolerance * std::max(1.0, peak)) {
    std::ostringstream msg;
    msg << "classical_observable: F(-z) differs from conj F(z) by " << err;
    throw DomainError(msg.str());
  }
  PhaseFunction out;
  out.grid = out_grid.with_axes(Axes::q_p);
  const Eigen::MatrixXcd raw = nct::symplectic_fourier(f.grid, f.values, out.grid, 1.0);
  out.values = raw.real();
  const double top = out.values.cwiseAbs().maxCoeff();
  const double imag = raw.imag().cwiseAbs().maxCoeff();
  out.imag_residue = top > 0.0 ? imag / top : imag;
  return out;
}

double classical_mean(const PhaseFunction& observable, const cl::ClassicalDensity& density) {
  if (!(observable.grid == density.grid)) throw DimensionError("classical_mean: grids differ");
  const double d = density.grid.spacing();
  return (observable.values.array() * density.values.array()).sum() * d * d;
}

double classical_mean_direct(const cl::ClassicalChar& f, const cl::ClassicalChar& cc) {
  require_match(f.grid, f.values, "classical_mean_direct");
  require_match(cc.grid, cc.values, "classical_mean_direct");
  if (!(f.grid == cc.grid)) throw DimensionError("classical_mean_direct: grids differ");
  const double h = f.grid.spacing();
  const cplx total = (f.values.array() * cc.values.array().conjugate()).sum() * (h * h / (kTwoPi * kTwoPi));
  return total.real();
}

}  // namespace weylchar::obs
