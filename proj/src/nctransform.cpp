#include "weylchar/nctransform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "weylchar/error.hpp"
#include "weylchar/repr.hpp"
#include "weylchar/spectral.hpp"

namespace weylchar::nct {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_eta_xi(const PhaseGrid& grid, const char* where) {
  if (grid.axes != Axes::eta_xi) throw DomainError(std::string(where) + ": expected an (eta, xi) grid");
}

void require_shape(const PhaseGrid& grid, const Eigen::MatrixXcd& values, const char* where) {
  if (values.rows() != grid.points || values.cols() != grid.points) {
    throw DimensionError(std::string(where) + ": values do not match the grid");
  }
}

WignerFunction finish_wigner(double hbar, const PhaseGrid& grid, const Eigen::MatrixXcd& raw) {
  WignerFunction w;
  w.hbar = hbar;
  w.grid = grid;
  w.values = raw.real();
  const double peak = w.values.cwiseAbs().maxCoeff();
  const double imag = raw.imag().cwiseAbs().maxCoeff();
  w.imag_residue = peak > 0.0 ? imag / peak : imag;
  if (w.imag_residue > kWignerImagTolerance) {
    std::ostringstream msg;
    msg << "wigner: imaginary residue " << w.imag_residue << " exceeds " << kWignerImagTolerance
        << " (aliasing or a characteristic function without Hermitian symmetry)";
    throw ToleranceError(msg.str());
  }
  const double d = grid.spacing();
  w.mass = w.values.sum() * d * d;
  return w;
}

}  // namespace

double phase_radius(const states::DensityMatrix& rho) {
  double n = 0.0;
  for (int k = 0; k < rho.dim(); ++k) n += k * rho.data()(k, k).real();
  return std::sqrt(rho.hbar() * (2.0 * n + 1.0));
}

PhaseGrid default_grid(double hbar, double radius, int points) {
  if (!(hbar > 0.0) || !(radius >= 0.0)) throw DomainError("default_grid: hbar must be positive and radius nonnegative");
  const double root = std::sqrt(hbar);
  const double extent = std::max(8.0 * root, 4.0 * radius);
  while (std::numbers::pi * hbar * points / (2.0 * extent) < radius + 4.0 * root) points *= 2;
  return PhaseGrid::make(extent, points);
}

PhaseGrid fit_grid(const states::DensityMatrix& rho, int points) {
  PhaseGrid grid = default_grid(rho.hbar(), phase_radius(rho), points);
  for (int k = 0; k < 16; ++k) {
    if (boundary_ratio(forward(rho, grid).values) <= kInverseDecayTolerance) return grid;
    // The polynomial prefactor of low Fock levels outlasts the Gaussian envelope.
    const int wider = 2 * static_cast<int>(std::ceil(0.625 * grid.points));
    grid = PhaseGrid::make(grid.spacing() * wider / 2.0, wider);
  }
  throw DecayError("fit_grid: characteristic function does not decay within 16 widenings");
}

double boundary_ratio(const Eigen::MatrixXcd& values) {
  const Eigen::Index m = values.rows();
  const double peak = values.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 0.0;
  double edge = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    edge = std::max({edge, std::abs(values(0, k)), std::abs(values(m - 1, k)), std::abs(values(k, 0)),
                     std::abs(values(k, m - 1))});
  }
  return edge / peak;
}

CharInvariants check_invariants(const CharFunction& chi) {
  require_shape(chi.grid, chi.values, "check_invariants");
  CharInvariants inv;
  inv.origin_error = std::abs(chi.at_origin() - 1.0);
  inv.max_modulus = chi.values.cwiseAbs().maxCoeff();
  const int m = chi.grid.points;
  for (int i = 1; i < m; ++i) {
    for (int j = 1; j < m; ++j) {
      const double e = std::abs(chi.values(m - i, m - j) - std::conj(chi.values(i, j)));
      inv.symmetry_error = std::max(inv.symmetry_error, e);
    }
  }
  return inv;
}

cplx char_value(const states::DensityMatrix& rho, double eta, double xi) {
  repr::DisplacementTable table(rho.dim());
  table.fill(repr::displacement_amplitude(rho.hbar(), eta, xi));
  return table.trace_with(rho.data());
}

CharFunction forward(const states::DensityMatrix& rho, const PhaseGrid& grid) {
  require_eta_xi(grid, "forward");
  CharFunction chi;
  chi.hbar = rho.hbar();
  chi.grid = grid;
  const int m = grid.points;
  chi.values.resize(m, m);
  const Eigen::MatrixXcd& data = rho.data();
#pragma omp parallel
  {
    repr::DisplacementTable table(rho.dim());
#pragma omp for schedule(static)
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        table.fill(repr::displacement_amplitude(chi.hbar, grid.coord(i), grid.coord(j)));
        chi.values(i, j) = table.trace_with(data);
      }
    }
  }
  const double peak = chi.values.cwiseAbs().maxCoeff();
  if (peak > 1.0 + 1e-6) {
    std::ostringstream msg;
    msg << "forward: |chi| reached " << peak << " > 1; the Fock truncation of " << rho.dim()
        << " levels is inadequate for this grid";
    throw TruncationError(msg.str());
  }
  return chi;
}

Eigen::MatrixXcd reconstruction_integral(const CharFunction& chi, int dim) {
  require_eta_xi(chi.grid, "inverse");
  require_shape(chi.grid, chi.values, "inverse");
  if (dim < 1) throw DomainError("inverse: Fock dimension must be positive");
  const int m = chi.grid.points;
  const double h = chi.grid.spacing();
  const double weight = h * h / (kTwoPi * chi.hbar);
  // Row partial sums are kept separately and added in a fixed order so the
  // result does not depend on the thread count.
  std::vector<Eigen::MatrixXcd> rows(m, Eigen::MatrixXcd::Zero(dim, dim));
#pragma omp parallel
  {
    repr::DisplacementTable table(dim);
#pragma omp for schedule(static)
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const cplx c = chi.values(i, j);
        if (c == 0.0) continue;
        table.fill(repr::displacement_amplitude(chi.hbar, chi.grid.coord(i), chi.grid.coord(j)));
        table.accumulate_adjoint(weight * c, rows[i]);
      }
    }
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& r : rows) out += r;
  return out;
}

InverseResult inverse(const CharFunction& chi, int dim) {
  InverseReport report;
  require_shape(chi.grid, chi.values, "inverse");
  report.boundary_ratio = boundary_ratio(chi.values);
  if (report.boundary_ratio > kInverseDecayTolerance) {
    std::ostringstream msg;
    msg << "inverse: characteristic function does not decay at the grid boundary (ratio "
        << report.boundary_ratio << " > " << kInverseDecayTolerance << "); enlarge the grid extent";
    throw DecayError(msg.str());
  }
  const Eigen::MatrixXcd raw = reconstruction_integral(chi, dim);
  report.hermiticity_residual = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
  Eigen::MatrixXcd herm = 0.5 * (raw + raw.adjoint());
  report.trace_before = herm.trace().real();
  if (std::abs(report.trace_before - 1.0) > kInverseTraceTolerance) {
    std::ostringstream msg;
    msg << "inverse: reconstructed trace " << report.trace_before
        << " differs from 1; the grid or the Fock truncation does not capture the state";
    throw ToleranceError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm);
  Eigen::VectorXd lambda = eig.eigenvalues();
  report.min_eigenvalue = lambda.minCoeff();
  if (report.min_eigenvalue < -kInverseNegativityTolerance) {
    std::ostringstream msg;
    msg << "inverse: reconstruction has eigenvalue " << report.min_eigenvalue << " below -"
        << kInverseNegativityTolerance;
    throw ToleranceError(msg.str());
  }
  // Eigenvalues within roundoff of zero are left alone.
  constexpr double floor = -1e-12;
  if (report.min_eigenvalue < floor) {
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
      if (lambda[k] < 0.0) {
        report.clipped_weight -= lambda[k];
        lambda[k] = 0.0;
      }
    }
    report.repaired = true;
    herm = eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().adjoint();
  }
  // Residual trace error within tolerance is reported through trace_before.
  herm /= herm.trace().real();
  herm = 0.5 * (herm + herm.adjoint()).eval();
  return {states::DensityMatrix::make(chi.hbar, herm), report};
}

Eigen::MatrixXcd symplectic_fourier(const PhaseGrid& in, const Eigen::MatrixXcd& values,
                                    const PhaseGrid& out, double hbar) {
  require_shape(in, values, "symplectic_fourier");
  if (!(hbar > 0.0)) throw DomainError("symplectic_fourier: hbar must be positive");
  const int mi = in.points;
  const int mo = out.points;
  Eigen::MatrixXcd e1(mo, mi), e2(mi, mo);
  for (int a = 0; a < mo; ++a) {
    for (int j = 0; j < mi; ++j) {
      e1(a, j) = std::polar(1.0, -in.coord(j) * out.coord(a) / hbar);
      e2(j, a) = std::polar(1.0, in.coord(j) * out.coord(a) / hbar);
    }
  }
  const double h = in.spacing();
  const double scale = h * h / ((kTwoPi * hbar) * (kTwoPi * hbar));
  return scale * (e1 * values * e2);
}

WignerFunction wigner(const CharFunction& chi, const PhaseGrid& out_grid) {
  require_eta_xi(chi.grid, "wigner");
  const PhaseGrid grid = out_grid.with_axes(Axes::q_p);
  return finish_wigner(chi.hbar, grid, symplectic_fourier(chi.grid, chi.values, grid, chi.hbar));
}

WignerFunction wigner_fft(const CharFunction& chi) {
  require_eta_xi(chi.grid, "wigner_fft");
  require_shape(chi.grid, chi.values, "wigner_fft");
  const int m = chi.grid.points;
  Eigen::MatrixXcd work(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) work(j, k) = ((j + k) % 2 == 0 ? 1.0 : -1.0) * chi.values(j, k);
  spectral::dft_along(work, 0, -1);
  spectral::dft_along(work, 1, +1);
  const double h = chi.grid.spacing();
  const double scale = h * h / ((kTwoPi * chi.hbar) * (kTwoPi * chi.hbar));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) work(a, b) *= ((a + b) % 2 == 0 ? scale : -scale);
  return finish_wigner(chi.hbar, reciprocal_grid(chi.grid, chi.hbar), work);
}

}  // namespace weylchar::nct
