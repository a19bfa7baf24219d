#pragma once

#include <complex>

#include <Eigen/Dense>

#include "weylchar/phase_grid.hpp"
#include "weylchar/states.hpp"

namespace weylchar::nct {

using cplx = std::complex<double>;

/// Samples of chi(eta, xi) on an (eta, xi) grid, representing the physical
/// state phi(s, eta, xi) = exp(-i hbar s) chi(eta, xi). The central phase is
/// kept analytic and never sampled.
struct CharFunction {
  double hbar = 1.0;
  PhaseGrid grid;
  Eigen::MatrixXcd values;  ///< values(i, j) = chi(eta_i, xi_j)

  cplx at_origin() const { return values(grid.origin(), grid.origin()); }
};

struct CharInvariants {
  double origin_error = 0.0;    ///< |chi(0,0) - 1|
  double symmetry_error = 0.0;  ///< max |chi(-z) - conj chi(z)| over mirror nodes
  double max_modulus = 0.0;     ///< max |chi|
};

CharInvariants check_invariants(const CharFunction& chi);

/// Largest boundary modulus relative to the largest modulus of the grid data.
double boundary_ratio(const Eigen::MatrixXcd& values);

/// sqrt(<q^2 + p^2>) = sqrt(hbar (2 <n> + 1)).
double phase_radius(const states::DensityMatrix& rho);

/// Default (eta, xi) grid for a state of phase-space radius R: extent
/// L = max(8 sqrt(hbar), 4R) and `points` nodes, doubled until the reciprocal
/// extent pi hbar M / (2L) reaches R + 4 sqrt(hbar) (see docs/numerics.md).
PhaseGrid default_grid(double hbar, double radius, int points = 128);

/// default_grid for rho, widened by 25% steps at fixed spacing until forward(rho)
/// meets the 1e-6 boundary decay that inverse requires (at most 16 widenings).
PhaseGrid fit_grid(const states::DensityMatrix& rho, int points = 128);

/// chi(eta, xi) = tr[rho D(alpha)], alpha = (xi + i eta)/sqrt(2 hbar).
cplx char_value(const states::DensityMatrix& rho, double eta, double xi);

/// Non-commutative Fourier transform: samples chi = tr[rho T(0, eta, xi)] on
/// the grid. Throws TruncationError if some |chi| exceeds 1 + 1e-6.
CharFunction forward(const states::DensityMatrix& rho, const PhaseGrid& grid);

/// Raw reconstruction integral (1/(2 pi hbar)) sum h^2 chi(eta, xi) D(alpha)^dagger
/// in `dim` Fock levels. The s integral over [0, 2pi/hbar] is done analytically.
Eigen::MatrixXcd reconstruction_integral(const CharFunction& chi, int dim);

struct InverseReport {
  double boundary_ratio = 0.0;
  double hermiticity_residual = 0.0;  ///< max |R - R^dagger| before symmetrization
  double trace_before = 0.0;          ///< real trace of the raw reconstruction
  double min_eigenvalue = 0.0;        ///< before repair
  double clipped_weight = 0.0;        ///< total negative weight removed
  bool repaired = false;
};

struct InverseResult {
  states::DensityMatrix rho;
  InverseReport report;
};

inline constexpr double kInverseDecayTolerance = 1e-6;
inline constexpr double kInverseNegativityTolerance = 1e-6;
inline constexpr double kInverseTraceTolerance = 1e-6;

/// Inverse transform with the repair policy: eigenvalues in [-1e-6, 0) are
/// clipped and the trace renormalized (reported), anything more negative is a
/// ToleranceError; boundary decay above 1e-6 of the peak is a DecayError; a raw
/// trace off by more than 1e-6 is reported as a ToleranceError instead of
/// being silently rescaled.
InverseResult inverse(const CharFunction& chi, int dim);

/// Quasi-probability on a (q, p) grid.
struct WignerFunction {
  double hbar = 1.0;
  PhaseGrid grid;
  Eigen::MatrixXd values;     ///< values(a, b) = W(q_a, p_b)
  double imag_residue = 0.0;  ///< discarded imaginary part, relative to max |W|
  double mass = 0.0;          ///< trapezoidal integral over the output grid
};

inline constexpr double kWignerImagTolerance = 1e-8;

/// W(q, p) = (2 pi hbar)^-2 sum h^2 exp(-i(eta q - xi p)/hbar) chi(eta, xi),
/// evaluated exactly on any output grid by separable DFT matrices.
WignerFunction wigner(const CharFunction& chi, const PhaseGrid& out_grid);

/// Same transform through FFTW on reciprocal_grid(chi.grid, hbar).
///
/// With eta_j = -L + j h and q_a = -Q + a dq (Q = pi hbar M/(2L), dq = pi hbar/L):
///   W_ab = (-1)^(a+b) h^2/(2 pi hbar)^2 sum_jk (-1)^(j+k) chi_jk e^{-2 pi i ja/M} e^{+2 pi i kb/M}.
WignerFunction wigner_fft(const CharFunction& chi);

/// out(q_a, p_b) = h^2/(2 pi hbar)^2 sum_jk values_jk exp(-i(eta_j q_a - xi_k p_b)/hbar).
/// With hbar = 1 this is the classical Bochner inversion kernel.
Eigen::MatrixXcd symplectic_fourier(const PhaseGrid& in, const Eigen::MatrixXcd& values,
                                    const PhaseGrid& out, double hbar);

}  // namespace weylchar::nct
