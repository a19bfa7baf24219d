#pragma once

#include <complex>

#include <Eigen/Dense>

#include "weylchar/climit.hpp"
#include "weylchar/nctransform.hpp"

namespace weylchar::obs {

using cplx = std::complex<double>;

/// Samples of f(eta, xi) for the observable F(s, eta, xi) = exp(+i hbar s) f(eta, xi).
struct ObservableFunction {
  double hbar = 1.0;
  PhaseGrid grid;
  Eigen::MatrixXcd values;
};

/// max |f(-z) - conj f(z)| over mirror node pairs.
double reality_error(const PhaseGrid& grid, const Eigen::MatrixXcd& values);

inline constexpr double kRealityTolerance = 1e-8;

struct MeanValue {
  double value = 0.0;
  double imag_residue = 0.0;
};

/// <F> = (1/(2 pi hbar)) sum h^2 chi f over the common grid.
MeanValue mean(const ObservableFunction& f, const nct::CharFunction& chi);

/// A_F = (1/(2 pi hbar)) sum h^2 f(eta, xi) D(alpha) in `dim` Fock levels.
/// Throws DecayError if f does not decay to 1e-6 of its peak at the boundary.
Eigen::MatrixXcd to_operator(const ObservableFunction& f, int dim);

/// f_A(eta, xi) = tr[A D(alpha)^dagger].
ObservableFunction from_operator(const Eigen::MatrixXcd& a, double hbar, const PhaseGrid& grid);

struct Moments {
  double mean_q = 0.0;
  double mean_p = 0.0;
  double q2 = 0.0;
  double p2 = 0.0;
  double qp_sym = 0.0;  ///< <(qp + pq)/2>
  double var_q = 0.0;
  double var_p = 0.0;
  double imag_residue = 0.0;  ///< largest imaginary part discarded from the raw derivatives
  double boundary_ratio = 0.0;
};

/// Phase-space moments from spectral derivatives of chi at the origin:
///   <q> = -i hbar d_eta chi,  <p> = i hbar d_xi chi,
///   <q^2> = -hbar^2 d_eta^2 chi,  <p^2> = -hbar^2 d_xi^2 chi,  <(qp+pq)/2> = hbar^2 d_eta d_xi chi.
/// order = 1 fills only the first moments.
Moments quadrature_moments(const nct::CharFunction& chi, int order = 2);
/// Same for a classical characteristic function (hbar = 1 in the formulas).
Moments classical_moments(const cl::ClassicalChar& cc, int order = 2);

/// Diagnostic: second moments from 5-point central differences at spacings h
/// and 2h combined by Richardson extrapolation.
Moments stencil_moments(const nct::CharFunction& chi);

/// Real function on a (q, p) grid.
struct PhaseFunction {
  PhaseGrid grid;
  Eigen::MatrixXd values;
  double imag_residue = 0.0;  ///< discarded imaginary part relative to the peak
};

/// Real A_F(q, p) = int d eta d xi / (2 pi)^2 F(eta, xi) exp(-i(eta q - xi p)) on out_grid.
/// Throws DomainError if F violates F(-z) = conj F(z).
PhaseFunction classical_observable(const cl::ClassicalChar& f, const PhaseGrid& out_grid);

/// int dmu A_F by quadrature of the phase-space grids.
double classical_mean(const PhaseFunction& observable, const cl::ClassicalDensity& density);
/// The same average computed directly on the (eta, xi) grid:
/// (1/(2 pi)^2) sum h^2 F(eta, xi) conj(mu^(eta, xi)).
double classical_mean_direct(const cl::ClassicalChar& f, const cl::ClassicalChar& cc);

}  // namespace weylchar::obs
