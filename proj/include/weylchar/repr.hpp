#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "weylchar/hw_group.hpp"

namespace weylchar::repr {

using cplx = std::complex<double>;

/// Fock-basis realization of the canonical pair at a fixed hbar.
///
/// qhat = sqrt(hbar/2) (a + a^dagger), phat = i sqrt(hbar/2) (a^dagger - a) with
/// a|m> = sqrt(m)|m-1>. The commutator equals i*hbar*I except in the last
/// diagonal entry, which the truncation corrupts.
struct TruncatedRep {
  double hbar = 1.0;
  int dim = 0;
  Eigen::MatrixXcd qhat;
  Eigen::MatrixXcd phat;
};

TruncatedRep build_generators(double hbar, int dim);

/// Lowering operator a in the first `dim` Fock states.
Eigen::MatrixXcd lowering(int dim);

/// alpha = (xi + i eta) / sqrt(2 hbar): exp[(i/hbar)(eta q - xi p)] = D(alpha).
cplx displacement_amplitude(double hbar, double eta, double xi);

enum class RepPath {
  closed_form,  ///< exact matrix elements <m|D(alpha)|n> of the infinite operator
  exponential,  ///< scaling-and-squaring exponential of the truncated generator
};

/// Exact Fock matrix elements of D(alpha) for 0 <= m, n < dim.
///
/// Each subdiagonal k is e^{ik arg alpha} g_n with g_n = sqrt(n!/(n+k)!) |alpha|^k
/// e^{-|alpha|^2/2} L_n^{(k)}(|alpha|^2), run through the three-term Laguerre
/// recurrence in normalized form (the plain ladder recursion loses all digits
/// once |alpha|^2 is a few tens). The upper triangle follows from
/// D_{n,m} = (-1)^{m-n} conj(D_{m,n}).
Eigen::MatrixXcd displacement_closed_form(cplx alpha, int dim);

/// exp(alpha a^dagger - conj(alpha) a) computed in `dim + padding` states and
/// cropped to `dim`. With padding = 0 the result is exactly unitary; large
/// padding pushes the truncation error below roundoff.
Eigen::MatrixXcd displacement_exponential(cplx alpha, int dim, int padding = 0);

/// T^hbar(g) = exp(-i hbar s) D(alpha(eta, xi)). Single mode only.
Eigen::MatrixXcd rep_matrix(const TruncatedRep& rep, const hw::GroupElement& g,
                            RepPath path = RepPath::closed_form, int padding = 0);

/// T^hbar(s, hbar*eta, hbar*xi): the parameterization that is an exact
/// homomorphism of hw::multiply for every hbar (coincides with rep_matrix at hbar = 1).
Eigen::MatrixXcd rep_matrix_homomorphic(const TruncatedRep& rep, const hw::GroupElement& g,
                                        RepPath path = RepPath::closed_form, int padding = 0);

/// One-dimensional representation exp(i (eta.q - xi.p)); independent of g.s.
cplx rep_classical(std::span<const double> q, std::span<const double> p, const hw::GroupElement& g);

/// Reusable workspace for evaluating D(alpha) many times at a fixed truncation.
///
/// Only the lower triangle (m >= n) is filled by `fill`; `trace_with` contracts
/// against a full matrix using the conjugation symmetry for the upper half.
class DisplacementTable {
 public:
  explicit DisplacementTable(int dim);

  int dim() const { return dim_; }

  /// Fill the lower triangle of D(alpha).
  void fill(cplx alpha);
  const Eigen::MatrixXcd& lower() const { return d_; }

  /// tr[rho D(alpha)] for the last filled alpha.
  cplx trace_with(const Eigen::MatrixXcd& rho) const;
  /// tr[A D(alpha)^dagger] for the last filled alpha.
  cplx trace_with_adjoint(const Eigen::MatrixXcd& a) const;
  /// out += weight * D(alpha) (full matrix).
  void accumulate(cplx weight, Eigen::MatrixXcd& out) const;
  /// out += weight * D(alpha)^dagger (full matrix).
  void accumulate_adjoint(cplx weight, Eigen::MatrixXcd& out) const;

 private:
  int dim_;
  Eigen::MatrixXcd d_;
};

}  // namespace weylchar::repr
