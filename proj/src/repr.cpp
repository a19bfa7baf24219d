#include "weylchar/repr.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "weylchar/error.hpp"

namespace weylchar::repr {

namespace {

void require_hbar(double hbar, const char* where) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw DomainError(std::string(where) + ": hbar must be positive and finite");
  }
}

void require_single_mode(const hw::GroupElement& g) {
  if (g.n() != 1) throw DimensionError("rep_matrix: only single-mode (n = 1) elements are supported");
}

inline double parity(int k) { return (k & 1) ? -1.0 : 1.0; }

}  // namespace

Eigen::MatrixXcd lowering(int dim) {
  if (dim < 1) throw DomainError("lowering: dim must be positive");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = 1; m < dim; ++m) a(m - 1, m) = std::sqrt(static_cast<double>(m));
  return a;
}

TruncatedRep build_generators(double hbar, int dim) {
  require_hbar(hbar, "build_generators");
  if (dim < 2) throw DomainError("build_generators: dim must be at least 2");
  const Eigen::MatrixXcd a = lowering(dim);
  const Eigen::MatrixXcd ad = a.adjoint();
  const double c = std::sqrt(hbar / 2.0);
  TruncatedRep rep;
  rep.hbar = hbar;
  rep.dim = dim;
  rep.qhat = c * (a + ad);
  rep.phat = cplx(0.0, c) * (ad - a);
  return rep;
}

cplx displacement_amplitude(double hbar, double eta, double xi) {
  require_hbar(hbar, "displacement_amplitude");
  return cplx(xi, eta) / std::sqrt(2.0 * hbar);
}

DisplacementTable::DisplacementTable(int dim) : dim_(dim), d_(dim, dim) {
  if (dim < 1) throw DomainError("DisplacementTable: dim must be positive");
  d_.setZero();
}

void DisplacementTable::fill(cplx alpha) {
  const double r2 = std::norm(alpha);
  // exp(-r2/2) underflows near r2 = 1490; past that the block is negligible
  // only while the truncation sits well below the coherent peak at m ~ r2.
  if (r2 > 1200.0 && dim_ > r2 - 40.0 * std::sqrt(r2)) {
    throw DomainError("DisplacementTable: |alpha|^2 = " + std::to_string(r2) +
                      " too large for double-precision matrix elements");
  }
  // Along the k-th subdiagonal D(n+k, n) = e^{ik arg alpha} g_n with
  // g_n = sqrt(n!/(n+k)!) |alpha|^k e^{-r2/2} L_n^(k)(r2). The normalized
  // three-term Laguerre recurrence is stable; the ladder form is not.
  const double r = std::sqrt(r2);
  const double log_r = r > 0.0 ? std::log(r) : 0.0;
  const cplx unit = r > 0.0 ? alpha / r : cplx(1.0, 0.0);
  cplx phase = 1.0;
  for (int k = 0; k < dim_; ++k) {
    double g0;
    if (k == 0) {
      g0 = std::exp(-0.5 * r2);
    } else if (r > 0.0) {
      g0 = std::exp(k * log_r - 0.5 * r2 - 0.5 * std::lgamma(k + 1.0));
    } else {
      g0 = 0.0;
    }
    double prev = 0.0;
    double cur = g0;
    d_(k, 0) = phase * cur;
    for (int n = 0; n + 1 + k < dim_; ++n) {
      const double next = ((2.0 * n + 1.0 + k - r2) * cur - std::sqrt(double(n) * (n + k)) * prev) /
                          std::sqrt((n + 1.0) * (n + 1.0 + k));
      prev = cur;
      cur = next;
      d_(n + 1 + k, n + 1) = phase * cur;
    }
    phase *= unit;
  }
}

cplx DisplacementTable::trace_with(const Eigen::MatrixXcd& rho) const {
  cplx acc = 0.0;
  for (int c = 0; c < dim_; ++c) {
    acc += rho(c, c) * d_(c, c);
    for (int r = c + 1; r < dim_; ++r) {
      const cplx d = d_(r, c);
      acc += rho(c, r) * d + parity(r - c) * rho(r, c) * std::conj(d);
    }
  }
  return acc;
}

cplx DisplacementTable::trace_with_adjoint(const Eigen::MatrixXcd& a) const {
  cplx acc = 0.0;
  for (int c = 0; c < dim_; ++c) {
    acc += a(c, c) * std::conj(d_(c, c));
    for (int r = c + 1; r < dim_; ++r) {
      const cplx d = d_(r, c);
      acc += a(r, c) * std::conj(d) + parity(r - c) * a(c, r) * d;
    }
  }
  return acc;
}

void DisplacementTable::accumulate(cplx weight, Eigen::MatrixXcd& out) const {
  for (int c = 0; c < dim_; ++c) {
    out(c, c) += weight * d_(c, c);
    for (int r = c + 1; r < dim_; ++r) {
      const cplx d = d_(r, c);
      out(r, c) += weight * d;
      out(c, r) += weight * parity(r - c) * std::conj(d);
    }
  }
}

void DisplacementTable::accumulate_adjoint(cplx weight, Eigen::MatrixXcd& out) const {
  for (int c = 0; c < dim_; ++c) {
    out(c, c) += weight * std::conj(d_(c, c));
    for (int r = c + 1; r < dim_; ++r) {
      const cplx d = d_(r, c);
      out(c, r) += weight * std::conj(d);
      out(r, c) += weight * parity(r - c) * d;
    }
  }
}

Eigen::MatrixXcd displacement_closed_form(cplx alpha, int dim) {
  DisplacementTable table(dim);
  table.fill(alpha);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  table.accumulate(1.0, out);
  return out;
}

Eigen::MatrixXcd displacement_exponential(cplx alpha, int dim, int padding) {
  if (dim < 1 || padding < 0) throw DomainError("displacement_exponential: invalid sizes");
  const int big = dim + padding;
  const Eigen::MatrixXcd a = lowering(big);
  const Eigen::MatrixXcd gen = alpha * a.adjoint() - std::conj(alpha) * a;
  const Eigen::MatrixXcd full = gen.exp();
  return full.topLeftCorner(dim, dim);
}

Eigen::MatrixXcd rep_matrix(const TruncatedRep& rep, const hw::GroupElement& g, RepPath path,
                            int padding) {
  require_single_mode(g);
  const cplx alpha = displacement_amplitude(rep.hbar, g.eta[0], g.xi[0]);
  const cplx phase = std::polar(1.0, -rep.hbar * g.s);
  if (path == RepPath::closed_form) return phase * displacement_closed_form(alpha, rep.dim);
  return phase * displacement_exponential(alpha, rep.dim, padding);
}

Eigen::MatrixXcd rep_matrix_homomorphic(const TruncatedRep& rep, const hw::GroupElement& g,
                                        RepPath path, int padding) {
  require_single_mode(g);
  const auto scaled = hw::GroupElement::single(g.s, rep.hbar * g.eta[0], rep.hbar * g.xi[0]);
  return rep_matrix(rep, scaled, path, padding);
}

cplx rep_classical(std::span<const double> q, std::span<const double> p, const hw::GroupElement& g) {
  if (q.size() != p.size() || q.size() != g.eta.size()) {
    throw DimensionError("rep_classical: dimension mismatch");
  }
  double arg = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) arg += g.eta[j] * q[j] - g.xi[j] * p[j];
  return std::polar(1.0, arg);
}

}  // namespace weylchar::repr
