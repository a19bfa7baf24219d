#include "weylchar/states.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "weylchar/error.hpp"

namespace weylchar::states {

namespace {

using cplx = std::complex<double>;

constexpr double kHermitianTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kEigenTol = 1e-10;
constexpr double kWeightTol = 1e-12;

void require_hbar(double hbar, const char* where) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw DomainError(std::string(where) + ": hbar must be positive and finite");
  }
}

Eigen::VectorXcd coherent_vector(double q, double p, int dim, double hbar) {
  const cplx beta = cplx(q, p) / std::sqrt(2.0 * hbar);
  const double mean = std::norm(beta);
  const double tail = coherent_tail_mass(mean, dim);
  if (tail > kCoherentTailTolerance) {
    throw TruncationError("coherent_state: tail mass " + std::to_string(tail) + " beyond " +
                          std::to_string(dim) + " levels exceeds tolerance (|alpha|^2 = " +
                          std::to_string(mean) + ")");
  }
  Eigen::VectorXcd v(dim);
  v(0) = std::exp(-0.5 * mean);
  for (int n = 1; n < dim; ++n) v(n) = v(n - 1) * beta / std::sqrt(static_cast<double>(n));
  v /= v.norm();
  return v;
}

}  // namespace

DensityMatrix DensityMatrix::make(double hbar, Eigen::MatrixXcd data) {
  require_hbar(hbar, "DensityMatrix");
  if (data.rows() != data.cols() || data.rows() < 1) {
    throw DimensionError("DensityMatrix: data must be a nonempty square matrix");
  }
  const double herm = (data - data.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    throw ToleranceError("DensityMatrix: not Hermitian (residual " + std::to_string(herm) + ")");
  }
  const cplx tr = data.trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw ToleranceError("DensityMatrix: trace " + std::to_string(tr.real()) + " differs from 1");
  }
  const Eigen::MatrixXcd sym = 0.5 * (data + data.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kEigenTol) {
    throw ToleranceError("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
  }
  return DensityMatrix(hbar, sym);
}

DensityMatrix fock_state(int m, int dim, double hbar) {
  if (dim < 1 || m < 0 || m >= dim) {
    throw DomainError("fock_state: need 0 <= m < dim (m = " + std::to_string(m) +
                      ", dim = " + std::to_string(dim) + ")");
  }
  Eigen::MatrixXcd data = Eigen::MatrixXcd::Zero(dim, dim);
  data(m, m) = 1.0;
  return DensityMatrix::make(hbar, std::move(data));
}

double coherent_tail_mass(double mean_photons, int dim) {
  if (dim < 1) throw DomainError("coherent_tail_mass: dim must be positive");
  if (mean_photons < 0.0) throw DomainError("coherent_tail_mass: negative mean");
  if (mean_photons == 0.0) return 0.0;
  // First omitted term, then the remaining Poisson tail by ratio recursion.
  double term = std::exp(-mean_photons + dim * std::log(mean_photons) - std::lgamma(dim + 1.0));
  double sum = 0.0;
  for (int n = dim; n < dim + 100000; ++n) {
    sum += term;
    term *= mean_photons / (n + 1.0);
    if (n > mean_photons && term < 1e-18 * sum) break;
    if (n > mean_photons && term == 0.0) break;
  }
  return std::min(sum, 1.0);
}

int minimal_fock_dim(double q, double p, double hbar, double tail) {
  require_hbar(hbar, "minimal_fock_dim");
  const double mean = (q * q + p * p) / (2.0 * hbar);
  int dim = 1;
  while (coherent_tail_mass(mean, dim) > tail) ++dim;
  return dim;
}

DensityMatrix coherent_state(double q, double p, int dim, double hbar) {
  require_hbar(hbar, "coherent_state");
  const Eigen::VectorXcd v = coherent_vector(q, p, dim, hbar);
  return DensityMatrix::make(hbar, v * v.adjoint());
}

DensityMatrix p_mixture(const PMixtureSpec& spec, int dim, double hbar) {
  require_hbar(hbar, "p_mixture");
  if (spec.atoms.empty()) throw DomainError("p_mixture: no atoms");
  double total = 0.0;
  for (const auto& atom : spec.atoms) {
    if (!(atom.weight >= 0.0)) throw DomainError("p_mixture: negative weight");
    total += atom.weight;
  }
  if (std::abs(total - 1.0) > kWeightTol) {
    throw DomainError("p_mixture: weights sum to " + std::to_string(total) + ", expected 1");
  }
  Eigen::MatrixXcd data = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& atom : spec.atoms) {
    if (atom.weight == 0.0) continue;
    const Eigen::VectorXcd v = coherent_vector(atom.q, atom.p, dim, hbar);
    data.noalias() += atom.weight * (v * v.adjoint());
  }
  return DensityMatrix::make(hbar, std::move(data));
}

int minimal_fock_dim(const PMixtureSpec& spec, double hbar, double tail) {
  int dim = 1;
  for (const auto& atom : spec.atoms) {
    if (atom.weight > 0.0) dim = std::max(dim, minimal_fock_dim(atom.q, atom.p, hbar, tail));
  }
  return dim;
}

PMixtureSpec gaussian_preset(double q0, double p0, double sigma, int resolution) {
  if (!(sigma > 0.0) || resolution < 1) throw DomainError("gaussian_preset: invalid parameters");
  PMixtureSpec spec;
  const double step = 4.0 * sigma / resolution;
  double total = 0.0;
  for (int i = -resolution; i <= resolution; ++i) {
    for (int j = -resolution; j <= resolution; ++j) {
      const double dq = i * step;
      const double dp = j * step;
      const double w = std::exp(-(dq * dq + dp * dp) / (2.0 * sigma * sigma));
      spec.atoms.push_back({q0 + dq, p0 + dp, w});
      total += w;
    }
  }
  for (auto& atom : spec.atoms) atom.weight /= total;
  return spec;
}

PMixtureSpec ring_preset(double radius, int count) {
  if (!(radius >= 0.0) || count < 1) throw DomainError("ring_preset: invalid parameters");
  PMixtureSpec spec;
  for (int k = 0; k < count; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / count;
    spec.atoms.push_back({radius * std::cos(phi), radius * std::sin(phi), 1.0 / count});
  }
  return spec;
}

DensityMatrix von_neumann_step(const DensityMatrix& rho, const Eigen::MatrixXcd& hamiltonian, double dt) {
  if (hamiltonian.rows() != rho.dim() || hamiltonian.cols() != rho.dim()) {
    throw DimensionError("von_neumann_step: Hamiltonian size does not match the state");
  }
  const double scale = std::max(1.0, hamiltonian.cwiseAbs().maxCoeff());
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("von_neumann_step: Hamiltonian is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hamiltonian);
  const Eigen::VectorXd& e = es.eigenvalues();
  Eigen::VectorXcd phases(e.size());
  for (Eigen::Index k = 0; k < e.size(); ++k) phases(k) = std::polar(1.0, -e(k) * dt / rho.hbar());
  const Eigen::MatrixXcd& v = es.eigenvectors();
  const Eigen::MatrixXcd u = v * phases.asDiagonal() * v.adjoint();
  Eigen::MatrixXcd out = u * rho.data() * u.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix::make(rho.hbar(), std::move(out));
}

double purity(const DensityMatrix& rho) {
  return (rho.data() * rho.data()).trace().real();
}

double expectation(const DensityMatrix& rho, const Eigen::MatrixXcd& op) {
  if (op.rows() != rho.dim() || op.cols() != rho.dim()) {
    throw DimensionError("expectation: operator size does not match the state");
  }
  return (rho.data() * op).trace().real();
}

DensityMatrix random_density(int support, int dim, double hbar, unsigned long long seed) {
  if (support < 1 || support > dim) throw DomainError("random_density: need 1 <= support <= dim");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd g(support, support);
  for (int c = 0; c < support; ++c) {
    for (int r = 0; r < support; ++r) g(r, c) = cplx(normal(rng), normal(rng));
  }
  Eigen::MatrixXcd small = g * g.adjoint();
  small /= small.trace().real();
  Eigen::MatrixXcd data = Eigen::MatrixXcd::Zero(dim, dim);
  data.topLeftCorner(support, support) = small;
  return DensityMatrix::make(hbar, std::move(data));
}

}  // namespace weylchar::states
