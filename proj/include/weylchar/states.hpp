#pragma once

#include <vector>

#include <Eigen/Dense>

namespace weylchar::states {

/// Density matrix in the first `dim()` Fock states at a given hbar.
///
/// Invariants (checked by `make`): Hermitian to 1e-10, unit trace to 1e-10,
/// smallest eigenvalue >= -1e-10.
class DensityMatrix {
 public:
  static DensityMatrix make(double hbar, Eigen::MatrixXcd data);

  double hbar() const { return hbar_; }
  int dim() const { return static_cast<int>(data_.rows()); }
  const Eigen::MatrixXcd& data() const { return data_; }

 private:
  DensityMatrix(double hbar, Eigen::MatrixXcd data) : hbar_(hbar), data_(std::move(data)) {}

  double hbar_;
  Eigen::MatrixXcd data_;
};

/// Atom of a discretized P-measure: coherent state centered at (q, p).
struct PAtom {
  double q = 0.0;
  double p = 0.0;
  double weight = 0.0;
};

/// Discretized Glauber-Sudarshan P-measure; weights nonnegative and summing to 1.
struct PMixtureSpec {
  std::vector<PAtom> atoms;
};

inline constexpr double kCoherentTailTolerance = 1e-10;

DensityMatrix fock_state(int m, int dim, double hbar);

/// Projector onto the coherent state alpha = (q + i p)/sqrt(2 hbar) truncated to
/// `dim` levels. Throws TruncationError when the Poisson tail beyond `dim`
/// exceeds kCoherentTailTolerance.
DensityMatrix coherent_state(double q, double p, int dim, double hbar);

/// Poisson mass sum_{n >= dim} e^{-r2} r2^n / n!.
double coherent_tail_mass(double mean_photons, int dim);
/// Smallest dim for which the coherent state at (q, p) passes the tail check.
int minimal_fock_dim(double q, double p, double hbar, double tail = kCoherentTailTolerance);

DensityMatrix p_mixture(const PMixtureSpec& spec, int dim, double hbar);
/// Smallest dim that is adequate for every atom.
int minimal_fock_dim(const PMixtureSpec& spec, double hbar, double tail = kCoherentTailTolerance);

/// Isotropic Gaussian P-measure with standard deviation `sigma` around (q0, p0),
/// discretized on a (2*resolution+1)^2 lattice spanning +-4 sigma.
PMixtureSpec gaussian_preset(double q0, double p0, double sigma, int resolution);
/// Uniform P-measure on a circle of given radius, `count` equally spaced atoms.
PMixtureSpec ring_preset(double radius, int count);

/// rho -> U rho U^dagger with U = exp(-i H dt / hbar), via the Hermitian
/// eigendecomposition of H (exact for any dt).
DensityMatrix von_neumann_step(const DensityMatrix& rho, const Eigen::MatrixXcd& hamiltonian, double dt);

double purity(const DensityMatrix& rho);
/// Real part of tr[rho A].
double expectation(const DensityMatrix& rho, const Eigen::MatrixXcd& op);

/// Random full-rank density matrix (Ginibre construction) supported on the
/// first `support` levels of a `dim`-level space.
DensityMatrix random_density(int support, int dim, double hbar, unsigned long long seed);

}  // namespace weylchar::states
