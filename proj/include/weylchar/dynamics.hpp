#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "weylchar/climit.hpp"
#include "weylchar/nctransform.hpp"
#include "weylchar/states.hpp"

namespace weylchar::dyn {

/// H(q, p) = T(p) + V(q) with T(p) = sum_k kinetic[k] p^k and
/// V(q) = sum_k potential[k] q^k, degrees at most 4.
struct HamiltonianSpec {
  std::array<double, 5> kinetic{};
  std::array<double, 5> potential{};

  static HamiltonianSpec free_particle(double mass);
  static HamiltonianSpec harmonic(double mass, double omega);
  /// Harmonic oscillator plus lambda q^4.
  static HamiltonianSpec anharmonic(double mass, double omega, double lambda);

  /// Largest power with a nonzero coefficient in T or V.
  int degree() const;
  bool quadratic() const { return degree() <= 2; }
  bool zero() const;
  double value(double q, double p) const;
};

/// T(qhat) + V(phat) with exact matrix elements in `dim` Fock levels (powers
/// are formed in dim + 4 levels before cropping).
Eigen::MatrixXcd hamiltonian_matrix(const HamiltonianSpec& h, double hbar, int dim);

/// Classical flow of a quadratic H: z(t) = S z(0) + v with z = (q, p).
struct LinearFlow {
  Eigen::Matrix2d s;
  Eigen::Vector2d v;
};
LinearFlow linear_flow(const HamiltonianSpec& h, double t);

struct EvolveOptions {
  /// Compare against the von Neumann evolution of this state every
  /// max(1, steps/8) steps and at the last step.
  std::optional<states::DensityMatrix> oracle_state;
  /// When oracle_state is empty and `oracle` is requested, the initial state is
  /// reconstructed with nct::inverse in this many levels.
  int oracle_dim = 48;
  /// Number of evenly spaced snapshots to keep, including t = 0 and t_final
  /// (0 keeps none).
  int frames = 0;
  /// Explicit stepping only: also integrate with half the step and report
  /// max |chi_2n - chi_n| / 15 as the error estimate.
  bool step_halving = true;
  /// Use explicit stepping even for a quadratic H (testing aid).
  bool force_explicit = false;
};

struct EvolutionReport {
  std::string method;                    ///< "linear-flow" or "rk4"
  std::vector<double> times;             ///< step end times
  std::vector<double> drift;             ///< |chi_t(0,0) - 1| per step
  std::vector<double> oracle_deviation;  ///< at the oracle checkpoints, when an oracle is attached
  double max_drift = 0.0;
  double max_oracle_deviation = 0.0;
  double error_estimate = 0.0;           ///< step-halving estimate (explicit stepping)
  double cfl_number = 0.0;               ///< dt * spectral radius bound (explicit stepping)
  double max_shear = 0.0;                ///< largest shear per substep (linear flow)
  int substeps = 0;
  double max_boundary_ratio = 0.0;
};

struct Evolution {
  nct::CharFunction chi;
  EvolutionReport report;
  std::vector<double> frame_times;
  std::vector<nct::CharFunction> frames;
};

inline constexpr double kDriftAbort = 1e-4;
inline constexpr double kCflLimit = 2.5;
inline constexpr double kMaxShear = 0.25;
inline constexpr double kSupportTolerance = 1e-6;

/// Integrates i hbar d/dt chi = [H(Q_R, P_R) - H(Q_L, P_L)] chi with
///   Q_L = -i hbar d_eta + xi/2,  P_L = i hbar d_xi + eta/2,
///   Q_R = -i hbar d_eta - xi/2,  P_R = i hbar d_xi - eta/2,
/// the images of left and right multiplication by qhat, phat under
/// rho -> tr[rho D(alpha)]. This is the von Neumann equation rho' = -(i/hbar)[H, rho].
///
/// Quadratic H: exact pullback chi_t(z) = exp(i(eta v_q - xi v_p)/hbar) chi_0(M z)
/// with M = [[S11, -S21], [-S12, S22]], applied as spectral shears.
/// Otherwise: RK4 with spectral derivatives (CflError when dt is too large).
/// Throws ToleranceError if |chi_t(0,0) - 1| exceeds 1e-4 and CflError if the
/// evolved function reaches the grid boundary.
Evolution evolve_char(const nct::CharFunction& chi0, const HamiltonianSpec& h, double t_final, int steps,
                      const EvolveOptions& options = {});
/// Convenience form with a boolean oracle switch.
Evolution evolve_char(const nct::CharFunction& chi0, const HamiltonianSpec& h, double t_final, int steps,
                      bool oracle);

/// Smallest step count for which explicit stepping passes the CFL bound.
int minimal_stable_steps(const PhaseGrid& grid, double hbar, const HamiltonianSpec& h, double t_final);

/// Classical Liouville flow of a characteristic function:
///   d/dt mu^ = i eta T'(i d_xi) mu^ + i xi V'(-i d_eta) mu^,
/// the hbar -> 0 limit of the rescaled quantum equation. Exact flow for quadratic H
/// unless options.force_explicit asks for RK4 on the transport equation; the
/// oracle fields of options are ignored.
cl::ClassicalChar evolve_classical_char(const cl::ClassicalChar& cc, const HamiltonianSpec& h, double t_final,
                                       int steps, EvolutionReport* report = nullptr,
                                       const EvolveOptions& options = {});

/// Liouville evolution of a phase-space density. Quadratic H pushes the grid
/// forward along the exact flow; otherwise the density goes through its
/// characteristic function on the reciprocal grid.
cl::ClassicalDensity classical_liouville(const cl::ClassicalDensity& rho, const HamiltonianSpec& h, double t_final,
                                         int steps, EvolutionReport* report = nullptr);

struct OracleComparison {
  double max_deviation = 0.0;
  EvolutionReport report;
};

/// max over the grid of |evolve_char(forward(rho0)) - forward(von Neumann(rho0))| at t.
OracleComparison oracle_evolve_compare(const states::DensityMatrix& rho0, const HamiltonianSpec& h, double t,
                                       int steps, const PhaseGrid& grid);

/// Exact propagation of a density matrix by exp(-i H t / hbar).
states::DensityMatrix von_neumann_evolve(const states::DensityMatrix& rho0, const HamiltonianSpec& h, double t);

}  // namespace weylchar::dyn
