#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "weylchar/nctransform.hpp"
#include "weylchar/states.hpp"

namespace weylchar::cl {

/// Characteristic function of a probability measure on R^2, sampled on an
/// (eta, xi) grid: mu^(eta, xi) = int dmu(q, p) exp(i(eta q - xi p)).
struct ClassicalChar {
  PhaseGrid grid;
  Eigen::MatrixXcd values;
};

/// Phase-space density on a (q, p) grid.
struct ClassicalDensity {
  PhaseGrid grid;
  Eigen::MatrixXd values;
  double mass = 0.0;            ///< trapezoidal mass before any repair
  double imag_residue = 0.0;    ///< discarded imaginary part relative to the peak
  double min_before = 0.0;      ///< most negative value before repair, relative to the peak
  bool repaired = false;
};

/// A state-valued function of hbar.
struct StateFamily {
  std::string name;
  std::function<states::DensityMatrix(double hbar)> make;
};

StateFamily fock_family(int m);
/// Fock states with m = round(energy / hbar): the microcanonical family.
StateFamily fock_energy_family(double energy);
/// Fixed P-measure, truncation chosen per hbar.
StateFamily mixture_family(const states::PMixtureSpec& spec);
/// Coherent state centered at (cos(1/hbar), 0): its rescaled characteristic
/// function keeps oscillating as hbar -> 0 (negative control).
StateFamily oscillating_family();

/// Relabel chi sampled on grid G at hbar as a classical char on G/hbar, i.e.
/// values(i, j) = chi(hbar eta_i, hbar xi_j) with (eta_i, xi_j) on G/hbar.
ClassicalChar rescale(const nct::CharFunction& chi);

/// Samples chi_hbar(hbar eta, hbar xi) on the fixed grid.
ClassicalChar rescaled_char(const StateFamily& family, double hbar, const PhaseGrid& grid);

/// hbar_k = start * ratio^k for k < count.
std::vector<double> geometric_schedule(double start = 1.0, double ratio = 0.5, int count = 6);

inline constexpr double kConvergenceThreshold = 1e-3;
inline constexpr double kAtomicTolerance = 1e-6;

struct LimitResult {
  std::vector<double> hbars;
  std::vector<double> differences;  ///< sup |c_{k+1} - c_k| over the grid
  std::vector<double> ratios;       ///< differences[k+1] / differences[k]
  bool converged = false;
  ClassicalChar last;               ///< iterate at the end of the schedule
  ClassicalChar extrapolated;       ///< polynomial extrapolation to hbar = 0
  double extrapolation_change = 0.0;  ///< sup change when one fewer iterate is used
  int extrapolation_points = 0;
  std::string classification;       ///< "atomic at origin", "measure" or "divergent"
};

/// Evaluates the family along a strictly decreasing schedule of at least three
/// values. The limit is declared to exist when the successive sup differences
/// never increase, except for fluctuations among differences already below
/// kConvergenceThreshold. The extrapolated char uses Neville interpolation in
/// hbar through the last (up to five) iterates.
LimitResult limit_extrapolate(const StateFamily& family, const std::vector<double>& schedule,
                              const PhaseGrid& grid);

/// Pointwise polynomial extrapolation of samples f(h_k) to h = 0.
Eigen::MatrixXcd extrapolate_to_zero(const std::vector<double>& h, const std::vector<Eigen::MatrixXcd>& f);

inline constexpr double kBochnerDecayTolerance = 1e-4;
inline constexpr double kBochnerNegativityTolerance = 1e-4;

struct BochnerOptions {
  /// The caller declares a non-decaying (singular) char, such as a ring
  /// measure. A Gaussian taper exp(-sigma^2 r^2 / 2) is applied first, so the
  /// output is the measure blurred by a normal kernel of standard deviation sigma.
  bool singular = false;
  /// Nonpositive selects sigma with taper 1e-4 at r = extent.
  double taper_sigma = 0.0;
};

double default_taper_sigma(const PhaseGrid& grid);

/// mu(q, p) = int d eta d xi / (2 pi)^2 cc(eta, xi) exp(-i(eta q - xi p)) on out_grid.
/// Negative values down to -1e-4 of the peak are clipped and the grid rescaled to its pre-clip mass
/// (reported); anything more negative is a ToleranceError.
ClassicalDensity bochner_invert(const ClassicalChar& cc, const PhaseGrid& out_grid,
                                const BochnerOptions& options = {});

}  // namespace weylchar::cl
