#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "weylchar/hw_group.hpp"
#include "weylchar/interp.hpp"
#include "weylchar/nctransform.hpp"

namespace weylchar::pd {

using cplx = std::complex<double>;

/// Composition law used to build Gram matrices.
enum class Mode {
  heisenberg,  ///< g_j^-1 g_k in H_1, central phase included
  abelian,     ///< (eta_k - eta_j, xi_k - xi_j) in R^2, central phase ignored
};

const char* mode_name(Mode mode);
Mode parse_mode(const std::string& text);

/// phi(s, eta, xi) = exp(-i hbar s) chi(hbar eta, hbar xi), built from grid
/// samples of chi.
///
/// The hbar rescaling of the arguments makes g -> phi(g) the expectation of an
/// exact unitary representation of hw::multiply (see repr::rep_matrix_homomorphic),
/// so Gram matrices of a state are positive semidefinite for every hbar.
class PdFunction {
 public:
  PdFunction(double hbar, const PhaseGrid& grid, const Eigen::MatrixXcd& values);
  static PdFunction from_char(const nct::CharFunction& chi);

  double hbar() const { return hbar_; }
  const PhaseGrid& grid() const { return interp_.grid(); }

  /// Value on H_1 (physical form with the central phase).
  cplx operator()(const hw::GroupElement& g) const;
  /// Value on R^2: chi(hbar eta, hbar xi).
  cplx abelian(const hw::GroupElement& g) const;

 private:
  double hbar_;
  GridInterpolator interp_;
};

using GroupFunction = std::function<cplx(const hw::GroupElement&)>;

/// (eta, xi) of a + b; the central coordinate of the result is 0.
hw::GroupElement abelian_compose(const hw::GroupElement& a, const hw::GroupElement& b);

/// M_jk = phi(g_j^-1 g_k).
Eigen::MatrixXcd gram_matrix(const GroupFunction& phi, const std::vector<hw::GroupElement>& elements);
/// M_jk = phi(-a_j + a_k) with abelian composition.
Eigen::MatrixXcd abelian_gram_matrix(const GroupFunction& phi, const std::vector<hw::GroupElement>& elements);

struct SamplerSpec {
  enum class Kind { random, lattice };
  Kind kind = Kind::random;
  int count = 64;             ///< K (lattice uses the largest square <= K)
  std::uint64_t seed = 0;
  /// Random sampler: half-width of the box of chi arguments (hbar*eta, hbar*xi).
  /// Nonpositive selects half the grid extent minus one spacing, so that all
  /// pairwise differences stay on the grid.
  double radius = 0.0;
  /// Lattice sampler: spacing of chi arguments; nonpositive selects sqrt(hbar)
  /// rounded to grid nodes.
  double spacing = 0.0;
  /// Snap chi arguments to grid nodes so that differences are exact samples.
  bool snap = true;
};

SamplerSpec::Kind parse_sampler(const std::string& text);

/// Group elements whose chi arguments follow the sampler; central coordinates
/// are uniform in [0, 2 pi / hbar).
std::vector<hw::GroupElement> sample_elements(const SamplerSpec& spec, const PdFunction& phi);

struct PdReport {
  Mode mode = Mode::heisenberg;
  int sample_count = 0;
  double min_eigenvalue = 0.0;
  double gram_scale = 0.0;  ///< largest eigenvalue
  double tolerance = 0.0;
  bool positive = true;
  std::uint64_t sampler_seed = 0;
  double hermiticity_residual = 0.0;

  const char* verdict() const { return positive ? "positive" : "indefinite"; }
};

inline constexpr double kDefaultPdTolerance = 1e-8;

/// Spectral verdict for one Gram matrix: positive iff min eigenvalue >= -tol * gram_scale.
PdReport assess_gram(const Eigen::MatrixXcd& gram, double tol);

PdReport pd_check(const GroupFunction& phi, Mode mode, const std::vector<hw::GroupElement>& elements,
                  double tol = kDefaultPdTolerance);
PdReport pd_check(const PdFunction& phi, Mode mode, const SamplerSpec& sampler,
                  double tol = kDefaultPdTolerance);

}  // namespace weylchar::pd
