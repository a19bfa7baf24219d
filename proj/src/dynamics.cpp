#include "weylchar/dynamics.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "weylchar/error.hpp"
#include "weylchar/repr.hpp"
#include "weylchar/spectral.hpp"

namespace weylchar::dyn {

using cplx = std::complex<double>;

HamiltonianSpec HamiltonianSpec::free_particle(double mass) {
  if (!(mass > 0.0)) throw DomainError("free_particle: mass must be positive");
  HamiltonianSpec h;
  h.kinetic[2] = 0.5 / mass;
  return h;
}

HamiltonianSpec HamiltonianSpec::harmonic(double mass, double omega) {
  HamiltonianSpec h = free_particle(mass);
  h.potential[2] = 0.5 * mass * omega * omega;
  return h;
}

HamiltonianSpec HamiltonianSpec::anharmonic(double mass, double omega, double lambda) {
  HamiltonianSpec h = harmonic(mass, omega);
  h.potential[4] = lambda;
  return h;
}

int HamiltonianSpec::degree() const {
  int d = 0;
  for (int k = 0; k < 5; ++k) {
    if (kinetic[k] != 0.0 || potential[k] != 0.0) d = k;
  }
  return d;
}

bool HamiltonianSpec::zero() const {
  for (int k = 1; k < 5; ++k) {
    if (kinetic[k] != 0.0 || potential[k] != 0.0) return false;
  }
  return true;
}

double HamiltonianSpec::value(double q, double p) const {
  double t = 0.0, v = 0.0;
  for (int k = 4; k >= 0; --k) {
    t = t * p + kinetic[k];
    v = v * q + potential[k];
  }
  return t + v;
}

Eigen::MatrixXcd hamiltonian_matrix(const HamiltonianSpec& h, double hbar, int dim) {
  if (dim < 1) throw DomainError("hamiltonian_matrix: dim must be positive");
  const int big = dim + 4;
  const repr::TruncatedRep rep = repr::build_generators(hbar, big);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(big, big);
  Eigen::MatrixXcd qk = Eigen::MatrixXcd::Identity(big, big);
  Eigen::MatrixXcd pk = Eigen::MatrixXcd::Identity(big, big);
  for (int k = 0; k < 5; ++k) {
    if (k > 0) {
      qk = (qk * rep.qhat).eval();
      pk = (pk * rep.phat).eval();
    }
    out += h.potential[k] * qk + h.kinetic[k] * pk;
  }
  // Entries of q^k and p^k with both indices below dim only involve levels
  // below dim + k, so the cropped block is exact for k <= 4.
  Eigen::MatrixXcd cropped = out.topLeftCorner(dim, dim);
  return 0.5 * (cropped + cropped.adjoint());
}

LinearFlow linear_flow(const HamiltonianSpec& h, double t) {
  if (!h.quadratic()) throw DomainError("linear_flow: Hamiltonian is not quadratic");
  // z' = A z + f with z = (q, p): q' = dH/dp, p' = -dH/dq.
  Eigen::Matrix3d b = Eigen::Matrix3d::Zero();
  b(0, 1) = 2.0 * h.kinetic[2];
  b(1, 0) = -2.0 * h.potential[2];
  b(0, 2) = h.kinetic[1];
  b(1, 2) = -h.potential[1];
  const Eigen::Matrix3d e = (b * t).exp();
  return {e.topLeftCorner<2, 2>(), e.topRightCorner<2, 1>()};
}

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Linear pullbacks by shears.

struct Shear {
  bool lower;    // lower: (x, y) -> (x, y + a x); upper: (x, y) -> (x + a y, y)
  double amount;
};

std::vector<Shear> shear_factors(const Eigen::Matrix2d& m) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  std::vector<Shear> out;
  auto push = [&out](bool lower, double amount) {
    if (amount != 0.0) out.push_back({lower, amount});
  };
  if (std::abs(b) > 1e-14) {
    // [[a, b], [c, d]] = L((d-1)/b) U(b) L((a-1)/b)
    push(true, (d - 1.0) / b);
    push(false, b);
    push(true, (a - 1.0) / b);
  } else if (std::abs(c) > 1e-14) {
    // = U((a-1)/c) L(c) U((d-1)/c)
    push(false, (a - 1.0) / c);
    push(true, c);
    push(false, (d - 1.0) / c);
  } else if (std::abs(a - 1.0) > 1e-14 || std::abs(d - 1.0) > 1e-14) {
    Eigen::Matrix2d u;
    u << 1.0, -1.0, 0.0, 1.0;
    out = shear_factors(m * u);
    out.push_back({false, 1.0});
  }
  return out;
}

double max_amount(const std::vector<Shear>& shears) {
  double s = 0.0;
  for (const auto& sh : shears) s = std::max(s, std::abs(sh.amount));
  return s;
}

// values(i, j) <- values at M (x_i, y_j); factors are applied leftmost first.
void pullback(Eigen::MatrixXcd& values, const PhaseGrid& grid, const std::vector<Shear>& shears) {
  const int m = grid.points;
  std::vector<double> shifts(m);
  for (const auto& sh : shears) {
    for (int k = 0; k < m; ++k) shifts[k] = sh.amount * grid.coord(k);
    spectral::shift_lines(values, sh.lower ? 1 : 0, shifts, grid.spacing());
  }
}

Eigen::Matrix2d char_matrix(const LinearFlow& f) {
  Eigen::Matrix2d m;
  m << f.s(0, 0), -f.s(1, 0), -f.s(0, 1), f.s(1, 1);
  return m;
}

// Substep count keeping every shear of one substep at or below kMaxShear.
int shear_substeps(const HamiltonianSpec& h, double dt, bool for_density) {
  int k = 1;
  while (true) {
    const LinearFlow f = linear_flow(h, for_density ? -dt / k : dt / k);
    const Eigen::Matrix2d m = for_density ? f.s : char_matrix(f);
    if (max_amount(shear_factors(m)) <= kMaxShear) return k;
    if (k > (1 << 20)) throw CflError("linear flow: shear decomposition does not converge");
    k *= 2;
  }
}

// ---------------------------------------------------------------------------
// Spectral generator of the characteristic-function equation.

class Generator {
 public:
  // classical: keep only the terms linear in the multiplication variable,
  // which is the rescaled hbar -> 0 limit (evaluated with hbar = 1).
  Generator(const PhaseGrid& grid, double hbar, const HamiltonianSpec& h, bool classical)
      : grid_(grid), hbar_(hbar), m_(grid.points) {
    const std::vector<double> kappa = spectral::wavenumbers(m_, grid.spacing());
    mult_eta_.resize(m_);
    mult_xi_.resize(m_);
    for (int j = 0; j < m_; ++j) {
      mult_eta_[j] = hbar * kappa[j];   // -i hbar d_eta
      mult_xi_[j] = -hbar * kappa[j];   // +i hbar d_xi
    }
    for (int n = 0; n < 4; ++n) {
      coeff_v_[n].assign(m_, 0.0);
      coeff_t_[n].assign(m_, 0.0);
    }
    // f(D - x) - f(D + x) = -2 sum_{j odd} C(k, j) x^j D^(k-j), x = xi/2 (V) or eta/2 (T).
    for (int k = 1; k < 5; ++k) {
      for (int j = 1; j <= k; j += 2) {
        if (classical && j != 1) continue;
        const int n = k - j;
        const double binom = std::tgamma(k + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(n + 1.0));
        for (int c = 0; c < m_; ++c) {
          const double x = 0.5 * grid.coord(c);
          coeff_v_[n][c] += -2.0 * binom * std::pow(x, j) * h.potential[k];
          coeff_t_[n][c] += -2.0 * binom * std::pow(x, j) * h.kinetic[k];
        }
      }
    }
    for (int n = 0; n < 4; ++n) {
      for (int c = 0; c < m_; ++c) {
        active_v_[n] = active_v_[n] || coeff_v_[n][c] != 0.0;
        active_t_[n] = active_t_[n] || coeff_t_[n][c] != 0.0;
      }
    }
  }

  // Bound on the spectral radius of the generator.
  double radius_bound() const {
    const double kmax = hbar_ * kPi / grid_.spacing();
    double r = 0.0;
    for (int n = 0; n < 4; ++n) {
      const double cv = *std::max_element(coeff_v_[n].begin(), coeff_v_[n].end(),
                                          [](double a, double b) { return std::abs(a) < std::abs(b); });
      const double ct = *std::max_element(coeff_t_[n].begin(), coeff_t_[n].end(),
                                          [](double a, double b) { return std::abs(a) < std::abs(b); });
      r += (std::abs(cv) + std::abs(ct)) * std::pow(kmax, n);
    }
    return r / hbar_;
  }

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& chi) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m_, m_);
    accumulate(chi, 0, coeff_v_, active_v_, mult_eta_, out);
    accumulate(chi, 1, coeff_t_, active_t_, mult_xi_, out);
    return out * cplx(0.0, -1.0 / hbar_);
  }

 private:
  // axis 0: operator powers act along eta, coefficients depend on xi (column);
  // axis 1: powers act along xi, coefficients depend on eta (row).
  void accumulate(const Eigen::MatrixXcd& chi, int axis, const std::array<std::vector<double>, 4>& coeff,
                  const std::array<bool, 4>& active, const std::vector<double>& mult,
                  Eigen::MatrixXcd& out) const {
    bool any = false;
    for (bool a : active) any = any || a;
    if (!any) return;
    Eigen::MatrixXcd spec = chi;
    spectral::dft_along(spec, axis, -1);
    for (int n = 0; n < 4; ++n) {
      if (!active[n]) continue;
      Eigen::MatrixXcd term;
      if (n == 0) {
        term = chi;
      } else {
        term = spec;
        for (int j = 0; j < m_; ++j) {
          const double f = j == m_ / 2 ? 0.0 : std::pow(mult[j], n) / m_;
          if (axis == 0) term.row(j) *= f;
          else term.col(j) *= f;
        }
        spectral::dft_along(term, axis, +1);
      }
      for (int c = 0; c < m_; ++c) {
        if (axis == 0) out.col(c) += coeff[n][c] * term.col(c);
        else out.row(c) += coeff[n][c] * term.row(c);
      }
    }
  }

  PhaseGrid grid_;
  double hbar_;
  int m_;
  std::vector<double> mult_eta_, mult_xi_;
  std::array<std::vector<double>, 4> coeff_v_, coeff_t_;
  std::array<bool, 4> active_v_{}, active_t_{};
};

Eigen::MatrixXcd rk4_step(const Generator& g, const Eigen::MatrixXcd& y, double dt) {
  const Eigen::MatrixXcd k1 = g.apply(y);
  const Eigen::MatrixXcd k2 = g.apply(y + 0.5 * dt * k1);
  const Eigen::MatrixXcd k3 = g.apply(y + 0.5 * dt * k2);
  const Eigen::MatrixXcd k4 = g.apply(y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void check_cfl(const Generator& g, double dt, double t_final, int steps, EvolutionReport& report) {
  report.cfl_number = std::abs(dt) * g.radius_bound();
  if (report.cfl_number > kCflLimit) {
    const int need = static_cast<int>(std::ceil(std::abs(t_final) * g.radius_bound() / kCflLimit));
    std::ostringstream msg;
    msg << "explicit stepping: dt * spectral radius = " << report.cfl_number << " exceeds " << kCflLimit
        << " with " << steps << " steps; use at least " << need << " steps";
    throw CflError(msg.str());
  }
}

void check_support(const Eigen::MatrixXcd& values, double t, EvolutionReport& report) {
  const double ratio = nct::boundary_ratio(values);
  report.max_boundary_ratio = std::max(report.max_boundary_ratio, ratio);
  if (ratio > kSupportTolerance) {
    std::ostringstream msg;
    msg << "evolution: characteristic function reaches the grid boundary at t = " << t << " (ratio " << ratio
        << "); enlarge the grid extent";
    throw CflError(msg.str());
  }
}

void apply_phase(Eigen::MatrixXcd& values, const PhaseGrid& grid, const Eigen::Vector2d& v, double hbar) {
  for (int i = 0; i < grid.points; ++i)
    for (int j = 0; j < grid.points; ++j)
      values(i, j) *= std::polar(1.0, (grid.coord(i) * v(0) - grid.coord(j) * v(1)) / hbar);
}

// Shared driver for quantum (hbar) and classical (hbar = 1, linear terms only) flows.
struct Driver {
  const PhaseGrid& grid;
  double hbar;
  const HamiltonianSpec& h;
  bool classical;
  double t_final;
  int steps;
  const EvolveOptions& options;
  std::function<void(int step, double t, const Eigen::MatrixXcd& values, EvolutionReport& report)> on_step;

  Eigen::MatrixXcd run(const Eigen::MatrixXcd& initial, EvolutionReport& report) const {
    if (steps < 1) throw DomainError("evolve: steps must be positive");
    if (!std::isfinite(t_final)) throw DomainError("evolve: t_final must be finite");
    check_support(initial, 0.0, report);
    const double dt = t_final / steps;
    if (h.zero() || t_final == 0.0) {
      report.method = "identity";
      for (int s = 1; s <= steps; ++s) on_step(s, s * dt, initial, report);
      return initial;
    }
    if (h.quadratic() && !options.force_explicit) return run_linear(initial, dt, report);
    return run_explicit(initial, dt, report);
  }

  Eigen::MatrixXcd run_linear(const Eigen::MatrixXcd& initial, double dt, EvolutionReport& report) const {
    report.method = "linear-flow";
    const int sub = shear_substeps(h, dt, false);
    const std::vector<Shear> shears = shear_factors(char_matrix(linear_flow(h, dt / sub)));
    report.substeps = sub * steps;
    report.max_shear = max_amount(shears);
    Eigen::MatrixXcd pulled = initial;
    Eigen::MatrixXcd current = initial;
    for (int s = 1; s <= steps; ++s) {
      for (int k = 0; k < sub; ++k) pulled = pull(pulled, shears);
      const double t = s * dt;
      current = pulled;
      apply_phase(current, grid, linear_flow(h, t).v, hbar);
      check_support(current, t, report);
      on_step(s, t, current, report);
    }
    return current;
  }

  Eigen::MatrixXcd pull(Eigen::MatrixXcd values, const std::vector<Shear>& shears) const {
    pullback(values, grid, shears);
    return values;
  }

  Eigen::MatrixXcd run_explicit(const Eigen::MatrixXcd& initial, double dt, EvolutionReport& report) const {
    report.method = "rk4";
    const Generator g(grid, hbar, h, classical);
    check_cfl(g, dt, t_final, steps, report);
    const bool halve = options.step_halving;
    report.substeps = halve ? 2 * steps : steps;
    Eigen::MatrixXcd coarse = initial;
    Eigen::MatrixXcd fine = initial;
    for (int s = 1; s <= steps; ++s) {
      if (halve) {
        coarse = rk4_step(g, coarse, dt);
        fine = rk4_step(g, fine, 0.5 * dt);
        fine = rk4_step(g, fine, 0.5 * dt);
      } else {
        fine = rk4_step(g, fine, dt);
      }
      const double t = s * dt;
      check_support(fine, t, report);
      on_step(s, t, fine, report);
    }
    if (halve) report.error_estimate = (fine - coarse).cwiseAbs().maxCoeff() / 15.0;
    return fine;
  }
};

std::vector<int> frame_steps(int steps, int frames) {
  std::vector<int> out;
  if (frames <= 0) return out;
  if (frames == 1) return {steps};
  for (int f = 0; f < frames; ++f) {
    const int s = static_cast<int>(std::lround(static_cast<double>(f) * steps / (frames - 1)));
    if (out.empty() || out.back() != s) out.push_back(s);
  }
  return out;
}

}  // namespace

int minimal_stable_steps(const PhaseGrid& grid, double hbar, const HamiltonianSpec& h, double t_final) {
  const Generator g(grid, hbar, h, false);
  return std::max(1, static_cast<int>(std::ceil(std::abs(t_final) * g.radius_bound() / kCflLimit)));
}

states::DensityMatrix von_neumann_evolve(const states::DensityMatrix& rho0, const HamiltonianSpec& h, double t) {
  return states::von_neumann_step(rho0, hamiltonian_matrix(h, rho0.hbar(), rho0.dim()), t);
}

Evolution evolve_char(const nct::CharFunction& chi0, const HamiltonianSpec& h, double t_final, int steps,
                      const EvolveOptions& options) {
  if (chi0.grid.axes != Axes::eta_xi) throw DomainError("evolve_char: expected an (eta, xi) grid");
  Evolution out;
  out.chi.hbar = chi0.hbar;
  out.chi.grid = chi0.grid;

  std::optional<states::DensityMatrix> oracle = options.oracle_state;
  Eigen::MatrixXcd oracle_h;
  if (oracle) {
    if (oracle->hbar() != chi0.hbar) throw DomainError("evolve_char: oracle state uses a different hbar");
    oracle_h = hamiltonian_matrix(h, oracle->hbar(), oracle->dim());
  }
  const int every = std::max(1, steps / 8);

  const std::vector<int> wanted = frame_steps(steps, options.frames);
  if (!wanted.empty() && wanted.front() == 0) {
    out.frame_times.push_back(0.0);
    out.frames.push_back(chi0);
  }

  const Driver driver{chi0.grid, chi0.hbar, h, false, t_final, steps, options,
                      [&](int s, double t, const Eigen::MatrixXcd& values, EvolutionReport& report) {
                        const double drift = std::abs(values(chi0.grid.origin(), chi0.grid.origin()) - 1.0);
                        report.times.push_back(t);
                        report.drift.push_back(drift);
                        report.max_drift = std::max(report.max_drift, drift);
                        if (drift > kDriftAbort) {
                          std::ostringstream msg;
                          msg << "evolve_char: normalization drift " << drift << " at t = " << t << " exceeds "
                              << kDriftAbort;
                          throw ToleranceError(msg.str());
                        }
                        if (oracle && (s % every == 0 || s == steps)) {
                          const states::DensityMatrix rho_t = states::von_neumann_step(*oracle, oracle_h, t);
                          const nct::CharFunction ref = nct::forward(rho_t, chi0.grid);
                          const double dev = (ref.values - values).cwiseAbs().maxCoeff();
                          report.oracle_deviation.push_back(dev);
                          report.max_oracle_deviation = std::max(report.max_oracle_deviation, dev);
                        }
                        if (std::find(wanted.begin(), wanted.end(), s) != wanted.end()) {
                          out.frame_times.push_back(t);
                          out.frames.push_back({chi0.hbar, chi0.grid, values});
                        }
                      }};
  out.chi.values = driver.run(chi0.values, out.report);
  return out;
}

Evolution evolve_char(const nct::CharFunction& chi0, const HamiltonianSpec& h, double t_final, int steps,
                      bool oracle) {
  EvolveOptions options;
  if (oracle) options.oracle_state = nct::inverse(chi0, options.oracle_dim).rho;
  return evolve_char(chi0, h, t_final, steps, options);
}

cl::ClassicalChar evolve_classical_char(const cl::ClassicalChar& cc, const HamiltonianSpec& h, double t_final,
                                       int steps, EvolutionReport* report, const EvolveOptions& options) {
  if (cc.grid.axes != Axes::eta_xi) throw DomainError("evolve_classical_char: expected an (eta, xi) grid");
  EvolutionReport local;
  const Driver driver{cc.grid, 1.0, h, true, t_final, steps, options,
                      [&](int, double t, const Eigen::MatrixXcd& values, EvolutionReport& r) {
                        const double drift = std::abs(values(cc.grid.origin(), cc.grid.origin()) - 1.0);
                        r.times.push_back(t);
                        r.drift.push_back(drift);
                        r.max_drift = std::max(r.max_drift, drift);
                      }};
  cl::ClassicalChar out{cc.grid, driver.run(cc.values, local)};
  if (report) *report = local;
  return out;
}

cl::ClassicalDensity classical_liouville(const cl::ClassicalDensity& rho, const HamiltonianSpec& h, double t_final,
                                         int steps, EvolutionReport* report) {
  if (steps < 1) throw DomainError("classical_liouville: steps must be positive");
  const PhaseGrid& grid = rho.grid;
  const double d = grid.spacing();
  EvolutionReport local;
  cl::ClassicalDensity out = rho;
  out.repaired = false;
  Eigen::MatrixXcd values = rho.values.cast<cplx>();

  if (h.zero() || t_final == 0.0) {
    local.method = "identity";
  } else if (h.quadratic()) {
    // mu_t = mu_0 o Phi_{-t}; one substep pulls back by z -> S z + v of the
    // backward flow, translation first, then the linear part by shears.
    local.method = "linear-flow";
    const double dt = t_final / steps;
    const int sub = shear_substeps(h, dt, true);
    const LinearFlow back = linear_flow(h, -dt / sub);
    const std::vector<Shear> shears = shear_factors(back.s);
    local.substeps = sub * steps;
    local.max_shear = max_amount(shears);
    for (int k = 0; k < sub * steps; ++k) {
      if (back.v(0) != 0.0) spectral::shift_all(values, 0, back.v(0), d);
      if (back.v(1) != 0.0) spectral::shift_all(values, 1, back.v(1), d);
      pullback(values, grid, shears);
    }
    check_support(values, t_final, local);
  } else {
    const PhaseGrid cgrid = reciprocal_grid(grid, 1.0);
    const double two_pi = 2.0 * kPi;
    Eigen::MatrixXcd cc = two_pi * two_pi * nct::symplectic_fourier(grid, values, cgrid, 1.0).conjugate();
    cl::ClassicalChar evolved = evolve_classical_char({cgrid, cc}, h, t_final, steps, &local);
    values = nct::symplectic_fourier(cgrid, evolved.values, grid, 1.0);
  }

  out.values = values.real();
  const double peak = out.values.cwiseAbs().maxCoeff();
  out.imag_residue = peak > 0.0 ? values.imag().cwiseAbs().maxCoeff() / peak : 0.0;
  out.mass = out.values.sum() * d * d;
  out.min_before = peak > 0.0 ? std::min(0.0, out.values.minCoeff()) / peak : 0.0;
  if (report) *report = local;
  return out;
}

OracleComparison oracle_evolve_compare(const states::DensityMatrix& rho0, const HamiltonianSpec& h, double t,
                                       int steps, const PhaseGrid& grid) {
  const nct::CharFunction chi0 = nct::forward(rho0, grid);
  EvolveOptions options;
  const Evolution ev = evolve_char(chi0, h, t, steps, options);
  const nct::CharFunction ref = nct::forward(von_neumann_evolve(rho0, h, t), grid);
  return {(ev.chi.values - ref.values).cwiseAbs().maxCoeff(), ev.report};
}

}  // namespace weylchar::dyn
