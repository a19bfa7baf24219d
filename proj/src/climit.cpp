#include "weylchar/climit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "weylchar/error.hpp"

namespace weylchar::cl {

StateFamily fock_family(int m) {
  if (m < 0) throw DomainError("fock_family: m must be nonnegative");
  // Matrix elements of D are exact at any truncation, so m + 1 levels suffice.
  return {"fock(m=" + std::to_string(m) + ")",
          [m](double hbar) { return states::fock_state(m, m + 1, hbar); }};
}

StateFamily fock_energy_family(double energy) {
  if (!(energy > 0.0)) throw DomainError("fock_energy_family: energy must be positive");
  std::ostringstream name;
  name << "fock(hbar*m=" << energy << ")";
  return {name.str(), [energy](double hbar) {
            const int m = static_cast<int>(std::lround(energy / hbar));
            return states::fock_state(m, m + 1, hbar);
          }};
}

StateFamily mixture_family(const states::PMixtureSpec& spec) {
  return {"p_mixture(" + std::to_string(spec.atoms.size()) + " atoms)", [spec](double hbar) {
            return states::p_mixture(spec, states::minimal_fock_dim(spec, hbar), hbar);
          }};
}

StateFamily oscillating_family() {
  return {"coherent(q=cos(1/hbar))", [](double hbar) {
            const double q = std::cos(1.0 / hbar);
            return states::coherent_state(q, 0.0, states::minimal_fock_dim(q, 0.0, hbar), hbar);
          }};
}

ClassicalChar rescale(const nct::CharFunction& chi) {
  return {chi.grid.scaled(1.0 / chi.hbar), chi.values};
}

ClassicalChar rescaled_char(const StateFamily& family, double hbar, const PhaseGrid& grid) {
  if (!(hbar > 0.0)) throw DomainError("rescaled_char: hbar must be positive");
  const states::DensityMatrix rho = family.make(hbar);
  ClassicalChar cc = rescale(nct::forward(rho, grid.scaled(hbar)));
  cc.grid = grid;  // drop the roundoff of scaling there and back
  return cc;
}

std::vector<double> geometric_schedule(double start, double ratio, int count) {
  if (!(start > 0.0) || !(ratio > 0.0 && ratio < 1.0) || count < 1) {
    throw DomainError("geometric_schedule: need start > 0, 0 < ratio < 1, count >= 1");
  }
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) out[k] = start * std::pow(ratio, k);
  return out;
}

Eigen::MatrixXcd extrapolate_to_zero(const std::vector<double>& h, const std::vector<Eigen::MatrixXcd>& f) {
  if (h.empty() || h.size() != f.size()) throw DimensionError("extrapolate_to_zero: size mismatch");
  std::vector<Eigen::MatrixXcd> p = f;
  const std::size_t n = h.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double a = h[i];
      const double b = h[i + level];
      p[i] = (a * p[i + 1] - b * p[i]) / (a - b);
    }
  }
  return p[0];
}

LimitResult limit_extrapolate(const StateFamily& family, const std::vector<double>& schedule,
                              const PhaseGrid& grid) {
  if (schedule.size() < 3) throw DomainError("limit_extrapolate: schedule needs at least 3 values");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (!(schedule[k] > 0.0)) throw DomainError("limit_extrapolate: hbar values must be positive");
    if (k > 0 && !(schedule[k] < schedule[k - 1])) {
      throw DomainError("limit_extrapolate: schedule must be strictly decreasing");
    }
  }
  LimitResult out;
  out.hbars = schedule;
  std::vector<Eigen::MatrixXcd> iterates;
  iterates.reserve(schedule.size());
  for (double hbar : schedule) iterates.push_back(rescaled_char(family, hbar, grid).values);

  for (std::size_t k = 1; k < iterates.size(); ++k) {
    out.differences.push_back((iterates[k] - iterates[k - 1]).cwiseAbs().maxCoeff());
  }
  out.converged = true;
  for (std::size_t k = 1; k < out.differences.size(); ++k) {
    const double prev = out.differences[k - 1];
    const double cur = out.differences[k];
    out.ratios.push_back(prev > 0.0 ? cur / prev : 0.0);
    const bool below = cur < kConvergenceThreshold && prev < kConvergenceThreshold;
    if (cur > prev && !below) out.converged = false;
  }

  out.last = {grid, iterates.back()};
  const std::size_t use = std::min<std::size_t>(5, iterates.size());
  const std::vector<double> h(schedule.end() - use, schedule.end());
  const std::vector<Eigen::MatrixXcd> f(iterates.end() - use, iterates.end());
  out.extrapolated = {grid, extrapolate_to_zero(h, f)};
  out.extrapolation_points = static_cast<int>(use);
  const std::vector<double> h2(h.begin() + 1, h.end());
  const std::vector<Eigen::MatrixXcd> f2(f.begin() + 1, f.end());
  out.extrapolation_change = (extrapolate_to_zero(h2, f2) - out.extrapolated.values).cwiseAbs().maxCoeff();

  if (!out.converged) {
    out.classification = "divergent";
  } else {
    const Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(grid.points, grid.points);
    const double dev = (out.extrapolated.values - ones).cwiseAbs().maxCoeff();
    out.classification = dev < kAtomicTolerance ? "atomic at origin" : "measure";
  }
  return out;
}

double default_taper_sigma(const PhaseGrid& grid) {
  return std::sqrt(2.0 * std::log(1.0 / kBochnerDecayTolerance)) / grid.extent;
}

ClassicalDensity bochner_invert(const ClassicalChar& cc, const PhaseGrid& out_grid, const BochnerOptions& options) {
  if (cc.grid.axes != Axes::eta_xi) throw DomainError("bochner_invert: expected an (eta, xi) grid");
  if (cc.values.rows() != cc.grid.points || cc.values.cols() != cc.grid.points) {
    throw DimensionError("bochner_invert: values do not match the grid");
  }
  Eigen::MatrixXcd data = cc.values;
  if (options.singular) {
    const double sigma = options.taper_sigma > 0.0 ? options.taper_sigma : default_taper_sigma(cc.grid);
    for (int i = 0; i < cc.grid.points; ++i) {
      for (int j = 0; j < cc.grid.points; ++j) {
        const double r2 = cc.grid.coord(i) * cc.grid.coord(i) + cc.grid.coord(j) * cc.grid.coord(j);
        data(i, j) *= std::exp(-0.5 * sigma * sigma * r2);
      }
    }
  } else {
    const double ratio = nct::boundary_ratio(data);
    if (ratio > kBochnerDecayTolerance) {
      std::ostringstream msg;
      msg << "bochner_invert: char does not decay at the boundary (ratio " << ratio
          << "); enlarge the grid or declare the limit singular";
      throw DecayError(msg.str());
    }
  }

  ClassicalDensity out;
  out.grid = out_grid.with_axes(Axes::q_p);
  const Eigen::MatrixXcd raw = nct::symplectic_fourier(cc.grid, data, out.grid, 1.0);
  out.values = raw.real();
  const double peak = out.values.cwiseAbs().maxCoeff();
  if (!(peak > 0.0)) throw ToleranceError("bochner_invert: density vanishes on the output grid");
  out.imag_residue = raw.imag().cwiseAbs().maxCoeff() / peak;
  const double d = out.grid.spacing();
  out.mass = out.values.sum() * d * d;
  out.min_before = std::min(0.0, out.values.minCoeff()) / peak;
  if (out.min_before < -kBochnerNegativityTolerance) {
    std::ostringstream msg;
    msg << "bochner_invert: density reaches " << out.min_before
        << " of its peak; the char is not positive-definite on R^2";
    throw ToleranceError(msg.str());
  }
  if (out.min_before < 0.0) {
    out.values = out.values.cwiseMax(0.0);
    out.values *= out.mass / (out.values.sum() * d * d);
    out.repaired = true;
  }
  return out;
}

}  // namespace weylchar::cl
