#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "weylchar/error.hpp"
#include "weylchar/nctransform.hpp"
#include "weylchar/states.hpp"

using namespace weylchar;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<states::DensityMatrix> zoo(double hbar, int dim) {
  std::vector<states::DensityMatrix> out;
  for (int m = 0; m <= 4; ++m) out.push_back(states::fock_state(m, dim, hbar));
  out.push_back(states::coherent_state(0.8, -0.6, dim, hbar));
  out.push_back(states::p_mixture({{{1.0, 0.0, 0.5}, {-1.0, 0.0, 0.5}}}, dim, hbar));
  out.push_back(states::random_density(5, dim, hbar, 11));
  return out;
}

double sup(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("grid conventions") {
  const PhaseGrid g = PhaseGrid::make(3.0, 12);
  CHECK(g.spacing() == doctest::Approx(0.5));
  CHECK(g.coord(0) == -3.0);
  CHECK(g.coord(g.origin()) == 0.0);
  CHECK(g.coord(g.mirror(3)) == doctest::Approx(-g.coord(3)));
  CHECK_THROWS_AS(PhaseGrid::make(1.0, 7), DomainError);
  CHECK_THROWS_AS(PhaseGrid::make(1.0, 6), DomainError);
  CHECK_THROWS_AS(PhaseGrid::make(-1.0, 16), DomainError);
}

TEST_CASE("forward matches the Laguerre form") {
  for (double hbar : {0.5, 1.0, 2.0}) {
    const PhaseGrid grid = PhaseGrid::make(8.0 * std::sqrt(hbar), 32);
    for (int m = 0; m <= 4; ++m) {
      const auto chi = nct::forward(states::fock_state(m, 12, hbar), grid);
      double worst = 0.0;
      for (int i = 0; i < grid.points; ++i)
        for (int j = 0; j < grid.points; ++j)
          worst = std::max(worst, std::abs(chi.values(i, j) - oracle::fock_char(m, hbar, grid.coord(i), grid.coord(j))));
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("characteristic function invariants") {
  const PhaseGrid grid = PhaseGrid::make(10.0, 48);
  for (const auto& rho : zoo(1.0, 32)) {
    const auto inv = nct::check_invariants(nct::forward(rho, grid));
    CHECK(inv.origin_error < 1e-12);
    CHECK(inv.symmetry_error < 1e-12);
    CHECK(inv.max_modulus <= 1.0 + 1e-8);
  }
}

TEST_CASE("forward is linear") {
  const PhaseGrid grid = PhaseGrid::make(8.0, 32);
  const auto a = states::random_density(4, 16, 1.0, 1);
  const auto b = states::coherent_state(0.5, 0.5, 16, 1.0);
  const auto mix = states::DensityMatrix::make(1.0, 0.3 * a.data() + 0.7 * b.data());
  const auto lhs = nct::forward(mix, grid).values;
  const auto rhs = 0.3 * nct::forward(a, grid).values + 0.7 * nct::forward(b, grid).values;
  CHECK(sup(lhs - rhs) < 1e-14);
}

TEST_CASE("round trips across the zoo") {
  const PhaseGrid grid = PhaseGrid::make(12.0, 128);
  for (const auto& rho : zoo(1.0, 32)) {
    const auto chi = nct::forward(rho, grid);
    const auto back = nct::inverse(chi, 32);
    CHECK((back.rho.data() - rho.data()).norm() < 1e-6);
    CHECK(std::abs(back.report.trace_before - 1.0) < 1e-8);
    CHECK(back.report.boundary_ratio < 1e-6);
    CHECK(sup(nct::forward(back.rho, grid).values - chi.values) < 1e-6);
  }
}

TEST_CASE("inverse is linear") {
  const PhaseGrid grid = PhaseGrid::make(12.0, 96);
  const auto a = nct::forward(states::fock_state(1, 24, 1.0), grid);
  const auto b = nct::forward(states::coherent_state(-0.5, 1.0, 24, 1.0), grid);
  nct::CharFunction mix = a;
  mix.values = 0.25 * a.values + 0.75 * b.values;
  const Eigen::MatrixXcd lhs = nct::reconstruction_integral(mix, 24);
  const Eigen::MatrixXcd rhs = 0.25 * nct::reconstruction_integral(a, 24) + 0.75 * nct::reconstruction_integral(b, 24);
  CHECK(sup(lhs - rhs) < 1e-13);
}

TEST_CASE("inverse of the vacuum Gaussian") {
  for (double hbar : {0.5, 1.0}) {
    const PhaseGrid grid = PhaseGrid::make(12.0 * std::sqrt(hbar), 96);
    nct::CharFunction chi{hbar, grid, Eigen::MatrixXcd(96, 96)};
    for (int i = 0; i < 96; ++i)
      for (int j = 0; j < 96; ++j)
        chi.values(i, j) = std::exp(-(grid.coord(i) * grid.coord(i) + grid.coord(j) * grid.coord(j)) / (4.0 * hbar));
    const auto res = nct::inverse(chi, 16);
    CHECK((res.rho.data() - states::fock_state(0, 16, hbar).data()).norm() < 1e-8);
    CHECK_FALSE(res.report.repaired);
  }
}

TEST_CASE("inverse failure modes") {
  const PhaseGrid small = PhaseGrid::make(3.0, 32);
  const auto wide = nct::forward(states::fock_state(2, 16, 1.0), small);
  CHECK_THROWS_AS(nct::inverse(wide, 16), DecayError);

  const PhaseGrid grid = PhaseGrid::make(12.0, 96);
  const auto c0 = nct::forward(states::fock_state(0, 16, 1.0), grid);
  const auto c1 = nct::forward(states::fock_state(1, 16, 1.0), grid);
  nct::CharFunction indefinite = c0;
  indefinite.values = 2.0 * c0.values - c1.values;  // 2|0><0| - |1><1|
  CHECK_THROWS_AS(nct::inverse(indefinite, 16), ToleranceError);

  nct::CharFunction heavy = c0;
  heavy.values *= 1.01;
  CHECK_THROWS_AS(nct::inverse(heavy, 16), ToleranceError);

  // A negative eigenvalue inside the repair band is clipped and reported.
  nct::CharFunction slight = c0;
  slight.values = (1.0 + 5e-7) * c0.values - 5e-7 * c1.values;
  const auto repaired = nct::inverse(slight, 16);
  CHECK(repaired.report.repaired);
  CHECK(repaired.report.min_eigenvalue == doctest::Approx(-5e-7).epsilon(1e-3));
  CHECK(repaired.report.clipped_weight == doctest::Approx(5e-7).epsilon(1e-3));
  CHECK(std::abs(repaired.rho.data().trace() - 1.0) < 1e-12);

  CHECK_THROWS_AS(nct::forward(states::fock_state(0, 4, 1.0), PhaseGrid::make(4.0, 16, Axes::q_p)), DomainError);
}

TEST_CASE("wigner: Gaussian pair and Fock negativity") {
  for (double hbar : {0.5, 1.0, 2.0}) {
    const PhaseGrid grid = PhaseGrid::make(12.0 * std::sqrt(hbar), 96);
    const PhaseGrid out = PhaseGrid::make(3.0 * std::sqrt(hbar), 24, Axes::q_p);
    const auto w0 = nct::wigner(nct::forward(states::fock_state(0, 24, hbar), grid), out);
    double worst = 0.0;
    for (int a = 0; a < out.points; ++a)
      for (int b = 0; b < out.points; ++b) {
        const double r2 = out.coord(a) * out.coord(a) + out.coord(b) * out.coord(b);
        worst = std::max(worst, std::abs(w0.values(a, b) - std::exp(-r2 / hbar) / (kPi * hbar)));
      }
    CHECK(worst < 1e-10);
    CHECK(w0.values.minCoeff() > 0.0);
    CHECK(w0.values.maxCoeff() == w0.values(out.origin(), out.origin()));
    CHECK(w0.imag_residue < 1e-8);

    const auto w1 = nct::wigner(nct::forward(states::fock_state(1, 24, hbar), grid), out);
    const double origin = w1.values(out.origin(), out.origin());
    CHECK(origin < 0.0);
    CHECK(origin == doctest::Approx(-1.0 / (kPi * hbar)).epsilon(1e-10));
    CHECK(origin == doctest::Approx(oracle::fock_wigner_origin(1, hbar)).epsilon(1e-8));
  }
}

TEST_CASE("wigner of a coherent state is centred on it") {
  const double hbar = 0.5, q0 = 1.0, p0 = -0.5;
  const PhaseGrid grid = PhaseGrid::make(10.0, 96);
  const PhaseGrid out = PhaseGrid::make(3.0, 24, Axes::q_p);
  const auto w = nct::wigner(nct::forward(states::coherent_state(q0, p0, 24, hbar), grid), out);
  double worst = 0.0;
  for (int a = 0; a < out.points; ++a)
    for (int b = 0; b < out.points; ++b) {
      const double dq = out.coord(a) - q0, dp = out.coord(b) - p0;
      worst = std::max(worst, std::abs(w.values(a, b) - std::exp(-(dq * dq + dp * dp) / hbar) / (kPi * hbar)));
    }
  CHECK(worst < 1e-8);
  CHECK(w.values.minCoeff() > -1e-12);
}

TEST_CASE("wigner mass and marginals") {
  const double hbar = 1.0;
  const PhaseGrid grid = PhaseGrid::make(12.0, 128);
  const PhaseGrid out = PhaseGrid::make(7.0, 96, Axes::q_p);
  for (int m : {0, 2, 3}) {
    const auto w = nct::wigner(nct::forward(states::fock_state(m, 24, hbar), grid), out);
    CHECK(w.mass == doctest::Approx(1.0).epsilon(1e-6));
    double worst = 0.0;
    for (int a = 0; a < out.points; ++a) {
      const double marginal = w.values.row(a).sum() * out.spacing();
      const double psi = oracle::hermite_function(m, out.coord(a), hbar);
      worst = std::max(worst, std::abs(marginal - psi * psi));
    }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("FFT route agrees with the direct transform") {
  const double hbar = 1.0;
  const PhaseGrid grid = PhaseGrid::make(12.0, 64);
  const auto chi = nct::forward(states::random_density(4, 24, hbar, 5), grid);
  const auto fast = nct::wigner_fft(chi);
  const auto direct = nct::wigner(chi, fast.grid);
  CHECK(fast.grid == reciprocal_grid(grid, hbar));
  CHECK((fast.values - direct.values).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(fast.mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("aliasing is reported through the imaginary residue") {
  const PhaseGrid grid = PhaseGrid::make(10.0, 48);
  auto chi = nct::forward(states::fock_state(1, 16, 1.0), grid);
  chi.values(5, 9) += cplx(0.0, 0.3);  // breaks chi(-z) = conj chi(z)
  CHECK_THROWS_AS(nct::wigner(chi, PhaseGrid::make(3.0, 16, Axes::q_p)), ToleranceError);
}

TEST_CASE("default grids") {
  CHECK(nct::phase_radius(states::fock_state(2, 8, 0.5)) == doctest::Approx(std::sqrt(2.5)));
  CHECK(nct::phase_radius(states::coherent_state(1.0, -2.0, 40, 1.0)) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-8));
  const PhaseGrid vac = nct::default_grid(2.0, 0.1);
  CHECK(vac.extent == doctest::Approx(8.0 * std::sqrt(2.0)));
  CHECK(vac.points == 128);
  // A large radius forces more nodes to keep the oscillations resolved.
  const PhaseGrid wide = nct::default_grid(0.1, 6.0);
  CHECK(wide.extent == doctest::Approx(24.0));
  CHECK(wide.points > 128);
  CHECK(std::numbers::pi * 0.1 * wide.points / (2.0 * wide.extent) >= 6.0 + 4.0 * std::sqrt(0.1));
  CHECK_THROWS_AS(nct::default_grid(0.0, 1.0), DomainError);

  // The default grid passes the inverse decay check for a mid-sized Fock state
  // but not for Fock 1, whose prefactor r^2/2 - 1 outlasts the envelope.
  const auto rho = states::fock_state(6, 24, 1.0);
  CHECK(nct::boundary_ratio(nct::forward(rho, nct::default_grid(1.0, nct::phase_radius(rho))).values) <
        nct::kInverseDecayTolerance);
  const auto one = states::fock_state(1, 8, 1.0);
  const PhaseGrid base = nct::default_grid(1.0, nct::phase_radius(one));
  CHECK(nct::boundary_ratio(nct::forward(one, base).values) > nct::kInverseDecayTolerance);
  const PhaseGrid fitted = nct::fit_grid(one);
  CHECK(fitted.extent > base.extent);
  CHECK(fitted.spacing() == doctest::Approx(base.spacing()));
  const auto chi = nct::forward(one, fitted);
  CHECK(nct::boundary_ratio(chi.values) <= nct::kInverseDecayTolerance);
  CHECK((nct::inverse(chi, 8).rho.data() - one.data()).norm() < 1e-6);
}
