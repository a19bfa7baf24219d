#include <doctest.h>

#include <cmath>
#include <numbers>

#include "weylchar/climit.hpp"
#include "weylchar/error.hpp"
#include "weylchar/observables.hpp"
#include "weylchar/repr.hpp"

using namespace weylchar;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

double sup(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

obs::ObservableFunction sample(double hbar, const PhaseGrid& grid, const std::function<cplx(double, double)>& f) {
  obs::ObservableFunction out{hbar, grid, Eigen::MatrixXcd(grid.points, grid.points)};
  for (int i = 0; i < grid.points; ++i)
    for (int j = 0; j < grid.points; ++j) out.values(i, j) = f(grid.coord(i), grid.coord(j));
  return out;
}

Eigen::MatrixXcd number_operator(int dim) {
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = k;
  return n;
}

}  // namespace

TEST_CASE("from_operator examples") {
  const double hbar = 1.0;
  const PhaseGrid grid = PhaseGrid::make(10.0, 48);
  const auto zero = obs::from_operator(Eigen::MatrixXcd::Zero(8, 8), hbar, grid);
  CHECK(sup(zero.values) == 0.0);

  const auto rho = states::random_density(4, 16, hbar, 2);
  const auto f = obs::from_operator(rho.data(), hbar, grid);
  CHECK(sup(f.values - nct::forward(rho, grid).values.conjugate()) < 1e-14);
  CHECK(obs::reality_error(grid, f.values) < 1e-12);

  const auto id = obs::from_operator(Eigen::MatrixXcd::Identity(16, 16), hbar, grid);
  CHECK(std::abs(id.values(grid.origin(), grid.origin()) - 16.0) < 1e-12);
  CHECK(std::abs(id.values(grid.origin() + 8, grid.origin())) < 0.2 * 16.0);

  Eigen::MatrixXcd skew = Eigen::MatrixXcd::Zero(4, 4);
  skew(0, 1) = 1.0;
  CHECK(obs::reality_error(grid, obs::from_operator(skew, hbar, grid).values) > 1e-3);
}

TEST_CASE("to_operator examples and round trips") {
  const double hbar = 1.0;
  const PhaseGrid grid = PhaseGrid::make(16.0, 128);
  const int dim = 16;
  // The identity's image decays once |alpha|^2 exceeds about 4N.
  const auto id = obs::from_operator(Eigen::MatrixXcd::Identity(dim, dim), hbar, grid);
  CHECK(sup(obs::to_operator(id, dim) - Eigen::MatrixXcd::Identity(dim, dim)) < 1e-6);

  const auto zero = sample(hbar, grid, [](double, double) { return cplx(0.0); });
  CHECK(sup(obs::to_operator(zero, dim)) == 0.0);

  // Gaussian-mollified position: f = F_q * exp(-eps r^2) is a Gaussian average
  // of displaced copies of q, which is q again away from the truncation edge.
  const auto rep = repr::build_generators(hbar, 40);
  auto fq = obs::from_operator(rep.qhat, hbar, grid);
  for (int i = 0; i < grid.points; ++i)
    for (int j = 0; j < grid.points; ++j) {
      const double r2 = grid.coord(i) * grid.coord(i) + grid.coord(j) * grid.coord(j);
      fq.values(i, j) *= std::exp(-0.07 * r2);
    }
  const Eigen::MatrixXcd q_back = obs::to_operator(fq, 40);
  CHECK(sup(q_back.topLeftCorner(6, 6) - rep.qhat.topLeftCorner(6, 6)) < 1e-4);
  CHECK(sup(q_back - q_back.adjoint()) < 1e-8);

  const auto wide = sample(hbar, PhaseGrid::make(3.0, 32), [](double, double) { return cplx(1.0); });
  CHECK_THROWS_AS(obs::to_operator(wide, 8), DecayError);
}

TEST_CASE("mean values") {
  const double hbar = 1.0;
  const PhaseGrid grid = PhaseGrid::make(16.0, 128);
  const int dim = 16;
  const auto chi2 = nct::forward(states::fock_state(2, dim, hbar), grid);
  const auto fn = obs::from_operator(number_operator(dim), hbar, grid);
  CHECK(obs::mean(fn, chi2).value == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(obs::mean(fn, chi2).imag_residue < 1e-8);
  const auto fid = obs::from_operator(Eigen::MatrixXcd::Identity(dim, dim), hbar, grid);
  CHECK(obs::mean(fid, chi2).value == doctest::Approx(1.0).epsilon(1e-8));

  const auto chi = nct::forward(states::random_density(4, dim, hbar, 8), grid);
  const auto f1 = sample(hbar, grid, [](double e, double x) { return std::exp(-(e * e + x * x) / 4.0) * cplx(1.0, 0.2 * e); });
  const auto f2 = sample(hbar, grid, [](double e, double x) { return std::exp(-(e * e + x * x) / 6.0) * cplx(x * x, 0.0); });
  auto comb = f1;
  comb.values = 2.0 * f1.values - 0.5 * f2.values;
  CHECK(obs::mean(comb, chi).value ==
        doctest::Approx(2.0 * obs::mean(f1, chi).value - 0.5 * obs::mean(f2, chi).value).epsilon(1e-12));

  auto other = f1;
  other.hbar = 0.5;
  CHECK_THROWS_AS(obs::mean(other, chi), DomainError);
  CHECK_THROWS_AS(obs::mean(sample(hbar, PhaseGrid::make(8.0, 32), [](double, double) { return cplx(0.0); }), chi),
                  DimensionError);
}

TEST_CASE("quadrature moments") {
  for (double hbar : {0.5, 1.0}) {
    const PhaseGrid grid = PhaseGrid::make(12.0 * std::sqrt(hbar), 128);
    const double q0 = 0.8, p0 = -1.1;
    const auto m = obs::quadrature_moments(nct::forward(states::coherent_state(q0, p0, 40, hbar), grid));
    CHECK(std::abs(m.mean_q - q0) < 1e-6);
    CHECK(std::abs(m.mean_p - p0) < 1e-6);
    CHECK(std::abs(m.var_q - hbar / 2.0) < 1e-6);
    CHECK(std::abs(m.var_p - hbar / 2.0) < 1e-6);
    CHECK(std::abs(m.qp_sym - q0 * p0) < 1e-6);
    CHECK(m.imag_residue < 1e-8);

    for (int k = 0; k <= 3; ++k) {
      const auto f = obs::quadrature_moments(nct::forward(states::fock_state(k, 24, hbar), grid));
      CHECK(std::abs(f.mean_q) < 1e-10);
      CHECK(std::abs(f.mean_p) < 1e-10);
      CHECK(std::abs(f.q2 - hbar * (k + 0.5)) < 1e-6);
      CHECK(std::abs(f.p2 - hbar * (k + 0.5)) < 1e-6);
    }
  }
}

TEST_CASE("moment symmetry and orders") {
  const PhaseGrid grid = PhaseGrid::make(12.0, 96);
  const auto chi = nct::forward(states::coherent_state(0.7, 0.3, 32, 1.0), grid);
  auto flipped = chi;
  for (int i = 1; i < grid.points; ++i) flipped.values.row(i) = chi.values.row(grid.mirror(i));
  const auto a = obs::quadrature_moments(chi, 1);
  const auto b = obs::quadrature_moments(flipped, 1);
  CHECK(b.mean_q == doctest::Approx(-a.mean_q).epsilon(1e-8));
  CHECK(b.mean_p == doctest::Approx(a.mean_p).epsilon(1e-8));
  CHECK_THROWS_AS(obs::quadrature_moments(chi, 3), DomainError);
}

TEST_CASE("stencils agree with spectral derivatives") {
  const PhaseGrid grid = PhaseGrid::make(12.0, 256);
  const auto chi = nct::forward(states::random_density(4, 24, 1.0, 21), grid);
  const auto spectral = obs::quadrature_moments(chi);
  const auto stencil = obs::stencil_moments(chi);
  CHECK(std::abs(spectral.mean_q - stencil.mean_q) < 1e-6);
  CHECK(std::abs(spectral.mean_p - stencil.mean_p) < 1e-6);
  CHECK(std::abs(spectral.q2 - stencil.q2) < 1e-6);
  CHECK(std::abs(spectral.p2 - stencil.p2) < 1e-6);
  CHECK(std::abs(spectral.qp_sym - stencil.qp_sym) < 1e-6);
}

TEST_CASE("moments need a decaying characteristic function") {
  const auto chi = nct::forward(states::fock_state(3, 16, 1.0), PhaseGrid::make(3.0, 32));
  CHECK_THROWS_AS(obs::quadrature_moments(chi), DecayError);
}

TEST_CASE("uncertainty products") {
  const PhaseGrid grid = PhaseGrid::make(12.0, 128);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto m = obs::quadrature_moments(nct::forward(states::random_density(5, 32, 1.0, seed), grid));
    CHECK(m.var_q * m.var_p >= 0.25 * (1.0 - 1e-6));
  }
}

TEST_CASE("classical observables") {
  // exp(i eta q0) is a spike at (q0, 0).
  const PhaseGrid grid = PhaseGrid::make(20.0, 64);
  const PhaseGrid out = PhaseGrid::make(2.0, 32, Axes::q_p);
  const double q0 = 0.75;
  const auto spike = obs::classical_observable(
      {grid, sample(1.0, grid, [&](double e, double) { return std::polar(1.0, e * q0); }).values}, out);
  Eigen::Index a, b;
  spike.values.maxCoeff(&a, &b);
  CHECK(out.coord(static_cast<int>(a)) == doctest::Approx(q0).epsilon(0.1));
  CHECK(std::abs(out.coord(static_cast<int>(b))) < out.spacing());

  // A narrow normalized bump at the origin gives an almost constant function.
  const double s = 0.02;
  const PhaseGrid fine = PhaseGrid::make(0.2, 64);
  const auto bump = obs::classical_observable(
      {fine, sample(1.0, fine, [&](double e, double x) {
         return cplx(2.0 * kPi / (s * s) * std::exp(-(e * e + x * x) / (2.0 * s * s)));
       }).values},
      out);
  CHECK(bump.values.maxCoeff() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(bump.values.minCoeff() > 0.99);

  const cl::ClassicalChar bad{grid, sample(1.0, grid, [](double e, double) { return cplx(0.0, std::exp(-e * e)); }).values};
  CHECK_THROWS_AS(obs::classical_observable(bad, out), DomainError);
}

TEST_CASE("classical means: density route against the direct integral") {
  // F with A_F(q,p) = q exp(-s^2 (q^2 + p^2)/2) on a two-atom limit.
  const double s = 0.3;
  const PhaseGrid grid = PhaseGrid::make(20.0, 256);
  const cl::ClassicalChar f{grid, sample(1.0, grid, [&](double e, double x) {
                                    return cplx(0.0, 2.0 * kPi * e / (s * s * s * s)) *
                                           std::exp(-(e * e + x * x) / (2.0 * s * s));
                                  }).values};
  const states::PMixtureSpec spec{{{1.0, 0.5, 0.6}, {-0.5, -1.0, 0.4}}};
  const auto cc = cl::rescaled_char(cl::mixture_family(spec), 0.25, grid);
  const PhaseGrid out = PhaseGrid::make(4.0, 64, Axes::q_p);
  const auto observable = obs::classical_observable(f, out);
  const auto density = cl::bochner_invert(cc, out);
  for (int a = 0; a < out.points; ++a) {
    const double q = out.coord(a);
    CHECK(observable.values(a, out.origin()) == doctest::Approx(q * std::exp(-0.5 * s * s * q * q)).epsilon(1e-8).scale(1.0));
  }
  const double via_density = obs::classical_mean(observable, density);
  const double direct = obs::classical_mean_direct(f, cc);
  CHECK(std::abs(via_density - direct) < 1e-6);
  CHECK(direct == doctest::Approx(0.6 * 1.0 - 0.4 * 0.5).epsilon(0.05));
}
