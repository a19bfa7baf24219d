#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "weylchar/dynamics.hpp"
#include "weylchar/error.hpp"
#include "weylchar/nctransform.hpp"
#include "weylchar/repr.hpp"
#include "weylchar/states.hpp"

using namespace weylchar;
using cplx = std::complex<double>;

namespace {

void check_invariants(const states::DensityMatrix& rho) {
  const auto& d = rho.data();
  CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(d.trace() - 1.0) < 1e-10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);
}

}  // namespace

TEST_CASE("density matrix validation") {
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
  bad(0, 0) = 0.5;
  CHECK_THROWS_AS(states::DensityMatrix::make(1.0, bad), ToleranceError);
  bad(1, 1) = 0.5;
  bad(0, 1) = 0.3;
  CHECK_THROWS_AS(states::DensityMatrix::make(1.0, bad), ToleranceError);
  bad(1, 0) = 0.3;
  CHECK_NOTHROW(states::DensityMatrix::make(1.0, bad));
  bad(0, 1) = bad(1, 0) = 0.8;
  CHECK_THROWS_AS(states::DensityMatrix::make(1.0, bad), ToleranceError);
  CHECK_THROWS_AS(states::DensityMatrix::make(1.0, Eigen::MatrixXcd::Zero(2, 3)), DimensionError);
  CHECK_THROWS_AS(states::DensityMatrix::make(-1.0, Eigen::MatrixXcd::Identity(1, 1)), DomainError);
}

TEST_CASE("fock states") {
  const auto rho = states::fock_state(0, 5, 1.0);
  CHECK(rho.data()(0, 0) == cplx(1.0));
  CHECK(rho.data().cwiseAbs().sum() == 1.0);
  for (int m = 0; m < 6; ++m) {
    const auto f = states::fock_state(m, 6, 0.5);
    check_invariants(f);
    CHECK(states::purity(f) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(states::fock_state(5, 5, 1.0), DomainError);
  CHECK_THROWS_AS(states::fock_state(-1, 5, 1.0), DomainError);

  // The Laguerre form of the characteristic function, m = 1.
  const auto chi = nct::char_value(states::fock_state(1, 8, 1.0), 0.6, -0.8);
  CHECK(std::abs(chi - std::exp(-0.25) * (1.0 - 0.5)) < 1e-14);
}

TEST_CASE("coherent states") {
  const auto vac = states::coherent_state(0.0, 0.0, 10, 1.0);
  CHECK((vac.data() - states::fock_state(0, 10, 1.0).data()).cwiseAbs().maxCoeff() < 1e-15);
  for (double hbar : {0.5, 1.0}) {
    const double q = 1.2, p = -0.7;
    const int dim = states::minimal_fock_dim(q, p, hbar);
    const auto rho = states::coherent_state(q, p, dim, hbar);
    check_invariants(rho);
    CHECK(states::purity(rho) == doctest::Approx(1.0).epsilon(1e-10));
    Eigen::MatrixXcd number = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) number(n, n) = n;
    CHECK(std::abs(states::expectation(rho, number) - (q * q + p * p) / (2.0 * hbar)) < 1e-8);
    const auto rep = repr::build_generators(hbar, dim);
    CHECK(std::abs(states::expectation(rho, rep.qhat) - q) < 1e-8);
    CHECK(std::abs(states::expectation(rho, rep.phat) - p) < 1e-8);
  }
  CHECK_THROWS_AS(states::coherent_state(3.0, 3.0, 8, 1.0), TruncationError);
}

TEST_CASE("tail mass") {
  CHECK(states::coherent_tail_mass(0.0, 3) == 0.0);
  // Poisson(2) mass at n >= 3 is 1 - 5 e^-2.
  CHECK(states::coherent_tail_mass(2.0, 3) == doctest::Approx(1.0 - 5.0 * std::exp(-2.0)));
  CHECK(states::coherent_tail_mass(9.0, states::minimal_fock_dim(3.0, 3.0, 1.0)) <= states::kCoherentTailTolerance);
}

TEST_CASE("p mixtures") {
  const auto single = states::p_mixture({{{0.0, 0.0, 1.0}}}, 8, 1.0);
  CHECK((single.data() - states::fock_state(0, 8, 1.0).data()).cwiseAbs().maxCoeff() < 1e-15);

  const states::PMixtureSpec two{{{1.0, 0.0, 0.5}, {-1.0, 0.0, 0.5}}};
  const auto mix = states::p_mixture(two, 24, 1.0);
  check_invariants(mix);
  CHECK(states::purity(mix) < 1.0 - 1e-3);

  // Characteristic function: Gaussian envelope times the atom phases.
  const double hbar = 0.8;
  const states::PMixtureSpec three{{{0.5, 0.8, 0.2}, {-0.7, 0.1, 0.3}, {0.2, -0.9, 0.5}}};
  const auto rho = states::p_mixture(three, 32, hbar);
  for (auto [eta, xi] : {std::pair{0.3, 0.1}, std::pair{-1.2, 2.0}, std::pair{2.5, -0.4}}) {
    cplx ref = 0.0;
    for (const auto& a : three.atoms) ref += a.weight * oracle::mixture_char_term(a.q, a.p, hbar, eta, xi);
    CHECK(std::abs(nct::char_value(rho, eta, xi) - ref) < 1e-8);
  }

  // Linear in the weights.
  const auto a = states::p_mixture({{{1.0, 0.0, 1.0}}}, 24, 1.0);
  const auto b = states::p_mixture({{{-1.0, 0.0, 1.0}}}, 24, 1.0);
  CHECK((mix.data() - 0.5 * (a.data() + b.data())).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(states::p_mixture({{{0.0, 0.0, 0.7}}}, 8, 1.0), DomainError);
  CHECK_THROWS_AS(states::p_mixture({{{0.0, 0.0, 1.2}, {1.0, 0.0, -0.2}}}, 8, 1.0), DomainError);
  CHECK_THROWS_AS(states::p_mixture({}, 8, 1.0), DomainError);
}

TEST_CASE("presets") {
  const auto ring = states::ring_preset(1.5, 12);
  CHECK(ring.atoms.size() == 12);
  double total = 0.0;
  for (const auto& a : ring.atoms) {
    CHECK(std::hypot(a.q, a.p) == doctest::Approx(1.5));
    total += a.weight;
  }
  CHECK(total == doctest::Approx(1.0));
  const auto gauss = states::gaussian_preset(0.5, -0.5, 0.3, 4);
  double mq = 0.0, mp = 0.0, wsum = 0.0;
  for (const auto& a : gauss.atoms) {
    mq += a.weight * a.q;
    mp += a.weight * a.p;
    wsum += a.weight;
  }
  CHECK(wsum == doctest::Approx(1.0));
  CHECK(mq == doctest::Approx(0.5));
  CHECK(mp == doctest::Approx(-0.5));
  check_invariants(states::p_mixture(gauss, states::minimal_fock_dim(gauss, 1.0), 1.0));
}

TEST_CASE("random densities") {
  const auto r = states::random_density(5, 16, 1.0, 3);
  check_invariants(r);
  CHECK(r.data().bottomRightCorner(11, 11).cwiseAbs().maxCoeff() == 0.0);
  CHECK(states::purity(r) < 1.0);
  CHECK((states::random_density(5, 16, 1.0, 3).data() - r.data()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((states::random_density(5, 16, 1.0, 4).data() - r.data()).cwiseAbs().maxCoeff() > 0.0);
  CHECK_THROWS_AS(states::random_density(0, 4, 1.0, 0), DomainError);
}

TEST_CASE("von Neumann step") {
  const auto rho = states::random_density(4, 12, 1.0, 9);
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(12, 12);
  CHECK((states::von_neumann_step(rho, zero, 0.7).data() - rho.data()).cwiseAbs().maxCoeff() < 1e-15);

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Random(12, 12);
  h = (h + h.adjoint()).eval();
  const auto evolved = states::von_neumann_step(rho, h, 0.9);
  check_invariants(evolved);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> a(rho.data()), b(evolved.data());
  CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);

  // Harmonic oscillator: the coherent center rotates clockwise by omega dt.
  const double hbar = 1.0, dt = 0.6;
  const int dim = 40;
  const auto c = states::coherent_state(1.0, 0.0, dim, hbar);
  const Eigen::MatrixXcd ham = dyn::hamiltonian_matrix(dyn::HamiltonianSpec::harmonic(1.0, 1.0), hbar, dim);
  const auto moved = states::von_neumann_step(c, ham, dt);
  const auto rep = repr::build_generators(hbar, dim);
  CHECK(states::expectation(moved, rep.qhat) == doctest::Approx(std::cos(dt)).epsilon(1e-8));
  CHECK(states::expectation(moved, rep.phat) == doctest::Approx(-std::sin(dt)).epsilon(1e-8));

  CHECK_THROWS_AS(states::von_neumann_step(rho, Eigen::MatrixXcd::Zero(3, 3), 0.1), DimensionError);
  Eigen::MatrixXcd skew = zero;
  skew(0, 1) = 1.0;
  CHECK_THROWS_AS(states::von_neumann_step(rho, skew, 0.1), DomainError);
}
