#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "weylchar/error.hpp"
#include "weylchar/hw_group.hpp"

using namespace weylchar;
using hw::GroupElement;

namespace {

GroupElement random_element(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> eta(n), xi(n);
  for (int j = 0; j < n; ++j) {
    eta[j] = u(rng);
    xi[j] = u(rng);
  }
  return GroupElement::make(u(rng), eta, xi);
}

void check_close(const GroupElement& a, const GroupElement& b, double tol) {
  REQUIRE(a.n() == b.n());
  CHECK(std::abs(a.s - b.s) <= tol * std::max(1.0, std::abs(a.s)));
  for (int j = 0; j < a.n(); ++j) {
    CHECK(std::abs(a.eta[j] - b.eta[j]) <= tol * std::max(1.0, std::abs(a.eta[j])));
    CHECK(std::abs(a.xi[j] - b.xi[j]) <= tol * std::max(1.0, std::abs(a.xi[j])));
  }
}

}  // namespace

TEST_CASE("symplectic form contraction") {
  const std::vector<double> one{1.0}, zero{0.0};
  CHECK(hw::symplectic_form(one, zero, zero, one) == -1.0);
  CHECK(hw::symplectic_form(zero, one, one, zero) == 1.0);
  const std::vector<double> v{0.7, -1.2};
  const std::vector<double> w{2.5, 0.1};
  CHECK(hw::symplectic_form(v, w, v, w) == 0.0);
  CHECK_THROWS_AS(hw::symplectic_form(one, v, one, zero), DimensionError);
}

TEST_CASE("multiplication law") {
  const auto e = GroupElement::identity(1);
  const auto g = GroupElement::single(0.4, -1.0, 2.0);
  CHECK(hw::multiply(e, g) == g);
  CHECK(hw::multiply(g, e) == g);

  const auto prod = hw::multiply(GroupElement::single(0, 1, 0), GroupElement::single(0, 0, 1));
  CHECK(prod.s == doctest::Approx(-0.5));
  CHECK(prod.eta[0] == 1.0);
  CHECK(prod.xi[0] == 1.0);

  CHECK_THROWS_AS(hw::multiply(GroupElement::identity(1), GroupElement::identity(2)), DimensionError);
}

TEST_CASE("inverse") {
  const auto g = GroupElement::single(1, 2, 3);
  const auto gi = hw::inverse(g);
  CHECK(gi == GroupElement::single(-1, -2, -3));
  CHECK(hw::inverse(gi) == g);
  CHECK(hw::inverse(GroupElement::identity(1)) == GroupElement::identity(1));
  CHECK(hw::multiply(g, gi) == GroupElement::identity(1));
  CHECK(hw::multiply(gi, g) == GroupElement::identity(1));
}

TEST_CASE("element validation") {
  CHECK_THROWS_AS(GroupElement::make(0, {}, {}), DimensionError);
  CHECK_THROWS_AS(GroupElement::make(0, {1.0}, {1.0, 2.0}), DimensionError);
  CHECK_THROWS_AS(GroupElement::single(NAN, 0, 0), DomainError);
  CHECK_THROWS_AS(GroupElement::single(0, INFINITY, 0), DomainError);
}

TEST_CASE("randomized group properties") {
  std::mt19937_64 rng(42);
  for (int n : {1, 2, 3}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto a = random_element(rng, n);
      const auto b = random_element(rng, n);
      const auto c = random_element(rng, n);
      check_close(hw::multiply(hw::multiply(a, b), c), hw::multiply(a, hw::multiply(b, c)), 1e-12);
      const double commutator = hw::multiply(a, b).s - hw::multiply(b, a).s;
      CHECK(commutator == doctest::Approx(hw::symplectic_form(a, b)).epsilon(1e-12).scale(1.0));
      check_close(hw::multiply(a, hw::inverse(a)), GroupElement::identity(n), 1e-15);
    }
  }
}

TEST_CASE("haar weight") {
  const double tau = 2.0 * std::numbers::pi;
  CHECK(hw::haar_weight(1.0, 1) == doctest::Approx(1.0 / (tau * tau)));
  CHECK(hw::haar_weight(1.0, 2) == doctest::Approx(1.0 / (tau * tau * tau)));
  CHECK(hw::haar_weight(0.5, 1) == doctest::Approx(1.0 / (tau * tau)));
  CHECK(hw::haar_weight(0.5, 2) == doctest::Approx(1.0 / (tau * tau * tau * 0.5)));
  CHECK_THROWS_AS(hw::haar_weight(0.0, 1), DomainError);
  CHECK_THROWS_AS(hw::haar_weight(-1.0, 1), DomainError);
}
