#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "leray/errors.hpp"
#include "leray/numeric.hpp"
#include "leray/poiseuille.hpp"

using namespace leray;

namespace {

double quadrature_flux(const PoiseuilleProfile& p) {
  return gauss_integrate([&](double y) { return p.value(y); }, 0.0, p.width(),
                         5);
}

}  // namespace

TEST_SUITE("poiseuille") {

TEST_CASE("closed-form point values") {
  CHECK(PoiseuilleProfile(1.0, 0.0, ProfileSide::kRight).value(0.3) ==
        doctest::Approx(1.0).epsilon(1e-14));
  // (6/12)[6*0.25 + 1] = 1.25
  CHECK(PoiseuilleProfile(1.0, 6.0, ProfileSide::kRight).value(0.5) ==
        doctest::Approx(1.25).epsilon(1e-14));
  PoiseuilleProfile left(1.0, 0.0, ProfileSide::kLeft, 2.0);
  for (double y : {0.1, 0.9, 1.7})
    CHECK(left.value(y) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("pressure constants") {
  CHECK(PoiseuilleProfile(1.0, 0.0, ProfileSide::kRight).pressure_constant() ==
        doctest::Approx(0.0));
  CHECK(PoiseuilleProfile(1.0, 6.0, ProfileSide::kRight).pressure_constant() ==
        doctest::Approx(6.0).epsilon(1e-14));
  CHECK(PoiseuilleProfile(1.0, kAlphaInfinity, ProfileSide::kRight)
            .pressure_constant() == doctest::Approx(12.0).epsilon(1e-14));
  // Left end: C_L = 12 alpha phi / (c0^2 (6 + c0 alpha)); for
  // phi=1, alpha=6, c0=2 this is 72/(4*18) = 1.
  CHECK(PoiseuilleProfile(1.0, 6.0, ProfileSide::kLeft, 2.0)
            .pressure_constant() == doctest::Approx(1.0).epsilon(1e-14));
  // No-slip limit on the left: 12 phi / c0^3.
  CHECK(PoiseuilleProfile(1.0, kAlphaInfinity, ProfileSide::kLeft, 2.0)
            .pressure_constant() == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("flux normalization and Robin residuals over the parameter grid") {
  const std::vector<double> phis = {0.1, 1.0, 5.0};
  const std::vector<double> alphas = {0.0, 1.0, 6.0, 1e4, kAlphaInfinity};
  const std::vector<double> widths = {0.5, 1.0, 2.0};
  for (double phi : phis) {
    for (double alpha : alphas) {
      PoiseuilleProfile right(phi, alpha, ProfileSide::kRight);
      CHECK(std::abs(quadrature_flux(right) - phi) <= 1e-12);
      const double a_eff = alpha;
      if (!right.no_slip()) {
        CHECK(std::abs(right.deriv(0.0) - a_eff * right.value(0.0)) <= 1e-10);
        CHECK(std::abs(right.deriv(1.0) + a_eff * right.value(1.0)) <= 1e-10);
      } else {
        CHECK(std::abs(right.value(0.0)) <= 1e-14);
        CHECK(std::abs(right.value(1.0)) <= 1e-14);
      }
      for (double c0 : widths) {
        PoiseuilleProfile left(phi, alpha, ProfileSide::kLeft, c0);
        CHECK(std::abs(quadrature_flux(left) - phi) <= 1e-12);
        if (!left.no_slip()) {
          CHECK(std::abs(left.deriv(0.0) - alpha * left.value(0.0)) <= 1e-10);
          CHECK(std::abs(left.deriv(c0) + alpha * left.value(c0)) <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("no-slip sentinel equals the parabola") {
  PoiseuilleProfile p(2.0, kAlphaInfinity, ProfileSide::kRight);
  for (double y : {0.0, 0.2, 0.5, 0.8, 1.0})
    CHECK(std::abs(p.value(y) - 6.0 * 2.0 * y * (1.0 - y)) <= 1e-12);
  PoiseuilleProfile pl(1.5, kAlphaInfinity, ProfileSide::kLeft, 0.5);
  const double c0 = 0.5;
  for (double y : {0.0, 0.1, 0.3, 0.5})
    CHECK(std::abs(pl.value(y) - 6.0 * 1.5 * y * (c0 - y) / (c0 * c0 * c0)) <=
          1e-12);
}

TEST_CASE("profile is the quadratic it claims: -P'' constant") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uy(0.05, 0.95);
  PoiseuilleProfile p(3.0, 4.0, ProfileSide::kRight);
  for (int k = 0; k < 5; ++k) {
    const double y = uy(rng);
    const double h = 1e-4;
    const double fd2 =
        (p.value(y + h) - 2.0 * p.value(y) + p.value(y - h)) / (h * h);
    CHECK(-fd2 == doctest::Approx(p.pressure_constant()).epsilon(1e-5));
  }
  CHECK(std::abs(-p.second_deriv() - p.pressure_constant()) <= 1e-12);
}

TEST_CASE("derivative bound: ratio follows 6(1+a)/(6+a), bounded by 6") {
  CHECK(derivative_bound_check(
            PoiseuilleProfile(1.0, 0.0, ProfileSide::kRight))
            .max_abs_deriv == 0.0);

  // Frozen oracle values of 6(1+a)/(6+a) over the sweep.
  const std::vector<double> alphas = {0.01, 1.0, 100.0, 1e4};
  const std::vector<double> frozen = {1.0083194675540764, 12.0 / 7.0,
                                      606.0 / 106.0, 60006.0 / 10006.0};
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    PoiseuilleProfile p(1.0, alphas[i], ProfileSide::kRight);
    const DerivativeBoundReport rep = derivative_bound_check(p);
    const double analytic = 6.0 * (1.0 + alphas[i]) / (6.0 + alphas[i]);
    CHECK(rep.ratio == doctest::Approx(analytic).epsilon(1e-12));
    CHECK(rep.ratio == doctest::Approx(frozen[i]).epsilon(1e-9));
    CHECK(rep.ratio < 6.0);
  }

  // Linearity in phi: doubling the flux doubles max |P'| exactly.
  PoiseuilleProfile p1(1.3, 7.0, ProfileSide::kRight);
  PoiseuilleProfile p2(2.6, 7.0, ProfileSide::kRight);
  CHECK(p2.max_abs_deriv() == doctest::Approx(2.0 * p1.max_abs_deriv())
                                  .epsilon(1e-14));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(PoiseuilleProfile(1.0, -0.5, ProfileSide::kRight),
                  ParameterError);
  CHECK_THROWS_AS(PoiseuilleProfile(1.0, 1.0, ProfileSide::kRight, 2.0),
                  ParameterError);
  CHECK_THROWS_AS(PoiseuilleProfile(1.0, 1.0, ProfileSide::kLeft, -1.0),
                  ParameterError);
  PoiseuilleProfile p(1.0, 1.0, ProfileSide::kRight);
  CHECK_THROWS_AS(p.value(1.5), DomainError);
  CHECK_THROWS_AS(p.value(-0.2), DomainError);
}

}  // TEST_SUITE
