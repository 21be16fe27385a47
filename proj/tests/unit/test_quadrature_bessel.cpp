#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fraclp/kernel.hpp"
#include "fraclp/quadrature.hpp"

using namespace fraclp;

namespace {
constexpr double pi = std::numbers::pi;

// Independent oracle: the ascending series in extended precision (it cancels badly for z ~ 15).
double bessel_series(double n, double z) {
  long double sum = 0.0L;
  const long double ln = n, lz = z;
  for (int m = 0; m < 300; ++m) {
    const long double term =
        std::exp((2 * m + ln) * std::log(lz / 2.0L) - std::lgamma(m + 1.0L) - std::lgamma(m + ln + 1.0L));
    sum += (m % 2 ? -term : term);
  }
  return static_cast<double>(sum);
}
}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    for (int n : {2, 4, 8, 16, 32}) {
      const auto& rule = quad::gauss_legendre(n);
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 2 * n - 2);
      CHECK(s == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
    }
  }

  TEST_CASE("double-exponential rules") {
    const auto e = quad::exp_sinh([](double x) { return std::exp(-x) / std::sqrt(x); });
    CHECK(e.converged);
    CHECK(e.value == doctest::Approx(std::sqrt(pi)).epsilon(1e-13));
    const auto t = quad::tanh_sinh([](double x) { return std::sqrt(x); }, 0.0, 1.0);
    CHECK(t.value == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    const auto l = quad::tanh_sinh([](double x) { return std::log(x); }, 0.0, 1.0);
    CHECK(l.value == doctest::Approx(-1.0).epsilon(1e-12));
  }

  TEST_CASE("composite Gauss and golden section") {
    CHECK(quad::gauss_composite([](double x) { return std::sin(x); }, 0.0, pi, 8, 8) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(quad::golden_max([](double x) { return -(x - 0.3) * (x - 0.3); }, -1.0, 2.0) ==
          doctest::Approx(0.3).epsilon(1e-8));
  }
}

TEST_SUITE("bessel") {
  TEST_CASE("normalization and closed forms") {
    CHECK(bessel_j(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bessel_j(0.5, pi / 2.0) == doctest::Approx(2.0 / pi).epsilon(1e-13));
    for (double z : {0.3, 2.0, 17.0, 45.0})
      CHECK(bessel_j(0.5, z) == doctest::Approx(std::sqrt(2.0 / (pi * z)) * std::sin(z)).epsilon(1e-11));
  }

  TEST_CASE("first zero of J0") {
    CHECK(std::abs(bessel_j(0.0, 2.40482555769577276862)) < 1e-8);
  }

  TEST_CASE("agreement with the ascending series") {
    for (double n : {0.0, 0.25, 1.0, 1.5, 2.0})
      for (double z : {0.1, 1.0, 4.0, 9.5, 15.0}) CHECK(bessel_j(n, z) == doctest::Approx(bessel_series(n, z)).epsilon(1e-10));
  }

  TEST_CASE("frozen high-precision values") {
    CHECK(bessel_j(0.0, 1.0) == doctest::Approx(0.76519768655796655145).epsilon(1e-13));
    CHECK(bessel_j(0.3, 5.5) == doctest::Approx(-0.15791538292094961954).epsilon(1e-12));
    CHECK(bessel_j(1.5, 12.0) == doctest::Approx(-0.20466344849652968759).epsilon(1e-12));
    CHECK(bessel_j(2.0, 40.0) == doctest::Approx(-0.0010649746823580395933).epsilon(1e-9));
  }

  TEST_CASE("continuous across the asymptotic switch") {
    for (double n : {0.0, 0.5, 1.0, 2.0}) {
      const double below = bessel_j(n, std::nextafter(kBesselSwitch, 0.0));
      const double above = bessel_j(n, kBesselSwitch);
      CHECK(std::abs(below - above) < 1e-9);
    }
  }
}
