#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fraclp/error.hpp"
#include "fraclp/kernel.hpp"
#include "fraclp/quadrature.hpp"

using namespace fraclp;

namespace {
constexpr double pi = std::numbers::pi;

double cauchy(double x) { return 4.0 * pi / (4.0 * pi * pi + x * x); }
double poisson2(double r) { return 4.0 * pi * pi / std::pow(4.0 * pi * pi + r * r, 1.5); }
double poisson3(double r) { return 16.0 * pi * pi / std::pow(4.0 * pi * pi + r * r, 2.0); }

std::vector<double> geo(double a, double b, int n) {
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = a * std::pow(b / a, i / (n - 1.0));
  return r;
}
}  // namespace

TEST_SUITE("kernel") {
  TEST_CASE("contour matches the Cauchy closed form") {
    for (double x : geo(0.05, 50.0, 50)) {
      const auto s = kernel_contour_1d(1.0, 0.0, x);
      CHECK(std::abs(s.value - cauchy(x)) < 1e-12);
      CHECK(s.method == KernelMethod::Contour1D);
    }
    CHECK(kernel_contour_1d(1.0, 0.0, -2.0).value == doctest::Approx(cauchy(2.0)).epsilon(1e-13));
  }

  TEST_CASE("contour matches frozen high-precision quadrature") {
    // Real-axis integrals evaluated at 30 digits, substituting s = u^2 for alpha = 1/2.
    CHECK(kernel_contour_1d(0.5, 0.0, 1.0).value == doctest::Approx(0.38792921796966336247).epsilon(1e-11));
    CHECK(kernel_contour_1d(0.5, 0.25, 3.0).value == doctest::Approx(0.069564984280080327542).epsilon(1e-11));
    CHECK(kernel_contour_1d(1.5, 0.0, 0.5).value == doctest::Approx(0.28668182845041148415).epsilon(1e-11));
    CHECK(kernel_contour_1d(1.5, 0.75, 2.0).value == doctest::Approx(0.04611507511558446575).epsilon(1e-11));
    CHECK(kernel_contour_1d(1.2, 0.6, 7.0).value == doctest::Approx(0.020039901492887263175).epsilon(1e-11));
  }

  TEST_CASE("radial Bessel matches closed forms and frozen values") {
    for (double r : {0.3, 1.0, 4.0, 20.0}) {
      CHECK(kernel_radial_bessel(1.0, 0.0, 2, r).value == doctest::Approx(poisson2(r)).epsilon(1e-10));
      CHECK(kernel_radial_bessel(1.0, 0.0, 3, r).value == doctest::Approx(poisson3(r)).epsilon(1e-10));
    }
    CHECK(kernel_radial_bessel(1.5, 0.0, 2, 1.0).value == doctest::Approx(0.093743486574792847028).epsilon(1e-11));
    CHECK(kernel_radial_bessel(0.7, 0.35, 2, 2.0).value == doctest::Approx(0.13462762472023794315).epsilon(1e-11));
    CHECK(kernel_radial_bessel(1.5, 0.5, 3, 1.5).value == doctest::Approx(0.015537543234941399952).epsilon(1e-11));
  }

  TEST_CASE("direct quadrature agrees loosely") {
    const auto s = kernel_direct_1d(1.0, 0.0, 1.5);
    CHECK(s.value == doctest::Approx(cauchy(1.5)).epsilon(1e-6));
    CHECK(s.method == KernelMethod::Direct1D);
  }

  TEST_CASE("origin values") {
    CHECK(kernel_at_origin(1.0, 0.0, 1) == doctest::Approx(1.0 / pi).epsilon(1e-15));
    CHECK(kernel_at_origin(2.0, 0.0, 1) == doctest::Approx(1.0 / std::sqrt(4.0 * pi)).epsilon(1e-15));
    CHECK(kernel_at_origin(1.0, 0.0, 2) == doctest::Approx(poisson2(0.0)).epsilon(1e-14));
    CHECK(kernel_at_origin(1.0, 0.0, 3) == doctest::Approx(poisson3(0.0)).epsilon(1e-14));
    // Richardson extrapolation of the (even, smooth) contour values toward 0.
    for (double a : {0.8, 1.5}) {
      const double h = 0.01;
      const double v1 = kernel_contour_1d(a, 0.0, h).value, v2 = kernel_contour_1d(a, 0.0, 2.0 * h).value;
      const double extrap = (4.0 * v1 - v2) / 3.0;
      CHECK(std::abs(extrap - kernel_at_origin(a, 0.0, 1)) < 1e-4);
    }
    CHECK(sphere_area(0) == doctest::Approx(2.0));
    CHECK(sphere_area(1) == doctest::Approx(2.0 * pi));
    CHECK(sphere_area(2) == doctest::Approx(4.0 * pi));
  }

  TEST_CASE("rejections") {
    CHECK_THROWS_AS(kernel_contour_1d(1.0, 0.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(kernel_radial_bessel(1.0, 0.0, 2, 0.0), InvalidArgument);
    CHECK_THROWS_AS(kernel_contour_1d(2.5, 0.0, 1.0), InvalidArgument);
    KernelQuery q;
    q.method = KernelMethod::GridFFT;
    CHECK_THROWS_AS(evaluate_kernel(q), InvalidArgument);
    QuadratureBudget tight{1e-30, 2};
    CHECK_THROWS_AS(kernel_contour_1d(0.5, 0.0, 1.0, tight), QuadratureFailure);
  }

  TEST_CASE("self-similarity in t") {
    for (double a : {0.6, 1.3})
      for (double t : {0.25, 3.0})
        for (double x : {0.4, 2.0}) {
          const double lhs = kernel_contour_1d(a, 0.0, x, {}, t).value;
          const double rhs = std::pow(t, -1.0 / a) * kernel_contour_1d(a, 0.0, x * std::pow(t, -1.0 / a)).value;
          CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
        }
  }

  TEST_CASE("positivity for beta = 0") {
    for (double a : {0.5, 1.0, 1.7})
      for (double x : geo(0.01, 100.0, 30)) CHECK(kernel_contour_1d(a, 0.0, x).value > 0.0);
  }

  TEST_CASE("decay fit") {
    const auto rs = geo(100.0, 100.0 * std::pow(10.0, 1.5), 16);
    std::vector<double> vs;
    for (double r : rs) vs.push_back(cauchy(r));
    CHECK(decay_fit(rs, vs).exponent == doctest::Approx(-2.0).epsilon(0.005));
    vs.clear();
    for (double r : rs) vs.push_back(kernel_contour_1d(1.5, 0.0, r).value);
    CHECK(std::abs(decay_fit(rs, vs).exponent + 2.5) < 0.05);
    CHECK_THROWS_AS(decay_fit(std::vector<double>(rs.begin(), rs.begin() + 5), std::vector<double>(5, 1.0)),
                    InvalidArgument);
    auto neg = vs;
    neg[3] = -1.0;
    CHECK_THROWS_AS(decay_fit(rs, neg), InvalidArgument);
    const auto narrow = geo(100.0, 300.0, 10);
    CHECK_THROWS_AS(decay_fit(narrow, std::vector<double>(10, 1.0)), InvalidArgument);
  }

  TEST_CASE("weighted sup") {
    const std::vector<double> r{1.0, 2.0, 4.0}, v{1.0, -0.5, 0.1};
    CHECK(weighted_sup(r, v, 1.0) == doctest::Approx(1.0));
    CHECK(weighted_sup(r, v, 2.0) == doctest::Approx(2.0));
  }

  TEST_CASE("envelope branches meet at the knot") {
    Envelope e;
    e.alpha = 1.0;
    e.beta = 0.5;
    e.dim = 1;
    e.amplitude = 1.0;
    CHECK(e.knot() == doctest::Approx(0.1));
    CHECK(e.left_value_at_knot() == doctest::Approx(31.6228).epsilon(1e-5));
    CHECK(e.right_value_at_knot() == doctest::Approx(std::pow(10.0, 1.5)).epsilon(1e-14));
    CHECK(std::abs(e.left_value_at_knot() - e.right_value_at_knot()) < 1e-12 * e.right_value_at_knot());
    CHECK(std::abs(e.left_derivative_at_knot()) == doctest::Approx(474.34).epsilon(1e-5));
    CHECK(std::abs(e.left_derivative_at_knot() - e.right_derivative_at_knot()) <
          1e-12 * std::abs(e.right_derivative_at_knot()));
    CHECK(envelope_eval(e, 0.5) == doctest::Approx(std::pow(0.5, -1.5)));
  }

  TEST_CASE("envelope tail integral") {
    for (auto [a, b, d] : std::vector<std::tuple<double, double, int>>{{1.0, 0.5, 1}, {0.5, 0.25, 2}, {1.5, 1.0, 3}}) {
      Envelope e{a, b, d, 2.5};
      for (double r : {e.knot(), 1.0, 7.0}) {
        const auto q = quad::exp_sinh([&](double u) { return std::abs(e.derivative(r + u)) * std::pow(r + u, d); },
                                      1e-14, 10);
        CHECK(q.value == doctest::Approx(e.tail_integral(r)).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("envelope fit dominates on a denser sweep") {
    auto sweep = geo(1e-3, 1e3, 40);
    sweep.insert(sweep.begin(), 0.0);
    auto maj = [](double r) { return envelope_majorand(1.0, 0.5, 1, r); };
    const auto fit = envelope_fit(1.0, 0.5, 1, sweep, maj);
    CHECK(fit.envelope.amplitude > 0.0);
    for (double r : geo(1e-3, 1e3, 120)) CHECK(maj(r) <= fit.envelope.value(r) * (1.0 + 1e-9));
    // Smallest: the binding sample touches.
    CHECK(maj(fit.argmax) / fit.envelope.value(fit.argmax) == doctest::Approx(1.0).epsilon(1e-6));
    auto bad = [](double) { return std::nan(""); };
    CHECK_THROWS(envelope_fit(1.0, 0.5, 1, sweep, bad));
  }

  TEST_CASE("Fourier bound check against golden section") {
    const auto xi = geo(1e-9, 1e2, 600);
    for (double a : {0.5, 1.0, 1.5}) {
      const auto rep = fourier_bound_check(a, 0.0, xi);
      CHECK(rep.sup_ratio_beta <= 1.0);
      CHECK(rep.sup_ratio_beta == doctest::Approx(1.0).epsilon(0.02));
      CHECK(rep.monotone);
      const double arg = quad::golden_max([&](double x) { return x * fourier_symbol(a, 0.0, x); }, 1e-6, 10.0, 1e-14);
      CHECK(rep.argmax_exact == doctest::Approx(arg).epsilon(1e-6));
      CHECK(rep.sup_lambda_exact == doctest::Approx(arg * fourier_symbol(a, 0.0, arg)).epsilon(1e-8));
      CHECK(rep.sup_lambda_sweep <= rep.sup_lambda_exact * (1.0 + 1e-12));
    }
  }

  TEST_CASE("grid FFT cross-check, small case") {
    const auto g = kernel_cross_check_grid(1.0, 0.0, 1, 1e-5, 0.05);
    const auto pts = kernel_cross_check(1.0, 0.0, g, 0.2, 5.0);
    REQUIRE(pts.size() > 50);
    for (const auto& p : pts) {
      CHECK(std::abs(p.grid_value - p.pointwise_value) < 1e-5);
      CHECK(std::abs(p.pointwise_value - cauchy(p.r)) < 1e-12);
    }
  }

  TEST_CASE("csv output") {
    std::ostringstream os;
    std::vector<KernelTableRow> rows{{1.0, 0.0, 1, 2.0, 0.25, KernelMethod::Contour1D, 1e-16}};
    write_kernel_csv(os, rows);
    const auto s = os.str();
    CHECK(s.rfind("alpha,beta,d,r,value,method,err_estimate\n", 0) == 0);
    CHECK(s.find(to_string(KernelMethod::Contour1D)) != std::string::npos);
  }
}
