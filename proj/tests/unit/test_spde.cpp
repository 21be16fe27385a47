#include <doctest.h>

#include <cmath>

#include "fraclp/error.hpp"
#include "fraclp/families.hpp"
#include "fraclp/spde.hpp"
#include "helpers.hpp"

using namespace fraclp;
using namespace fraclp::testing;

namespace {
SpaceTimeField bump_forcing(int channels) {
  FamilySpec fam;
  fam.generator = FamilySpec::Generator::SmoothBump;
  fam.channels = channels;
  fam.support_begin = 0.0;
  fam.support_end = 1.0;
  auto g = grid1d(8.0, 64, 0.0, 1.0, 32, channels);
  return TestField(fam, 0).sample(g);
}
}  // namespace

TEST_SUITE("spde") {
  TEST_CASE("noise increments") {
    const NoiseSpec n{3, 11, 0.01};
    const auto a = n.increments(5, 2000), b = n.increments(5, 2000), c = n.increments(6, 2000);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(a.size() == 6000);
    double m2 = 0.0;
    for (double x : a) m2 += x * x / a.size();
    CHECK(m2 == doctest::Approx(0.01).epsilon(0.05));
    CHECK_THROWS_AS((NoiseSpec{0, 1, 0.1}).validate(), InvalidArgument);
  }

  TEST_CASE("ensemble statistics") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const auto s = ensemble(v);
    CHECK(s.mean == 2.5);
    CHECK(s.count == 4);
    CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(ensemble(v, 2).mean == 1.5);
  }

  TEST_CASE("zero forcing gives zero paths") {
    const auto g = grid1d(8.0, 32, 0.0, 1.0, 16, 2);
    const auto f = SpaceTimeField::zeros(g);
    const auto r = simulate_stochastic_convolution(f, 1.0, NoiseSpec{2, 1, g.dt()}, 10);
    for (double v : r.l2sq_final) CHECK(v == 0.0);
    const auto ito = ito_isometry_check(r, f, 1.0);
    CHECK(ito.oracle == 0.0);
    CHECK(ito.mc.mean == 0.0);
    const auto e = energy_inequality_check(r, f, 1.0, 2.0);
    CHECK(e.rhs == 0.0);
    for (double x : e.ratios) CHECK(x == 0.0);
  }

  TEST_CASE("simulation is reproducible") {
    const auto f = bump_forcing(2);
    const NoiseSpec n{2, 7, f.spec().dt()};
    const auto a = simulate_stochastic_convolution(f, 1.0, n, 20), b = simulate_stochastic_convolution(f, 1.0, n, 20);
    CHECK(a.l2sq_final == b.l2sq_final);
    CHECK(a.energy == b.energy);
  }

  TEST_CASE("channel count must match the noise") {
    const auto f = bump_forcing(2);
    CHECK_THROWS_AS(simulate_stochastic_convolution(f, 1.0, NoiseSpec{3, 1, f.spec().dt()}, 4), InvalidArgument);
  }

  TEST_CASE("isometry and energy on a moderate ensemble") {
    const auto f = bump_forcing(4);
    const NoiseSpec n{4, 42, f.spec().dt()};
    const auto r = simulate_stochastic_convolution(f, 1.0, n, 1200);
    const auto ito = ito_isometry_check(r, f, 1.0);
    CHECK(ito.pass);
    CHECK_FALSE(ito.small_ensemble);
    CHECK(ito.oracle_continuous > 0.0);
    CHECK(ito.relative_error < 0.1);
    for (double p : {2.0, 4.0}) {
      const auto e = energy_inequality_check(r, f, 1.0, p);
      CHECK(e.ensemble_sizes == std::vector<int>{300, 600, 1200});
      for (double x : e.ratios) CHECK(std::isfinite(x));
      CHECK(e.stable);
    }
    const auto e2 = energy_inequality_check(r, f, 1.0, 2.0);
    CHECK(std::abs(e2.z_exact) <= 3.0);
    // Doubling the ensemble shrinks the standard error by 1/sqrt(2).
    const double se_ratio = ensemble(r.l2sq_final).std_error / ensemble(r.l2sq_final, 600).std_error;
    CHECK(std::abs(se_ratio * std::sqrt(2.0) - 1.0) < 0.3);
  }
}
