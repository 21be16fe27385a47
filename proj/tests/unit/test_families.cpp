#include <doctest.h>

#include <cmath>

#include "fraclp/error.hpp"
#include "fraclp/families.hpp"

using namespace fraclp;

TEST_SUITE("families") {
  TEST_CASE("generator names round trip") {
    for (auto g : {FamilySpec::Generator::SmoothBump, FamilySpec::Generator::RandomBandlimited,
                   FamilySpec::Generator::SingleMode, FamilySpec::Generator::TensorSeparable})
      CHECK(parse_generator(to_string(g)) == g);
    CHECK_THROWS_AS(parse_generator("gaussian"), InvalidArgument);
  }

  TEST_CASE("fields are deterministic in (seed, sample)") {
    FamilySpec fam;
    fam.channels = 2;
    const auto g = family_grid(fam, 64, 32);
    const auto a = TestField(fam, 3).sample(g), b = TestField(fam, 3).sample(g);
    CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    const auto c = TestField(fam, 4).sample(g);
    CHECK_FALSE(std::equal(a.values().begin(), a.values().end(), c.values().begin()));
    auto fam2 = fam;
    fam2.seed = 99;
    const auto d = TestField(fam2, 3).sample(g);
    CHECK_FALSE(std::equal(a.values().begin(), a.values().end(), d.values().begin()));
  }

  TEST_CASE("support, periodicity and nontriviality") {
    for (auto gen : {FamilySpec::Generator::SmoothBump, FamilySpec::Generator::RandomBandlimited,
                     FamilySpec::Generator::SingleMode, FamilySpec::Generator::TensorSeparable}) {
      FamilySpec fam;
      fam.generator = gen;
      fam.dim = gen == FamilySpec::Generator::TensorSeparable ? 2 : 1;
      const TestField f(fam, 0);
      for (double t : {0.0, 0.05, 0.1, 0.9, 0.95})
        for (double x : {-3.0, 0.0, 2.5}) CHECK(f.value(t, {x, 0.3, 0.0}, 0) == 0.0);
      double mx = 0.0;
      for (double x : {-3.0, -1.0, 0.0, 0.7, 2.5}) {
        const double v = f.value(0.5, {x, 0.3, 0.0}, 0);
        mx = std::max(mx, std::abs(v));
        CHECK(f.value(0.5, {x + 16.0, 0.3, 0.0}, 0) == doctest::Approx(v).epsilon(1e-12));
      }
      CHECK(mx > 0.0);
    }
  }

  TEST_CASE("sampling agrees with pointwise values") {
    FamilySpec fam;
    const TestField f(fam, 1);
    const auto g = family_grid(fam, 64, 16);
    const auto s = f.sample(g);
    for (int i = 0; i < g.nt; i += 3)
      for (int j = 0; j < g.nx; j += 7) CHECK(s.at(i, j, 0) == f.value(g.t(i), {g.x(j), 0.0, 0.0}, 0));
  }

  TEST_CASE("window and preconditions") {
    FamilySpec fam;
    const auto g = family_grid(fam, 64, 16);
    CHECK(g.t_begin == doctest::Approx(0.0));
    CHECK(g.t_end == doctest::Approx(1.0));
    const TestField f(fam, 0);
    auto wrong = g;
    wrong.half_width = 4.0;
    CHECK_THROWS_AS(f.sample(wrong), InvalidArgument);
    CHECK_THROWS_AS(f.sample(family_grid(fam, 16, 16)), InvalidArgument);  // bandlimit above half Nyquist
    // f(2 x) on the half-period grid doubles the bandlimit and the Nyquist together.
    auto half = family_grid(fam, 32, 16);
    half.half_width = 4.0;
    CHECK_NOTHROW(f.sample(half, 2.0));
    auto wide = family_grid(fam, 32, 16);
    wide.half_width = 16.0;
    CHECK_NOTHROW(f.sample(wide, 0.5));
    half.nx = 16;
    CHECK_THROWS_AS(f.sample(half, 2.0), InvalidArgument);
    fam.support_end = 0.05;
    CHECK_THROWS_AS(fam.validate(), InvalidArgument);
  }
}
