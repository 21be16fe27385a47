#pragma once

#include <random>
#include <vector>

#include "fraclp/field.hpp"

namespace fraclp::testing {

inline GridSpec grid1d(double L, int nx, double a = 0.0, double b = 1.0, int nt = 8, int channels = 1) {
  GridSpec g;
  g.dim = 1;
  g.half_width = L;
  g.nx = nx;
  g.t_begin = a;
  g.t_end = b;
  g.nt = nt;
  g.channels = channels;
  return g;
}

inline std::vector<double> random_values(std::size_t n, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline ScalarField random_scalar(const GridSpec& g, unsigned seed) {
  return ScalarField(g, random_values(g.points(), seed));
}

inline SpaceTimeField random_field(const GridSpec& g, unsigned seed) {
  return SpaceTimeField(g, random_values(static_cast<std::size_t>(g.nt) * g.points() * g.channels, seed));
}

}  // namespace fraclp::testing
