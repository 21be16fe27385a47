#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <type_traits>
#include <vector>

namespace fraclp::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point Gauss-Legendre rule (thread safe).
const GaussRule& gauss_legendre(int n);

template <class T>
struct DeResult {
  T value{};
  double error = 0.0;         // |S_level - S_{level-1}|
  double magnitude = 0.0;     // trapezoid sum of |terms|, the scale errors are judged against
  int level = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

// Trapezoid sums of a double-exponential substitution with step halving.
// `point(t, x, w)` maps the abscissa t to a node x and weight w; it returns
// false when the node is not representable.
template <class F, class Map>
auto de_integrate(F&& f, Map&& point, double t_cap, double rel_tol, int max_level) {
  using T = std::decay_t<decltype(f(1.0))>;
  DeResult<T> r;
  constexpr double kTiny = 1e-300;
  T sum{};
  double abs_sum = 0.0;

  auto accumulate_side = [&](double start, double step, int sign) {
    int negligible = 0;
    for (double t = start; t <= t_cap; t += step) {
      double x = 0.0, w = 0.0;
      if (!point(sign * t, x, w)) break;
      const T v = f(x) * w;
      ++r.evaluations;
      const double m = magnitude(v);
      if (!std::isfinite(m)) break;
      sum += v;
      abs_sum += m;
      if (m < kTiny || m < 1e-18 * abs_sum) {
        if (++negligible >= 3) break;
      } else {
        negligible = 0;
      }
    }
  };

  double h = 0.5;
  {
    double x = 0.0, w = 0.0;
    if (point(0.0, x, w)) {
      const T v = f(x) * w;
      sum += v;
      abs_sum += magnitude(v);
      ++r.evaluations;
    }
    accumulate_side(h, h, +1);
    accumulate_side(h, h, -1);
  }
  T prev = sum * h;
  r.value = prev;
  r.magnitude = abs_sum * h;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    accumulate_side(h, 2.0 * h, +1);
    accumulate_side(h, 2.0 * h, -1);
    const T cur = sum * h;
    r.value = cur;
    r.magnitude = abs_sum * h;
    r.error = magnitude(cur - prev);
    r.level = level;
    if (level >= 2 && r.error <= rel_tol * r.magnitude) {
      r.converged = true;
      break;
    }
    prev = cur;
  }
  return r;
}

}  // namespace detail

/// int_0^inf f(x) dx by the exp-sinh rule x = exp(pi/2 sinh t). Suited to
/// integrands with algebraic singularities at 0 and exponential decay.
template <class F>
auto exp_sinh(F&& f, double rel_tol = 1e-13, int max_level = 9) {
  auto point = [](double t, double& x, double& w) {
    const double y = 0.5 * std::numbers::pi * std::sinh(t);
    if (y > 700.0 || y < -700.0) return false;
    x = std::exp(y);
    w = x * 0.5 * std::numbers::pi * std::cosh(t);
    return x > 0.0 && std::isfinite(w);
  };
  return detail::de_integrate(f, point, 6.0, rel_tol, max_level);
}

/// int_a^b f(x) dx by the tanh-sinh rule; endpoints are never evaluated.
template <class F>
auto tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-13, int max_level = 9) {
  const double half = 0.5 * (b - a);
  auto point = [a, b, half](double t, double& x, double& w) {
    const double y = 0.5 * std::numbers::pi * std::sinh(t);
    if (std::abs(y) > 350.0) return false;
    const double e = std::exp(-2.0 * std::abs(y));
    const double comp = 2.0 * e / (1.0 + e);  // 1 - |tanh y|
    const double ch = std::cosh(y);
    w = half * 0.5 * std::numbers::pi * std::cosh(t) / (ch * ch);
    x = t >= 0.0 ? b - half * comp : a + half * comp;
    return comp > 0.0 && x > a && x < b;
  };
  return detail::de_integrate(f, point, 4.0, rel_tol, max_level);
}

/// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
template <class F>
double gauss_composite(F&& f, double a, double b, int panels, int order) {
  const auto& rule = gauss_legendre(order);
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double mid = lo + 0.5 * width;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + 0.5 * width * rule.nodes[i]);
    sum += 0.5 * width * s;
  }
  return sum;
}

/// Golden-section maximization of a unimodal f on [a, b].
template <class F>
double golden_max(F&& f, double a, double b, double tol = 1e-12) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (std::abs(b - a) > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace fraclp::quad
