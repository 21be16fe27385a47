#include "fraclp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "fraclp/error.hpp"
#include "fraclp/quadrature.hpp"
#include "fraclp/spectral.hpp"

namespace fraclp {

namespace {

constexpr double kPi = std::numbers::pi;
// e^{-37.5} < 1e-16: beyond this the damping factor is below double resolution.
constexpr double kCutoffExponent = 37.5;
constexpr double kMaxCutoff = 2e7;

double damping_rate(double alpha, double t) { return std::pow(2.0 * kPi, alpha) * t; }

void check_common(double alpha, double beta, double t) {
  require(alpha > 0.0 && alpha <= 2.0, "alpha must lie in (0, 2]");
  require(beta >= 0.0 && std::isfinite(beta), "beta must be >= 0");
  require(t > 0.0 && std::isfinite(t), "t must be > 0");
}

// Ray angle for the rotated contour: keeps Re(e^{i alpha theta}) >= cos(pi/4).
double ray_angle(double alpha) { return std::min(kPi / 2.0, kPi / (4.0 * alpha)); }

double bessel_half(double z) { return z == 0.0 ? 0.0 : std::sqrt(2.0 / (kPi * z)) * std::sin(z); }

}  // namespace

std::string to_string(KernelMethod m) {
  switch (m) {
    case KernelMethod::Contour1D: return "contour1d";
    case KernelMethod::RadialBessel: return "radial_bessel";
    case KernelMethod::GridFFT: return "grid_fft";
    case KernelMethod::Origin: return "origin";
    case KernelMethod::Direct1D: return "direct1d";
  }
  return "unknown";
}

void KernelQuery::validate() const {
  check_common(alpha, beta, t);
  require(dim >= 1 && dim <= 3, "dimension must be 1, 2 or 3");
  require(radius >= 0.0 && std::isfinite(radius), "radius must be >= 0");
  require(budget.tolerance > 0.0, "quadrature tolerance must be > 0");
  require(budget.max_level >= 2, "quadrature budget must allow at least two levels");
  if (method == KernelMethod::Contour1D) require(dim == 1, "Contour1D requires d = 1");
  if (method == KernelMethod::RadialBessel) require(dim >= 2, "RadialBessel requires d >= 2");
  if (method == KernelMethod::Direct1D) require(dim == 1, "Direct1D requires d = 1");
  require(method != KernelMethod::GridFFT, "GridFFT samples come from kernel_grid_fft");
}

KernelSample evaluate_kernel(const KernelQuery& q) {
  q.validate();
  if (q.method == KernelMethod::Origin) {
    require(q.radius == 0.0, "Origin method evaluates at r = 0 only");
    return {kernel_at_origin(q.alpha, q.beta, q.dim, q.t), KernelMethod::Origin, 0.0};
  }
  switch (q.method) {
    case KernelMethod::Contour1D: return kernel_contour_1d(q.alpha, q.beta, q.radius, q.budget, q.t);
    case KernelMethod::RadialBessel: return kernel_radial_bessel(q.alpha, q.beta, q.dim, q.radius, q.budget, q.t);
    default: return kernel_direct_1d(q.alpha, q.beta, q.radius, q.t);
  }
}

KernelSample kernel_contour_1d(double alpha, double beta, double x, const QuadratureBudget& budget, double t) {
  check_common(alpha, beta, t);
  require(x != 0.0 && std::isfinite(x), "contour evaluation needs x != 0 (use kernel_at_origin)");
  require(alpha < 2.0, "contour evaluation needs alpha < 2");
  x = std::abs(x);
  const double c = damping_rate(alpha, t);
  const double theta = ray_angle(alpha);
  const double sin_t = std::sin(theta), cos_t = std::cos(theta);
  const double damp = c * std::cos(alpha * theta) / std::pow(x, alpha);
  const double swirl = c * std::sin(alpha * theta) / std::pow(x, alpha);
  const double lead = theta * (1.0 + beta);
  // Natural length scale of the integrand along the ray.
  const double sigma = std::min(1.0 / sin_t, std::pow(damp, -1.0 / alpha));

  auto integrand = [&](double u) {
    const double s = sigma * u;
    const double sa = std::pow(s, alpha);
    const double log_mag = (beta > 0.0 ? beta * std::log(s) : 0.0) - s * sin_t - damp * sa;
    if (log_mag < -745.0) return std::complex<double>(0.0, 0.0);
    const double phase = lead + s * cos_t - swirl * sa;
    return std::polar(std::exp(log_mag), phase);
  };
  const auto r = quad::exp_sinh(integrand, budget.tolerance, budget.max_level);
  const double scale = 2.0 * sigma / std::pow(x, 1.0 + beta);
  const double value = scale * r.value.real();
  const double error = scale * r.error;
  if (!r.converged || !std::isfinite(value))
    throw QuadratureFailure("contour quadrature did not reach tolerance", value, error);
  return {value, KernelMethod::Contour1D, error};
}

double sphere_area(int n) {
  require(n >= 0, "sphere dimension must be >= 0");
  const double h = 0.5 * (n + 1);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

KernelSample kernel_radial_bessel(double alpha, double beta, int dim, double r, const QuadratureBudget& budget,
                                  double t) {
  check_common(alpha, beta, t);
  require(dim >= 2 && dim <= 3, "radial Bessel evaluation needs d in {2, 3}");
  require(r > 0.0 && std::isfinite(r), "radial Bessel evaluation needs r > 0 (use kernel_at_origin)");
  const double c = damping_rate(alpha, t);
  const double order = 0.5 * dim - 1.0;
  const double power = beta + 0.5 * dim;
  const double cutoff = r * std::pow(kCutoffExponent / c, 1.0 / alpha);
  if (!(cutoff < kMaxCutoff))
    throw QuadratureFailure("radial Bessel cutoff exceeds the oscillation budget", 0.0,
                            std::numeric_limits<double>::infinity());
  const bool half_order = dim == 3;
  auto integrand = [&](double rho) {
    const double j = half_order ? bessel_half(rho) : bessel_j(order, rho);
    return std::pow(rho, power) * j * std::exp(-c * std::pow(rho / r, alpha));
  };

  // Head piece carries the endpoint behaviour; the rest is analytic and is
  // split into half-periods of the Bessel oscillation.
  const double head = std::min(kPi, cutoff);
  const auto first = quad::tanh_sinh(integrand, 0.0, head, budget.tolerance, budget.max_level);
  if (!first.converged)
    throw QuadratureFailure("radial Bessel head quadrature did not reach tolerance", first.value, first.error);
  double sum = first.value;
  double magnitude = first.magnitude;
  double error = first.error;
  const auto& g16 = quad::gauss_legendre(16);
  const auto& g32 = quad::gauss_legendre(32);
  for (double lo = head; lo < cutoff; lo += kPi) {
    const double hi = std::min(lo + kPi, cutoff);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double s16 = 0.0, s32 = 0.0, m32 = 0.0;
    for (std::size_t i = 0; i < g16.nodes.size(); ++i) s16 += g16.weights[i] * integrand(mid + half * g16.nodes[i]);
    for (std::size_t i = 0; i < g32.nodes.size(); ++i) {
      const double v = g32.weights[i] * integrand(mid + half * g32.nodes[i]);
      s32 += v;
      m32 += std::abs(v);
    }
    sum += half * s32;
    magnitude += half * m32;
    error += half * std::abs(s32 - s16);
  }
  const double prefactor =
      sphere_area(dim - 2) * std::pow(2.0, 0.5 * dim - 1.0) * std::tgamma(0.5 * (dim - 1)) * std::sqrt(kPi) /
      std::pow(r, beta + dim);
  const double value = prefactor * sum;
  const double abs_error = prefactor * error;
  if (!std::isfinite(value) || error > std::max(budget.tolerance, 1e-12) * magnitude * 10.0)
    throw QuadratureFailure("radial Bessel quadrature did not reach tolerance", value, abs_error);
  return {value, KernelMethod::RadialBessel, abs_error};
}

KernelSample kernel_direct_1d(double alpha, double beta, double x, double t) {
  check_common(alpha, beta, t);
  const double c = damping_rate(alpha, t);
  const double cutoff = std::pow(kCutoffExponent / c, 1.0 / alpha);
  auto f = [&](double xi) { return std::pow(xi, beta) * std::cos(xi * x) * std::exp(-c * std::pow(xi, alpha)); };
  const int panels = std::max(64, static_cast<int>(std::ceil(8.0 * cutoff * std::abs(x) / kPi)));
  const double fine = 2.0 * quad::gauss_composite(f, 0.0, cutoff, 2 * panels, 16);
  const double coarse = 2.0 * quad::gauss_composite(f, 0.0, cutoff, panels, 16);
  return {fine, KernelMethod::Direct1D, std::abs(fine - coarse)};
}

double kernel_at_origin(double alpha, double beta, int dim, double t) {
  check_common(alpha, beta, t);
  require(dim >= 1 && dim <= 3, "dimension must be 1, 2 or 3");
  const double c = damping_rate(alpha, t);
  const double e = (beta + dim) / alpha;
  return sphere_area(dim - 1) * std::tgamma(e) / (alpha * std::pow(c, e));
}

ScalarField kernel_grid_fft(double alpha, double beta, const GridSpec& grid, double t) {
  check_common(alpha, beta, t);
  grid.validate();
  return kernel_on_grid(grid, t, alpha, beta, FourierConvention::Paper);
}

GridSpec kernel_cross_check_grid(double alpha, double beta, int dim, double tolerance, double max_spacing,
                                 const QuadratureBudget& budget) {
  check_common(alpha, beta, 1.0);
  require(dim >= 1 && dim <= 3, "dimension must be 1, 2 or 3");
  require(tolerance > 0.0, "tolerance must be > 0");
  // Images at distance >= 2L: about (3^d - 1) |phi(2L)| times a lattice-sum factor.
  const double decay = dim + (beta > 0.0 ? std::min(beta, alpha) : alpha);
  const double lattice = (std::pow(3.0, dim) - 1.0) * (1.0 + 1.0 / (decay - 1.0));
  double L = 4.0;
  while (lattice * std::abs(kernel_value(alpha, beta, dim, 2.0 * L, budget)) > 0.25 * tolerance) {
    L *= 2.0;
    require(L < 1e7, "cross-check grid: kernel tail too heavy");
  }
  // Symbol mass beyond the Nyquist radius.
  const double c = damping_rate(alpha, 1.0);
  auto beyond = [&](double xi) { return std::pow(xi, beta + dim) * std::exp(-c * std::pow(xi, alpha)); };
  double xi = 1.0;
  while (beyond(xi) > 1e-3 * tolerance || xi < 1.0) xi *= 1.25;
  require(max_spacing > 0.0, "cross-check grid: spacing must be > 0");
  const double h_max = std::min(kPi / xi, max_spacing);
  int nx = 16;
  while (2.0 * L / nx > h_max) nx *= 2;
  require(std::pow(static_cast<double>(nx), dim) <= std::pow(2.0, 24), "cross-check grid too large for memory");
  GridSpec g;
  g.dim = dim;
  g.half_width = L;
  g.nx = nx;
  g.t_begin = 0.0;
  g.t_end = 1.0;
  g.nt = 2;
  g.channels = 1;
  return g;
}

std::vector<CrossCheckPoint> kernel_cross_check(double alpha, double beta, const GridSpec& grid, double r_lo,
                                                double r_hi, const QuadratureBudget& budget) {
  const auto field = kernel_grid_fft(alpha, beta, grid);
  std::vector<CrossCheckPoint> pts;
  std::array<int, 3> idx{grid.nx / 2, grid.nx / 2, grid.nx / 2};
  for (int a = grid.dim; a < 3; ++a) idx[a] = 0;
  for (int j = grid.nx / 2 + 1; j < grid.nx; ++j) {
    const double r = grid.x(j);
    if (r < r_lo || r > r_hi) continue;
    idx[0] = j;
    const double g = field[grid.flatten(idx)];
    const auto s = grid.dim == 1 ? kernel_contour_1d(alpha, beta, r, budget)
                                 : kernel_radial_bessel(alpha, beta, grid.dim, r, budget);
    pts.push_back({r, g, s.value, s.error});
  }
  return pts;
}

double kernel_value(double alpha, double beta, int dim, double r, const QuadratureBudget& budget) {
  if (r == 0.0) return kernel_at_origin(alpha, beta, dim);
  if (dim == 1) return kernel_contour_1d(alpha, beta, r, budget).value;
  return kernel_radial_bessel(alpha, beta, dim, r, budget).value;
}

double kernel_radial_derivative(double alpha, double beta, int dim, double r, const QuadratureBudget& budget) {
  require(r >= 0.0, "radius must be >= 0");
  if (r == 0.0) return 0.0;
  const double h = std::cbrt(budget.tolerance) * std::max(r, 1e-2) * 0.5;
  const double step = std::min(h, 0.5 * r);
  return (kernel_value(alpha, beta, dim, r + step, budget) - kernel_value(alpha, beta, dim, r - step, budget)) /
         (2.0 * step);
}

// ---------------------------------------------------------------------------

double Envelope::knot() const { return std::pow(10.0, -1.0 / alpha); }

double Envelope::left_value_at_knot() const { return amplitude * std::pow(10.0, (dim + beta) / alpha); }
double Envelope::right_value_at_knot() const { return amplitude / std::pow(knot(), dim + beta); }
double Envelope::left_derivative_at_knot() const {
  return -(dim + beta) * std::pow(10.0, 1.0 / alpha) * left_value_at_knot();
}
double Envelope::right_derivative_at_knot() const {
  return -(dim + beta) * amplitude / std::pow(knot(), dim + beta + 1.0);
}

double Envelope::value(double rho) const {
  require(rho >= 0.0, "envelope radius must be >= 0");
  const double k = dim + beta;
  if (rho >= knot()) return amplitude / std::pow(rho, k);
  return left_value_at_knot() * std::exp(-k * (std::pow(10.0, 1.0 / alpha) * rho - 1.0));
}

double Envelope::derivative(double rho) const {
  require(rho >= 0.0, "envelope radius must be >= 0");
  const double k = dim + beta;
  if (rho >= knot()) return -k * amplitude / std::pow(rho, k + 1.0);
  return -k * std::pow(10.0, 1.0 / alpha) * value(rho);
}

double Envelope::tail_integral(double r) const {
  require(beta > 0.0, "the tail integral is finite only for beta > 0");
  require(r >= knot(), "tail identity holds for r at or beyond the knot");
  return (dim + beta) * amplitude / beta * std::pow(r, -beta);
}

double envelope_eval(const Envelope& e, double rho) { return e.value(rho); }

double envelope_majorand(double alpha, double beta, int dim, double rho, const QuadratureBudget& budget) {
  const double v = std::abs(kernel_value(alpha, beta, dim, rho, budget));
  const double g = std::abs(kernel_radial_derivative(alpha, beta, dim, rho, budget));
  return v + g + rho * g;
}

EnvelopeFit envelope_fit(double alpha, double beta, int dim, std::span<const double> radii,
                         const std::function<double(double)>& majorand) {
  require(!radii.empty(), "envelope fit needs samples");
  Envelope unit{alpha, beta, dim, 1.0};
  EnvelopeFit fit;
  fit.sample_ratio.reserve(radii.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double m = majorand(radii[i]);
    if (!std::isfinite(m) || !std::isfinite(radii[i]))
      throw Error("envelope fit: non-finite sample at r = " + std::to_string(radii[i]));
    fit.sample_ratio.push_back(m / unit.value(radii[i]));
    if (fit.sample_ratio[i] > fit.sample_ratio[best]) best = i;
  }
  double amplitude = fit.sample_ratio[best];
  double argmax = radii[best];
  // Sharpen between the neighbours of the binding sample.
  if (radii.size() >= 3) {
    const double lo = radii[best > 0 ? best - 1 : best];
    const double hi = radii[best + 1 < radii.size() ? best + 1 : best];
    if (hi > lo) {
      auto ratio = [&](double rho) { return majorand(rho) / unit.value(rho); };
      const double r = quad::golden_max(ratio, lo, hi, 1e-6);
      const double v = ratio(r);
      if (!std::isfinite(v)) throw Error("envelope fit: non-finite refinement sample");
      if (v > amplitude) {
        amplitude = v;
        argmax = r;
      }
    }
  }
  fit.envelope = Envelope{alpha, beta, dim, amplitude};
  fit.argmax = argmax;
  return fit;
}

// ---------------------------------------------------------------------------

DecayFit decay_fit(std::span<const double> radii, std::span<const double> values) {
  require(radii.size() == values.size(), "decay fit: radii and values differ in length");
  require(radii.size() >= 8, "decay fit needs at least 8 radii");
  const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
  require(*lo > 0.0 && std::log10(*hi / *lo) >= 1.5 - 1e-12, "decay fit radii must span 1.5 decades");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = static_cast<double>(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(values[i] > 0.0 && std::isfinite(values[i]), "decay fit needs positive samples");
    const double x = std::log(radii[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vxx = sxx - sx * sx / n, vxy = sxy - sx * sy / n, vyy = syy - sy * sy / n;
  DecayFit fit;
  fit.exponent = vxy / vxx;
  fit.prefactor = std::exp((sy - fit.exponent * sx) / n);
  fit.r_squared = vyy > 0.0 ? vxy * vxy / (vxx * vyy) : 1.0;
  return fit;
}

double weighted_sup(std::span<const double> radii, std::span<const double> values, double power) {
  require(radii.size() == values.size() && !radii.empty(), "weighted sup: bad sample arrays");
  double best = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) best = std::max(best, std::abs(values[i]) * std::pow(radii[i], power));
  return best;
}

double fourier_symbol(double alpha, double beta, double xi) {
  check_common(alpha, beta, 1.0);
  xi = std::abs(xi);
  const double base = beta == 0.0 ? 1.0 : std::pow(xi, beta);
  return base * std::exp(-damping_rate(alpha, 1.0) * std::pow(xi, alpha));
}

FourierBoundReport fourier_bound_check(double alpha, double beta, std::span<const double> xi_sweep, double lambda) {
  check_common(alpha, beta, 1.0);
  require(!xi_sweep.empty(), "fourier bound check needs a sweep");
  require(lambda + beta > 0.0, "lambda + beta must be > 0");
  const double c = damping_rate(alpha, 1.0);
  FourierBoundReport rep;
  double prev = std::numeric_limits<double>::infinity();
  double prev_xi = -1.0;
  for (double xi : xi_sweep) {
    xi = std::abs(xi);
    rep.sup_ratio_beta = std::max(rep.sup_ratio_beta, std::exp(-c * std::pow(xi, alpha)));
    const double v = fourier_symbol(alpha, beta, xi);
    rep.sup_lambda_sweep = std::max(rep.sup_lambda_sweep, std::pow(xi, lambda) * v);
    if (xi > prev_xi && v > prev) rep.monotone = false;
    prev = v;
    prev_xi = xi;
  }
  const double k = lambda + beta;
  rep.argmax_exact = std::pow(k / (c * alpha), 1.0 / alpha);
  rep.sup_lambda_exact = std::pow(rep.argmax_exact, k) * std::exp(-k / alpha);
  return rep;
}

void write_kernel_csv(std::ostream& os, std::span<const KernelTableRow> rows) {
  os << "alpha,beta,d,r,value,method,err_estimate\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%.17g,%.17g,%s,%.6g\n", r.alpha, r.beta, r.dim, r.r, r.value,
                  to_string(r.method).c_str(), r.err_estimate);
    os << buf;
  }
}

}  // namespace fraclp
