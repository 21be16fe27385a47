#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fraclp/field.hpp"

namespace fraclp {

// Kernels here use the 2 pi normalization
//   phi_beta(t, x) = int |xi|^beta e^{i xi.x} e^{-(2 pi)^alpha t |xi|^alpha} d xi,
// so phi_0(t, .) = p(t, .) has total mass (2 pi)^d.

/// Argument above which bessel_j switches to Hankel's asymptotic expansion.
inline constexpr double kBesselSwitch = 30.0;

/// J_n(z) for n > -1/2, z >= 0 from the integral
///   J_n(z) = (z/2)^n / (Gamma(n + 1/2) sqrt(pi)) int_{-1}^{1} (1 - t^2)^{n - 1/2} cos(z t) dt.
double bessel_j(double n, double z);

enum class KernelMethod { Contour1D, RadialBessel, GridFFT, Origin, Direct1D };
std::string to_string(KernelMethod m);

struct QuadratureBudget {
  double tolerance = 1e-13;  // relative to the integral of |integrand|
  int max_level = 9;
};

struct KernelSample {
  double value = 0.0;
  KernelMethod method = KernelMethod::Contour1D;
  double error = 0.0;  // estimated absolute error
};

struct KernelQuery {
  double alpha = 1.0;
  double beta = 0.0;
  int dim = 1;
  double radius = 1.0;
  double t = 1.0;
  KernelMethod method = KernelMethod::Contour1D;
  QuadratureBudget budget{};

  void validate() const;
};

/// Dispatches to the pointwise evaluators (GridFFT needs a grid; see kernel_grid_fft).
KernelSample evaluate_kernel(const KernelQuery& q);

/// d = 1 by quadrature along a rotated ray in the complex plane (principal
/// branch). Rejects x = 0; throws QuadratureFailure when the budget runs out.
KernelSample kernel_contour_1d(double alpha, double beta, double x, const QuadratureBudget& budget = {},
                               double t = 1.0);

/// d >= 2 from the radial Bessel representation
///   (A_{d-2} 2^{d/2-1} Gamma((d-1)/2) sqrt(pi) / r^{beta+d})
///     int_0^inf rho^{beta+d/2} J_{d/2-1}(rho) e^{-(2pi)^alpha t (rho/r)^alpha} d rho.
KernelSample kernel_radial_bessel(double alpha, double beta, int dim, double r, const QuadratureBudget& budget = {},
                                  double t = 1.0);

/// Low-accuracy direct quadrature of the oscillatory real-axis integral (d = 1).
KernelSample kernel_direct_1d(double alpha, double beta, double x, double t = 1.0);

/// Exact value at x = 0: A_{d-1} Gamma((beta+d)/alpha) / (alpha (2pi)^{beta+d}) t^{-(beta+d)/alpha}.
double kernel_at_origin(double alpha, double beta, int dim, double t = 1.0);

/// Surface measure of the unit sphere S^{n} in R^{n+1} (A_0 = 2 counts both points of S^0).
double sphere_area(int n);

/// Periodized band-limited kernel sampled on the grid by inverse FFT of its symbol.
ScalarField kernel_grid_fft(double alpha, double beta, const GridSpec& grid, double t = 1.0);

/// Grid on which kernel_grid_fft reproduces the whole-space kernel to about
/// `tolerance`: L large enough that periodic images are negligible, dx small
/// enough that the symbol is negligible at the Nyquist frequency and at most
/// `max_spacing`.
GridSpec kernel_cross_check_grid(double alpha, double beta, int dim, double tolerance, double max_spacing = 1.0,
                                 const QuadratureBudget& budget = {});

struct CrossCheckPoint {
  double r;
  double grid_value;
  double pointwise_value;
  double pointwise_error;
};

/// Grid-FFT samples along the first axis with r in [r_lo, r_hi] next to the
/// pointwise evaluator (contour for d = 1, radial Bessel otherwise).
std::vector<CrossCheckPoint> kernel_cross_check(double alpha, double beta, const GridSpec& grid, double r_lo,
                                                double r_hi, const QuadratureBudget& budget = {});

/// Radial derivative by central differences of the pointwise evaluator.
double kernel_radial_derivative(double alpha, double beta, int dim, double r, const QuadratureBudget& budget = {});

/// Pointwise evaluator for any dimension (contour for d = 1, Bessel otherwise, exact at r = 0).
double kernel_value(double alpha, double beta, int dim, double r, const QuadratureBudget& budget = {});

// ---------------------------------------------------------------------------
// Envelope

/// Two-branch C^1 majorant: N / rho^{d+beta} for rho >= rho0 = 10^{-1/alpha},
/// N 10^{(d+beta)/alpha} e^{-(d+beta)(10^{1/alpha} rho - 1)} below.
struct Envelope {
  double alpha = 1.0;
  double beta = 0.5;
  int dim = 1;
  double amplitude = 1.0;

  double knot() const;
  double value(double rho) const;
  double derivative(double rho) const;
  /// Left and right one-sided values/derivatives at the knot.
  double left_value_at_knot() const;
  double right_value_at_knot() const;
  double left_derivative_at_knot() const;
  double right_derivative_at_knot() const;
  /// int_r^inf |envelope'(rho)| rho^d d rho = (d+beta) N / beta r^{-beta} for r >= knot.
  double tail_integral(double r) const;
};

double envelope_eval(const Envelope& e, double rho);

/// |phi_beta(x)| + |grad phi_beta(x)| + |x| |grad phi_beta(x)| at |x| = rho.
double envelope_majorand(double alpha, double beta, int dim, double rho, const QuadratureBudget& budget = {});

struct EnvelopeFit {
  Envelope envelope;
  double argmax = 0.0;              // radius where the binding constraint sits
  std::vector<double> sample_ratio; // majorand / unit envelope per sample
};

/// Smallest amplitude whose envelope dominates `majorand` on the samples,
/// sharpened by a local maximization around the binding sample.
EnvelopeFit envelope_fit(double alpha, double beta, int dim, std::span<const double> radii,
                         const std::function<double(double)>& majorand);

// ---------------------------------------------------------------------------
// Decay and bound certificates

struct DecayFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit log|v| = log C + exponent log r.
DecayFit decay_fit(std::span<const double> radii, std::span<const double> values);

/// sup_i |v_i| r_i^power.
double weighted_sup(std::span<const double> radii, std::span<const double> values, double power);

struct FourierBoundReport {
  double sup_ratio_beta = 0.0;  // sup phi^_beta / |xi|^beta over the sweep
  double sup_lambda_sweep = 0.0;  // sup |xi|^lambda phi^_beta over the sweep
  double sup_lambda_exact = 0.0;  // closed-form maximum
  double argmax_exact = 0.0;
  bool monotone = true;  // phi^ non-increasing along the sweep
};

/// phi^_beta(xi) = |xi|^beta e^{-(2pi)^alpha |xi|^alpha}.
double fourier_symbol(double alpha, double beta, double xi);
FourierBoundReport fourier_bound_check(double alpha, double beta, std::span<const double> xi_sweep,
                                       double lambda = 1.0);

// ---------------------------------------------------------------------------

struct KernelTableRow {
  double alpha, beta;
  int dim;
  double r, value;
  KernelMethod method;
  double err_estimate;
};

/// CSV with columns alpha,beta,d,r,value,method,err_estimate.
void write_kernel_csv(std::ostream& os, std::span<const KernelTableRow> rows);

}  // namespace fraclp
