#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "fraclp/field.hpp"

namespace fraclp {

/// Canonical: F[h](xi) = int e^{-i xi.x} h dx, semigroup symbol e^{-t|xi|^alpha}.
/// Paper: kernel p(t,x) = int e^{i xi.x} e^{-(2 pi)^alpha t |xi|^alpha} d xi,
/// whose total mass is (2 pi)^d; convolution with it multiplies the canonical
/// spectrum by (2 pi)^d e^{-(2 pi)^alpha t |xi|^alpha}.
enum class FourierConvention { Canonical, Paper };

/// Time-rate factor of the semigroup symbol: 1 or (2 pi)^alpha.
double semigroup_rate(FourierConvention conv, double alpha);
/// Mass factor of the semigroup kernel: 1 or (2 pi)^d.
double kernel_mass(FourierConvention conv, int dim);

/// Canonically scaled coefficients g^_k ~ int e^{-i xi_k.x} g(x) dx with
/// xi_k = pi k / L, stored in half-complex layout (last axis k >= 0).
class Spectrum {
 public:
  Spectrum(GridSpec spec, std::vector<std::complex<double>> half);

  const GridSpec& spec() const { return spec_; }
  std::span<const std::complex<double>> half() const { return half_; }
  /// Coefficient at any signed wavenumber k in [-nx/2, nx/2)^d.
  std::complex<double> at(const std::array<int, 3>& k) const;
  /// |xi| of half-layout entry s.
  double xi_norm(std::size_t s) const;

 private:
  GridSpec spec_;
  std::vector<std::complex<double>> half_;
};

Spectrum dft_forward(const ScalarField& g);
ScalarField dft_inverse(const Spectrum& spectrum);

/// The radial real symbols used throughout the library.
struct MultiplierSpec {
  enum class Family { FracLaplacian, Semigroup, DerivSemigroup, BesselPotential };

  Family family = Family::FracLaplacian;
  double alpha = 2.0;
  double beta = 0.0;
  double t = 0.0;
  double s = 0.0;
  FourierConvention convention = FourierConvention::Canonical;

  static MultiplierSpec frac_laplacian(double beta);
  static MultiplierSpec semigroup(double t, double alpha, FourierConvention conv);
  static MultiplierSpec deriv_semigroup(double t, double alpha, double beta, FourierConvention conv);
  static MultiplierSpec bessel_potential(double s);

  void validate() const;
  /// Symbol value at |xi| for a d-dimensional grid (dimension enters only
  /// through the (2 pi)^d mass of FourierConvention::Paper).
  double operator()(double xi_norm, int dim) const;
};

ScalarField apply_multiplier(const ScalarField& g, const MultiplierSpec& m);
/// Applies an arbitrary radial real symbol |xi| -> value.
ScalarField apply_radial_symbol(const ScalarField& g, const std::function<double(double)>& symbol);
/// Same on complex input through the full complex transform; used to check
/// that radial real symbols keep real data real.
std::vector<std::complex<double>> apply_radial_symbol_complex(const GridSpec& spec,
                                                              std::span<const std::complex<double>> values,
                                                              const std::function<double(double)>& symbol);

/// (-Laplacian)^{beta/2}: symbol |xi|^beta.
ScalarField frac_laplacian(const ScalarField& g, double beta);
/// T_t g for the alpha-stable semigroup (alpha = 2 gives the heat semigroup).
ScalarField semigroup_apply(const ScalarField& g, double t, double alpha, FourierConvention conv);
/// (-Laplacian)^{beta/2} T_t g in a single pass.
ScalarField frac_deriv_semigroup(const ScalarField& g, double t, double alpha, double beta,
                                 FourierConvention conv);
/// (1 - Laplacian)^{s/2} g.
ScalarField bessel_potential(const ScalarField& g, double s);
/// d g / d x^axis, spectrally.
ScalarField partial_derivative(const ScalarField& g, int axis);

/// Samples of the periodized, band-limited kernel whose canonical transform
/// is the semigroup/derivative symbol: (1/(2L)^d) sum_k symbol(xi_k) e^{i xi_k.x_j}.
ScalarField kernel_on_grid(const GridSpec& spec, double t, double alpha, double beta, FourierConvention conv);

/// Below t_min = (dx/pi)^alpha the semigroup symbol is ~1 on the whole band.
double resolution_time(const GridSpec& spec, double alpha);

}  // namespace fraclp
