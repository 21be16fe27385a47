#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fraclp/field.hpp"
#include "fraclp/spectral.hpp"

namespace fraclp {

/// The function psi behind Psi_t. Symbols use the 2 pi normalization
/// psi^(xi) = |xi|^beta e^{-(2pi)^alpha |xi|^alpha} without the (2pi)^d mass,
/// so that Psi_t acts on the canonical spectrum as psi^(xi t^{1/alpha}).
/// Canonical convention replaces (2pi)^alpha by 1.
struct PsiSpec {
  enum class Kind { PhiBeta, Custom };

  Kind kind = Kind::PhiBeta;
  double alpha = 1.0;
  double beta = 0.5;
  FourierConvention convention = FourierConvention::Paper;
  std::function<double(double)> custom_symbol;  // |xi| -> psi^, Custom only
  // Standing-assumption parameters: |psi^| <= K |xi|^nu, |xi|^lambda |psi^| <= K, tail decay delta.
  double nu = 0.5;
  double lambda = 1.0;
  double delta = 0.5;
  double k_const = 1.0;

  /// psi = phi_{alpha/2} with nu = delta = alpha/2, lambda = 1.
  static PsiSpec phi_half(double alpha, FourierConvention conv = FourierConvention::Paper);
  static PsiSpec phi_beta(double alpha, double beta, FourierConvention conv = FourierConvention::Paper);
  static PsiSpec custom(double alpha, std::function<double(double)> symbol, double nu, double lambda, double delta,
                        double k_const);

  void validate() const;
  double rate() const;  // (2pi)^alpha or 1
  /// psi^(rho) at a radial frequency rho.
  double symbol(double rho) const;
  /// psi^(xi tau^{1/alpha}).
  double scaled_symbol(double xi, double tau) const;
  std::string tag() const;
};

struct LagNode {
  double tau;
  double weight;
};

/// Quadrature for the ds/(t - s) integral written in the lag tau = t - s.
/// Cell l covers tau in (l dt, (l+1) dt) and pairs with the source slab
/// s in [t - (l+1) dt, t - l dt) on which f is frozen at its left value.
/// Cell 0 is graded geometrically (ratio 2) toward tau = 0 down to a floor
/// below which every resolved mode is flat.
struct TimeQuadMesh {
  double dt = 0.0;
  double floor = 0.0;
  double grading_ratio = 2.0;
  std::vector<std::vector<LagNode>> cells;

  /// Mesh for every lag a grid with this spacing can see.
  static TimeQuadMesh build(const GridSpec& spec, double alpha, double rate);
  void validate() const;
  std::size_t node_count() const;
};

/// {(s - c^alpha, s) x prod_i (y_i - c/2, y_i + c/2)}.
struct ParabolicBox {
  double s = 0.0;
  std::array<double, 3> y{};
  double c = 1.0;
  double alpha = 1.0;
  int dim = 1;

  double temporal_length() const;
  bool contains(double t, const std::array<double, 3>& x) const;
  double volume() const;
};

struct SquareFunctionResult {
  GridSpec spec;
  std::vector<double> values;  // (time, space); G_a f(t_i, x_j)
  TimeQuadMesh mesh;

  double at(int i, std::size_t j) const { return values[static_cast<std::size_t>(i) * spec.points() + j]; }
  /// (sum_ij G^p dx^d dt)^{1/p}.
  double lp_norm(double p) const;
};

/// Psi_tau applied to one scalar slice, spectrally.
ScalarField psi_transform(const ScalarField& slice, double tau, const PsiSpec& psi);

/// G_a f(t, x) = [int_a^t |Psi_{t-s} f(s, .)(x)|_H^2 ds / (t - s)]^{1/2} on the grid times;
/// `a` must be a grid time.
SquareFunctionResult square_function(const SpaceTimeField& f, double a, const PsiSpec& psi,
                                     const TimeQuadMesh& mesh);
SquareFunctionResult square_function(const SpaceTimeField& f, double a, const PsiSpec& psi);

/// [int_a^t |(-Laplacian)^{alpha/4} T_{t-s} f(s, .)(x)|_H^2 ds]^{1/2} on the same mesh.
SquareFunctionResult square_function_via_derivative(const SpaceTimeField& f, double a, double alpha,
                                                    FourierConvention conv, const TimeQuadMesh& mesh);
SquareFunctionResult square_function_via_derivative(const SpaceTimeField& f, double a, double alpha,
                                                    FourierConvention conv = FourierConvention::Paper);

/// Radii {0, dx, 2 dx, 4 dx, ...} up to L; radius 0 is the single cell.
std::vector<double> dyadic_radii(const GridSpec& spec);

/// sup over radii of the average of |g| over the discrete ball {y : |x - y| <= r}, periodic.
ScalarField maximal_x(const ScalarField& g, std::span<const double> radii);

/// sup over half-widths r (in steps) of (2r+1)^{-1} sum_{|s|<=r} |h(t+s)|, zero outside the series.
std::vector<double> maximal_t(std::span<const double> series, std::span<const int> half_widths);
/// Half-widths {0, 1, 2, 4, ...} below n.
std::vector<int> dyadic_half_widths(int n);

/// M_t M_x |f|_H^2 on the whole space-time grid, (time, space) layout.
std::vector<double> maximal_tx_of_norm_sq(const SpaceTimeField& f);

/// h^# over boxes Q_c from `scales`, with box corners on a lattice of stride
/// ~(box cells)/4 per axis; boxes wrap in space and stay inside [a, b] in time.
/// `g` has (time, space) layout on `spec`.
std::vector<double> sharp_function(const GridSpec& spec, std::span<const double> g, double alpha,
                                   std::span<const double> scales);
/// Scales {2 dx, 4 dx, ...} with c <= L and c^alpha <= b - a.
std::vector<double> dyadic_scales(const GridSpec& spec, double alpha);

}  // namespace fraclp
