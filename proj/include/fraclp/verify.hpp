#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fraclp/families.hpp"
#include "fraclp/field.hpp"
#include "fraclp/spectral.hpp"
#include "fraclp/sqop.hpp"

namespace fraclp {

/// int_0^inf |psi^(xi t^{1/alpha})|^2 dt / t for psi = phi_{alpha/2}: 1 / (2 rate).
double l2_limit_constant(double alpha, FourierConvention conv = FourierConvention::Paper);

/// Linear-interpolation quantile (q in [0, 1]) of unsorted data.
double quantile(std::vector<double> data, double q);

struct L2IdentityRung {
  double t_end = 0.0;
  int nt = 0;
  double ratio = 0.0;  // ||G f||_2^2 / ||f||_2^2
};

struct L2IdentityReport {
  double alpha = 0.0;
  double limit = 0.0;
  std::vector<L2IdentityRung> rungs;
  bool increasing = true;   // ratios non-decreasing along the schedule
  bool below_limit = true;  // every ratio <= limit (+1e-10 relative)
  double final_relative_gap = 0.0;
  bool pass = false;  // all of the above and final gap within tolerance
};

/// ||G f||_2^2 / ||f||_2^2 as the time window [a, b] grows past the support of f
/// with the time step held fixed. `base` fixes a, L, nx and dt.
L2IdentityReport l2_identity_check(double alpha, const TestField& f, const GridSpec& base,
                                   std::span<const double> window_ends, double tolerance = 0.02,
                                   FourierConvention conv = FourierConvention::Paper);

struct RungStats {
  int nx = 0, nt = 0;
  std::vector<double> ratios;  // per sample, ||G f||_p^p / ||f||_p^p
  double max = 0.0, median = 0.0, q95 = 0.0;
};

struct ConstantEstimate {
  double alpha = 0.0;
  double p = 2.0;
  std::string psi_tag;
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<RungStats> rungs;
  bool outside_proven_range = false;
  double top_increase = 0.0;    // relative change of the max over the last rung
  bool stable = false;          // top_increase < 10%
  double l2_limit = 0.0;        // p = 2 only
  bool below_l2_limit = true;   // p = 2: max <= limit * 1.02
  bool pass = false;
};

/// Ratio campaign for several p sharing one square-function evaluation per
/// (rung, sample). Ladder entries are (nx, nt), strictly refining.
std::vector<ConstantEstimate> lp_ratio_estimate(double alpha, std::span<const double> ps, const FamilySpec& family,
                                                int n_samples, std::span<const std::pair<int, int>> ladder,
                                                bool allow_outside_range = false);

struct EllipticReport {
  double alpha = 0.0, p = 2.0;
  bool gaussian_gradient = false;
  std::vector<double> horizons;
  std::vector<double> ratios;  // int (int_0^T |D T_s g|^2 ds)^{p/2} dx / ||g||_p^p
  double saturation_change = 0.0;  // relative change over the last horizon step
  bool saturated = false;
  double l2_limit = 0.0;
};

/// Time-independent reduction. alpha in (0, 2): D = (-Laplacian)^{alpha/4},
/// semigroup with rate (2 pi)^alpha. alpha = 2 with gaussian_gradient: D = grad and the
/// canonical heat semigroup e^{-s|xi|^2}.
EllipticReport elliptic_lp_check(double alpha, double p, const ScalarField& g, std::span<const double> horizons,
                                 bool gaussian_gradient = false);
/// int_0^T |D T_s g|^2 ds on the grid (the inner integral of elliptic_lp_check).
std::vector<double> elliptic_inner_integral(double alpha, const ScalarField& g, double horizon,
                                            bool gaussian_gradient = false);

struct SupStability {
  std::vector<std::vector<double>> per_sample;  // per rung
  std::vector<double> sup;                      // per rung
  double sample_drift = 0.0;  // sup over all samples vs over the first half, finest rung
  double refine_drift = 0.0;  // last rung vs previous
  bool pass = false;          // both drifts below the threshold
};

/// sup_{t,x} (G f)^# / (M_t M_x |f|_H^2)^{1/2} over points where the denominator
/// exceeds 1e-10 of its max; box scales fixed physically from the first rung.
double pointwise_sharp_ratio(const SpaceTimeField& f, double alpha, std::span<const double> scales);
SupStability pointwise_sharp_check(double alpha, const FamilySpec& family, int n_samples,
                                   std::span<const std::pair<int, int>> ladder, double threshold = 0.15);

/// ||h||_q / ||h^#||_q for the space-time scalar h (mean removed first).
double fefferman_stein_single(const GridSpec& spec, std::vector<double> h, double alpha, double q,
                              std::span<const double> scales);
SupStability fefferman_stein_ratio(double q, double alpha, const FamilySpec& family, int n_samples,
                                   std::span<const std::pair<int, int>> ladder, double threshold = 0.15);

struct ScalingReport {
  double alpha = 0.0, c = 1.0;
  double max_abs_discrepancy = 0.0;
  double max_value = 0.0;
  double relative_discrepancy = 0.0;  // max |G(f_c) - G f(c^alpha ., c .)| / max G f
  bool pass = false;                  // relative discrepancy < 1e-5
};

/// Compares G of f_c(t, x) = f(c^alpha t, c x) computed on the companion grid
/// [a/c^alpha, b/c^alpha) x [-L/c, L/c) with G f on `base` at the matching points.
ScalingReport scaling_check(double alpha, double c, const TestField& f, const GridSpec& base);

}  // namespace fraclp
