#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fraclp/field.hpp"
#include "fraclp/spectral.hpp"

namespace fraclp {

/// K independent Wiener channels sampled on a uniform step.
struct NoiseSpec {
  int channels = 1;
  std::uint64_t seed = 1;
  double dt = 0.01;

  void validate() const;
  /// Increments dW^k_n ~ N(0, dt), (step, channel) layout, regenerated
  /// bit-identically from (seed, path).
  std::vector<double> increments(int path, int steps) const;
};

struct SpdeOptions {
  FourierConvention convention = FourierConvention::Canonical;
  std::vector<double> energy_ps{2.0, 4.0};  // p values for int_0^T ||u||_{H^{alpha/2}_p}^p dt
  bool antithetic = false;                  // use -dW
  bool keep_final_fields = false;
};

struct PathResult {
  GridSpec spec;
  double alpha = 1.0;
  int paths = 0;
  std::vector<double> l2sq_final;   // ||u(T)||_2^2 per path
  std::vector<double> mean_final;   // spatial mean of u(T) per path
  std::vector<double> energy_ps;
  std::vector<std::vector<double>> energy;       // [p][path]
  std::vector<std::vector<double>> final_fields;  // per path, when kept
};

struct EnsembleStat {
  double mean = 0.0;
  double std_error = 0.0;
  int count = 0;
};

/// Mean and standard error over the first `count` entries (all when count = 0).
EnsembleStat ensemble(std::span<const double> values, int count = 0);

/// Mild Euler scheme u^_{n+1} = e^{-dt rate |xi|^alpha}(u^_n + sum_k f^k(t_n)^ dW^k_n), u(a) = 0.
/// Channels of f are the Wiener channels.
PathResult simulate_stochastic_convolution(const SpaceTimeField& f, double alpha, const NoiseSpec& noise, int paths,
                                           const SpdeOptions& options = {});

struct ItoReport {
  EnsembleStat mc;
  double oracle = 0.0;             // exact second moment of the scheme
  double oracle_continuous = 0.0;  // sum_k int_a^T ||T_{T-s} f^k(s)||^2 ds, f frozen on slabs
  double z_score = 0.0;
  double relative_error = 0.0;
  bool small_ensemble = false;  // fewer than 1000 paths
  EnsembleStat zero_mode_mc;    // E[mean(u(T))^2]
  double zero_mode_oracle = 0.0;
  double zero_mode_z = 0.0;
  bool pass = false;  // both |z| <= 3
};

ItoReport ito_isometry_check(const PathResult& result, const SpaceTimeField& f, double alpha,
                             FourierConvention conv = FourierConvention::Canonical);

struct EnergyReport {
  double p = 2.0;
  std::vector<int> ensemble_sizes;  // nested prefixes M/4, M/2, M
  std::vector<double> ratios;       // LHS / RHS per size
  std::vector<double> ratio_errors;
  double rhs = 0.0;
  double lhs_exact = 0.0;  // p = 2 only
  double z_exact = 0.0;    // p = 2 only
  bool stable = false;
  bool pass = false;
};

/// E int ||u||^p_{H^{alpha/2}_p} dt / int || |f|_{l2} ||^p_{L_p} ds with Monte Carlo error bars.
EnergyReport energy_inequality_check(const PathResult& result, const SpaceTimeField& f, double alpha, double p,
                                     FourierConvention conv = FourierConvention::Canonical);

}  // namespace fraclp
