#include "fraclp/spde.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

#include "fraclp/error.hpp"
#include "fraclp/fft.hpp"
#include "fraclp/parallel.hpp"

namespace fraclp {

namespace {

constexpr double kPi = std::numbers::pi;

double l2_sq(const ScalarField& g) {
  double s = 0.0;
  for (double v : g.values()) s += v * v;
  return s * g.spec().cell_volume();
}

double spatial_mean(const SpaceTimeField& f, int n, int k) {
  const std::size_t npts = f.spec().points();
  double s = 0.0;
  for (std::size_t j = 0; j < npts; ++j) s += f.at(n, j, k);
  return s / static_cast<double>(npts);
}

// sum_{j=1}^{J} q^j for q = e^{-2 dt lambda}.
double geometric_tail(double two_dt_lambda, int count) {
  if (two_dt_lambda == 0.0) return count;
  const double q = std::exp(-two_dt_lambda);
  return q * -std::expm1(-two_dt_lambda * count) / -std::expm1(-two_dt_lambda);
}

}  // namespace

void NoiseSpec::validate() const {
  require(channels >= 1, "noise: channel count must be >= 1");
  require(dt > 0.0 && std::isfinite(dt), "noise: dt must be > 0");
}

std::vector<double> NoiseSpec::increments(int path, int steps) const {
  validate();
  require(path >= 0 && steps >= 0, "noise: path and step counts must be >= 0");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path), 0x5eedu};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, std::sqrt(dt));
  std::vector<double> dw(static_cast<std::size_t>(steps) * channels);
  for (double& v : dw) v = normal(rng);
  return dw;
}

EnsembleStat ensemble(std::span<const double> values, int count) {
  const std::size_t n = count > 0 ? static_cast<std::size_t>(count) : values.size();
  require(n >= 2 && n <= values.size(), "ensemble statistics need at least two samples");
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += values[i];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) var += (values[i] - mean) * (values[i] - mean);
  var /= static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n)), static_cast<int>(n)};
}

PathResult simulate_stochastic_convolution(const SpaceTimeField& f, double alpha, const NoiseSpec& noise, int paths,
                                           const SpdeOptions& options) {
  const auto& spec = f.spec();
  spec.validate();
  noise.validate();
  require(alpha > 0.0 && alpha <= 2.0, "alpha must lie in (0, 2]");
  require(paths >= 2, "need at least two paths");
  require(noise.channels == spec.channels, "noise channel count differs from the channels of f");
  require(std::abs(noise.dt - spec.dt()) <= 1e-12 * spec.dt(), "noise step differs from the grid step");
  for (double p : options.energy_ps) require(p >= 1.0, "energy exponents must be >= 1");

  auto engine = FftEngine::get(spec.dim, spec.nx);
  const std::size_t half = engine->half_size(), npts = engine->real_size();
  const int nt = spec.nt, K = spec.channels;
  const double dt = spec.dt(), vol = spec.cell_volume();
  const double rate = semigroup_rate(options.convention, alpha);
  const double unit = kPi / spec.half_width;
  const auto& ksq = engine->half_k_sq();

  std::vector<double> decay(half), sobolev(half);
  for (std::size_t s = 0; s < half; ++s) {
    const double xi = unit * std::sqrt(ksq[s]);
    decay[s] = std::exp(-dt * rate * std::pow(xi, alpha));
    sobolev[s] = std::pow(1.0 + xi * xi, 0.25 * alpha) / static_cast<double>(npts);
  }
  std::vector<std::complex<double>> fhat(static_cast<std::size_t>(nt) * K * half);
  parallel_for(static_cast<std::size_t>(nt) * K, [&](std::size_t b) {
    const int n = static_cast<int>(b / K), k = static_cast<int>(b % K);
    std::vector<double> slice(npts);
    for (std::size_t j = 0; j < npts; ++j) slice[j] = f.at(n, j, k);
    engine->forward(slice.data(), fhat.data() + b * half);
  });

  PathResult res;
  res.spec = spec;
  res.alpha = alpha;
  res.paths = paths;
  res.l2sq_final.resize(paths);
  res.mean_final.resize(paths);
  res.energy_ps = options.energy_ps;
  res.energy.assign(options.energy_ps.size(), std::vector<double>(paths, 0.0));
  if (options.keep_final_fields) res.final_fields.resize(paths);
  const bool need_energy = !options.energy_ps.empty();

  parallel_for(static_cast<std::size_t>(paths), [&](std::size_t path) {
    auto dw = noise.increments(static_cast<int>(path), nt);
    if (options.antithetic)
      for (double& v : dw) v = -v;
    std::vector<std::complex<double>> u(half, 0.0), buf(half);
    std::vector<double> phys(npts);
    for (int n = 0; n < nt; ++n) {
      for (int k = 0; k < K; ++k) {
        const double w = dw[static_cast<std::size_t>(n) * K + k];
        const auto* src = fhat.data() + (static_cast<std::size_t>(n) * K + k) * half;
        for (std::size_t s = 0; s < half; ++s) u[s] += src[s] * w;
      }
      for (std::size_t s = 0; s < half; ++s) u[s] *= decay[s];
      if (need_energy) {
        for (std::size_t s = 0; s < half; ++s) buf[s] = u[s] * sobolev[s];
        engine->inverse(buf.data(), phys.data());
        for (std::size_t q = 0; q < options.energy_ps.size(); ++q) {
          const double p = options.energy_ps[q];
          double acc = 0.0;
          for (double v : phys) acc += p == 2.0 ? v * v : std::pow(std::abs(v), p);
          res.energy[q][path] += dt * acc * vol;
        }
      }
    }
    const double inv_n = 1.0 / static_cast<double>(npts);
    for (std::size_t s = 0; s < half; ++s) buf[s] = u[s] * inv_n;
    engine->inverse(buf.data(), phys.data());
    double l2 = 0.0, mean = 0.0;
    for (double v : phys) {
      l2 += v * v;
      mean += v;
    }
    res.l2sq_final[path] = l2 * vol;
    res.mean_final[path] = mean * inv_n;
    if (options.keep_final_fields) res.final_fields[path] = phys;
  });
  return res;
}

ItoReport ito_isometry_check(const PathResult& result, const SpaceTimeField& f, double alpha,
                             FourierConvention conv) {
  const auto& spec = f.spec();
  require(spec == result.spec, "isometry check: field grid differs from the simulation grid");
  const int nt = spec.nt, K = spec.channels;
  const double dt = spec.dt(), rate = semigroup_rate(conv, alpha);
  ItoReport rep;
  rep.mc = ensemble(result.l2sq_final);
  rep.small_ensemble = result.paths < 1000;
  for (int n = 0; n < nt; ++n)
    for (int k = 0; k < K; ++k) {
      const auto slice = f.slice(n, k);
      const double lag = (nt - n) * dt;   // steps of decay applied to slab n
      const double after = (nt - n - 1) * dt;  // T - t_{n+1}
      rep.oracle += dt * l2_sq(apply_radial_symbol(slice, [&](double xi) {
        return std::exp(-lag * rate * std::pow(xi, alpha));
      }));
      rep.oracle_continuous += l2_sq(apply_radial_symbol(slice, [&](double xi) {
        const double lam = rate * std::pow(xi, alpha);
        const double slab = lam == 0.0 ? dt : -std::expm1(-2.0 * lam * dt) / (2.0 * lam);
        return std::sqrt(std::exp(-2.0 * lam * after) * slab);
      }));
      const double m = spatial_mean(f, n, k);
      rep.zero_mode_oracle += dt * m * m;
    }
  std::vector<double> m2(result.mean_final.size());
  for (std::size_t i = 0; i < m2.size(); ++i) m2[i] = result.mean_final[i] * result.mean_final[i];
  rep.zero_mode_mc = ensemble(m2);
  auto z = [](const EnsembleStat& s, double target) {
    if (s.std_error == 0.0) return s.mean == target ? 0.0 : std::numeric_limits<double>::infinity();
    return (s.mean - target) / s.std_error;
  };
  rep.z_score = z(rep.mc, rep.oracle);
  // A mean-free forcing leaves only rounding noise in the zero mode.
  const double negligible = 1e-12 * std::max(rep.oracle, 1e-300);
  if (rep.zero_mode_oracle <= negligible)
    rep.zero_mode_z = rep.zero_mode_mc.mean <= negligible ? 0.0 : std::numeric_limits<double>::infinity();
  else
    rep.zero_mode_z = z(rep.zero_mode_mc, rep.zero_mode_oracle);
  rep.relative_error = rep.oracle > 0.0 ? std::abs(rep.mc.mean - rep.oracle) / rep.oracle : std::abs(rep.mc.mean);
  rep.pass = std::abs(rep.z_score) <= 3.0 && std::abs(rep.zero_mode_z) <= 3.0;
  return rep;
}

EnergyReport energy_inequality_check(const PathResult& result, const SpaceTimeField& f, double alpha, double p,
                                     FourierConvention conv) {
  const auto& spec = f.spec();
  require(spec == result.spec, "energy check: field grid differs from the simulation grid");
  std::size_t q = result.energy_ps.size();
  for (std::size_t i = 0; i < result.energy_ps.size(); ++i)
    if (result.energy_ps[i] == p) q = i;
  require(q < result.energy_ps.size(), "energy check: the simulation did not record this p");
  require(result.paths >= 8, "energy check needs at least 8 paths");
  const int nt = spec.nt;
  const double dt = spec.dt(), vol = spec.cell_volume();
  EnergyReport rep;
  rep.p = p;
  {
    const auto norm_sq = f.hilbert_norm_sq();
    double s = 0.0;
    for (double v : norm_sq) s += std::pow(v, 0.5 * p);
    rep.rhs = dt * vol * s;
  }
  const auto& samples = result.energy[q];
  for (int m : {result.paths / 4, result.paths / 2, result.paths}) {
    const auto st = ensemble(samples, m);
    rep.ensemble_sizes.push_back(m);
    rep.ratios.push_back(rep.rhs > 0.0 ? st.mean / rep.rhs : 0.0);
    rep.ratio_errors.push_back(rep.rhs > 0.0 ? st.std_error / rep.rhs : 0.0);
  }
  rep.stable = true;
  for (std::size_t i = 1; i < rep.ratios.size(); ++i) {
    const double diff = std::abs(rep.ratios[i] - rep.ratios[i - 1]);
    const double band = std::max(3.0 * std::hypot(rep.ratio_errors[i], rep.ratio_errors[i - 1]),
                                 0.1 * rep.ratios.back());
    if (!(diff <= band) || !std::isfinite(rep.ratios[i])) rep.stable = false;
  }
  rep.pass = rep.stable;
  if (p == 2.0) {
    const double rate = semigroup_rate(conv, alpha);
    for (int m = 0; m < nt; ++m)
      for (int k = 0; k < spec.channels; ++k)
        rep.lhs_exact += dt * dt * l2_sq(apply_radial_symbol(f.slice(m, k), [&](double xi) {
          const double lam = rate * std::pow(xi, alpha);
          return std::sqrt(std::pow(1.0 + xi * xi, 0.5 * alpha) * geometric_tail(2.0 * dt * lam, nt - m));
        }));
    const auto st = ensemble(samples);
    rep.z_exact = st.std_error > 0.0 ? (st.mean - rep.lhs_exact) / st.std_error : 0.0;
    rep.pass = rep.pass && std::abs(rep.z_exact) <= 3.0;
  }
  return rep;
}

}  // namespace fraclp
