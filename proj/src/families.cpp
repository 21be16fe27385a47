#include "fraclp/families.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fraclp/error.hpp"

namespace fraclp {

namespace {

constexpr double kPi = std::numbers::pi;

// C^inf bump on (0, 1), equal to 1 at the midpoint.
double bump01(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double v = 2.0 * u - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - v * v));
}

std::mt19937_64 make_rng(std::uint64_t seed, int sample, int stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

}  // namespace

void FamilySpec::validate() const {
  require(dim >= 1 && dim <= 3, "family: dimension must be 1, 2 or 3");
  require(channels >= 1, "family: channels must be >= 1");
  require(period_half_width > 0.0, "family: period must be positive");
  require(support_begin < support_end, "family: empty time support");
  require(max_mode >= 1, "family: max_mode must be >= 1");
  require(time_modes >= 1, "family: time_modes must be >= 1");
  require(amplitude > 0.0 && std::isfinite(amplitude), "family: amplitude must be positive");
}

double FamilySpec::bandlimit() const {
  if (generator == Generator::SmoothBump) return std::numeric_limits<double>::infinity();
  return kPi * max_mode / period_half_width;
}

FamilySpec::Generator parse_generator(const std::string& name) {
  if (name == "smooth_bump") return FamilySpec::Generator::SmoothBump;
  if (name == "random_bandlimited") return FamilySpec::Generator::RandomBandlimited;
  if (name == "single_mode") return FamilySpec::Generator::SingleMode;
  if (name == "tensor_separable") return FamilySpec::Generator::TensorSeparable;
  throw InvalidArgument("unknown family '" + name + "'");
}

std::string to_string(FamilySpec::Generator g) {
  switch (g) {
    case FamilySpec::Generator::SmoothBump: return "smooth_bump";
    case FamilySpec::Generator::RandomBandlimited: return "random_bandlimited";
    case FamilySpec::Generator::SingleMode: return "single_mode";
    case FamilySpec::Generator::TensorSeparable: return "tensor_separable";
  }
  return "unknown";
}

TestField::TestField(FamilySpec spec, int sample_index) : spec_(std::move(spec)) {
  spec_.validate();
  require(sample_index >= 0, "family: sample index must be >= 0");
  auto rng = make_rng(spec_.seed, sample_index, static_cast<int>(spec_.generator));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const int m = spec_.channels, q = spec_.time_modes;
  constexpr int kTerms = 2;

  time_coef_.resize(static_cast<std::size_t>(m) * kTerms * q);
  for (auto& c : time_coef_) c = normal(rng);

  using G = FamilySpec::Generator;
  const int kmax = spec_.max_mode;
  switch (spec_.generator) {
    case G::SingleMode:
      modes_.push_back({{kmax, 0, 0}, 0, 0, 1.0, 0.0});
      for (int j = 0; j < q; ++j) time_coef_[j] = j == 0 ? 1.0 : 0.0;
      break;
    case G::RandomBandlimited: {
      // All lattice modes with 1 <= |k|_inf <= kmax in a half space, decaying weights.
      std::array<int, 3> lo{-kmax, -kmax, -kmax}, hi{kmax, kmax, kmax};
      for (int a = spec_.dim; a < 3; ++a) lo[a] = hi[a] = 0;
      for (int k0 = lo[0]; k0 <= hi[0]; ++k0)
        for (int k1 = lo[1]; k1 <= hi[1]; ++k1)
          for (int k2 = lo[2]; k2 <= hi[2]; ++k2) {
            const std::array<int, 3> k{k0, k1, k2};
            // One representative of each +-k pair.
            bool positive = false;
            for (int a = 0; a < 3; ++a)
              if (k[a] != 0) {
                positive = k[a] > 0;
                break;
              }
            if (!positive) continue;
            const double k2n = double(k0) * k0 + double(k1) * k1 + double(k2) * k2;
            const double w = 1.0 / (1.0 + 0.25 * k2n);
            for (int ch = 0; ch < m; ++ch)
              for (int term = 0; term < kTerms; ++term)
                modes_.push_back({k, ch, term, w * normal(rng), w * normal(rng)});
          }
      break;
    }
    case G::TensorSeparable: {
      // prod_a (sum_k c_k cos(pi k x_a / L) + s_k sin(...)) per channel and term.
      for (int ch = 0; ch < m; ++ch)
        for (int term = 0; term < kTerms; ++term)
          for (int k = 1; k <= kmax; ++k) {
            std::array<double, 3> c{}, s{};
            for (int a = 0; a < 3; ++a) {
              c[a] = normal(rng) / k;
              s[a] = normal(rng) / k;
            }
            axis_phase_.push_back(c);
            axis_phase_.push_back(s);
          }
      break;
    }
    case G::SmoothBump: {
      const double L = spec_.period_half_width;
      for (int ch = 0; ch < m; ++ch)
        for (int term = 0; term < kTerms; ++term)
          for (int b = 0; b < 3; ++b) {
            Bump bump{};
            for (int a = 0; a < 3; ++a) bump.center[a] = a < spec_.dim ? L * (2.0 * uniform(rng) - 1.0) * 0.6 : 0.0;
            bump.width = L * (0.08 + 0.08 * uniform(rng));
            bump.weight = normal(rng);
            bump.channel = ch;
            bump.term = term;
            bumps_.push_back(bump);
          }
      break;
    }
  }
}

double TestField::time_profile(double t, int channel, int term) const {
  const double u = (t - spec_.support_begin) / (spec_.support_end - spec_.support_begin);
  const double env = bump01(u);
  if (env == 0.0) return 0.0;
  const int q = spec_.time_modes;
  const double* c = time_coef_.data() + (static_cast<std::size_t>(channel) * 2 + term) * q;
  double s = 0.0;
  for (int j = 0; j < q; ++j) s += c[j] * std::cos(j * kPi * u);
  return env * s;
}

double TestField::value(double t, const std::array<double, 3>& x, int channel) const {
  const double L = spec_.period_half_width;
  const double unit = kPi / L;
  double v = 0.0;
  using G = FamilySpec::Generator;
  switch (spec_.generator) {
    case G::SingleMode:
    case G::RandomBandlimited: {
      double tp[2] = {time_profile(t, channel, 0), time_profile(t, channel, 1)};
      if (tp[0] == 0.0 && tp[1] == 0.0) return 0.0;
      for (const auto& mode : modes_) {
        if (mode.channel != channel) continue;
        double phase = 0.0;
        for (int a = 0; a < spec_.dim; ++a) phase += unit * mode.k[a] * x[a];
        v += tp[mode.term] * (mode.cos_coef * std::cos(phase) + mode.sin_coef * std::sin(phase));
      }
      break;
    }
    case G::TensorSeparable: {
      const int kmax = spec_.max_mode;
      for (int term = 0; term < 2; ++term) {
        const double tp = time_profile(t, channel, term);
        if (tp == 0.0) continue;
        double prod = 1.0;
        for (int a = 0; a < spec_.dim; ++a) {
          double s = 0.0;
          for (int k = 1; k <= kmax; ++k) {
            const std::size_t base = ((static_cast<std::size_t>(channel) * 2 + term) * kmax + (k - 1)) * 2;
            s += axis_phase_[base][a] * std::cos(unit * k * x[a]) + axis_phase_[base + 1][a] * std::sin(unit * k * x[a]);
          }
          prod *= s;
        }
        v += tp * prod;
      }
      break;
    }
    case G::SmoothBump: {
      for (const auto& b : bumps_) {
        if (b.channel != channel) continue;
        const double tp = time_profile(t, channel, b.term);
        if (tp == 0.0) continue;
        double r2 = 0.0;
        for (int a = 0; a < spec_.dim; ++a) {
          double dx = std::remainder(x[a] - b.center[a], 2.0 * L);
          r2 += dx * dx;
        }
        v += tp * b.weight * std::exp(-0.5 * r2 / (b.width * b.width));
      }
      break;
    }
  }
  return spec_.amplitude * v;
}

SpaceTimeField TestField::sample(const GridSpec& grid, double space_scale, double time_scale) const {
  grid.validate();
  require(grid.dim == spec_.dim, "family: grid dimension differs from the family");
  require(grid.channels == spec_.channels, "family: grid channel count differs from the family");
  require(space_scale > 0.0 && time_scale > 0.0, "family: dilation factors must be positive");
  require(std::abs(grid.half_width * space_scale - spec_.period_half_width) <= 1e-12 * spec_.period_half_width,
          "family: grid period does not match the field period");
  if (spec_.generator != FamilySpec::Generator::SmoothBump)
    require(spec_.bandlimit() * space_scale <= 0.5 * grid.nyquist() * (1.0 + 1e-12),
            "family: bandlimit exceeds half the grid Nyquist frequency");
  const std::size_t npts = grid.points();
  std::vector<double> values(static_cast<std::size_t>(grid.nt) * npts * grid.channels);
  for (int i = 0; i < grid.nt; ++i) {
    const double t = time_scale * grid.t(i);
    for (std::size_t j = 0; j < npts; ++j) {
      const auto idx = grid.unflatten(j);
      std::array<double, 3> x{};
      for (int a = 0; a < grid.dim; ++a) x[a] = space_scale * grid.x(idx[a]);
      for (int ch = 0; ch < grid.channels; ++ch)
        values[(static_cast<std::size_t>(i) * npts + j) * grid.channels + ch] = value(t, x, ch);
    }
  }
  return SpaceTimeField(grid, std::move(values));
}

GridSpec family_grid(const FamilySpec& fam, int nx, int nt) {
  fam.validate();
  GridSpec g;
  g.dim = fam.dim;
  g.half_width = fam.period_half_width;
  g.nx = nx;
  g.nt = nt;
  g.channels = fam.channels;
  const double span = fam.support_end - fam.support_begin;
  g.t_begin = fam.support_begin - span / 8.0;
  g.t_end = fam.support_end + span / 8.0;
  g.validate();
  return g;
}

}  // namespace fraclp
