#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fraclp/field.hpp"

namespace fraclp {

/// Smooth space-time test fields standing in for C_0^inf((a,b) x R^d, H).
/// Every field is a continuum function, periodic on [-L_ref, L_ref)^d and
/// vanishing outside (support_begin, support_end) in time, so it can be
/// sampled on any grid of that period, dilated or refined.
struct FamilySpec {
  enum class Generator { SmoothBump, RandomBandlimited, SingleMode, TensorSeparable };

  Generator generator = Generator::RandomBandlimited;
  std::uint64_t seed = 1;
  int dim = 1;
  int channels = 1;
  double period_half_width = 8.0;  // L_ref
  double support_begin = 0.1;
  double support_end = 0.9;
  int max_mode = 8;        // spatial wavenumbers pi k / L_ref with 1 <= |k| <= max_mode
  int time_modes = 3;      // temporal profile richness
  double amplitude = 1.0;  // overall scale

  void validate() const;
  /// Largest spatial frequency present (infinite for bumps, which are only smooth).
  double bandlimit() const;
};

FamilySpec::Generator parse_generator(const std::string& name);
std::string to_string(FamilySpec::Generator g);

class TestField {
 public:
  TestField(FamilySpec spec, int sample_index);

  double value(double t, const std::array<double, 3>& x, int channel) const;
  /// Samples f(time_scale t, space_scale x) on `grid`. The grid period times
  /// space_scale must equal the field period, and the field bandlimit must
  /// sit at or below half the grid Nyquist.
  SpaceTimeField sample(const GridSpec& grid, double space_scale = 1.0, double time_scale = 1.0) const;
  const FamilySpec& spec() const { return spec_; }

 private:
  double time_profile(double t, int channel, int term) const;

  struct Mode {
    std::array<int, 3> k;
    int channel;
    int term;
    double cos_coef, sin_coef;
  };
  struct Bump {
    std::array<double, 3> center;
    double width, weight;
    int channel;
    int term;
  };

  FamilySpec spec_;
  std::vector<Mode> modes_;
  std::vector<Bump> bumps_;
  std::vector<double> time_coef_;  // (channel, term, time mode)
  std::vector<std::array<double, 3>> axis_phase_;  // TensorSeparable per-axis coefficients
};

/// Time window used with a family: support occupies the inner 80%.
GridSpec family_grid(const FamilySpec& fam, int nx, int nt);

}  // namespace fraclp
