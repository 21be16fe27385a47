#include "fraclp/field.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fraclp/error.hpp"
#include "fraclp/spectral.hpp"

namespace fraclp {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void GridSpec::validate() const {
  require(dim >= 1 && dim <= 3, "grid: dim must be 1, 2 or 3");
  require(std::isfinite(half_width) && half_width > 0.0, "grid: half width L must be positive");
  require(nx >= 2 && is_power_of_two(nx), "grid: nx must be a power of two >= 2");
  require(std::isfinite(t_begin) && std::isfinite(t_end) && t_end > t_begin,
          "grid: time window needs finite a < b");
  require(nt >= 2, "grid: nt must be >= 2");
  require(channels >= 1, "grid: channels must be >= 1");
  require(dx() > 0.0 && dt() > 0.0, "grid: steps must be positive");
}

double GridSpec::cell_volume() const { return std::pow(dx(), dim); }

std::size_t GridSpec::points() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(nx);
  return n;
}

std::array<int, 3> GridSpec::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % nx);
    flat /= nx;
  }
  return idx;
}

std::size_t GridSpec::flatten(const std::array<int, 3>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim; ++a) flat = flat * nx + static_cast<std::size_t>(idx[a]);
  return flat;
}

double GridSpec::nyquist() const { return std::numbers::pi / dx(); }

bool GridSpec::same_space(const GridSpec& o) const {
  return dim == o.dim && nx == o.nx && half_width == o.half_width;
}

namespace {

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidArgument(std::string(what) + ": non-finite entry");
  }
}

}  // namespace

ScalarField::ScalarField(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  spec_.validate();
  require(values_.size() == spec_.points(), "scalar field: shape does not match grid");
  check_finite(values_, "scalar field");
}

ScalarField ScalarField::zeros(const GridSpec& spec) {
  return ScalarField(spec, std::vector<double>(spec.points(), 0.0));
}

SpaceTimeField::SpaceTimeField(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  spec_.validate();
  require(values_.size() == static_cast<std::size_t>(spec_.nt) * spec_.points() * spec_.channels,
          "space-time field: shape does not match (nt, nx^d, m)");
  check_finite(values_, "space-time field");
}

SpaceTimeField SpaceTimeField::zeros(const GridSpec& spec) {
  return SpaceTimeField(spec,
                        std::vector<double>(static_cast<std::size_t>(spec.nt) * spec.points() * spec.channels, 0.0));
}

ScalarField SpaceTimeField::slice(int i, int channel) const {
  require(i >= 0 && i < spec_.nt, "slice: time index out of range");
  require(channel >= 0 && channel < spec_.channels, "slice: channel out of range");
  std::vector<double> out(spec_.points());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = at(i, j, channel);
  return ScalarField(spec_, std::move(out));
}

std::vector<double> SpaceTimeField::hilbert_norm_sq() const {
  const std::size_t n = static_cast<std::size_t>(spec_.nt) * spec_.points();
  const int m = spec_.channels;
  std::vector<double> out(n, 0.0);
  for (std::size_t q = 0; q < n; ++q) {
    double s = 0.0;
    for (int k = 0; k < m; ++k) s += values_[q * m + k] * values_[q * m + k];
    out[q] = s;
  }
  return out;
}

bool SpaceTimeField::is_zero() const {
  for (double v : values_)
    if (v != 0.0) return false;
  return true;
}

double lp_norm(const SpaceTimeField& f, double p) {
  require(p >= 1.0 && std::isfinite(p), "lp_norm: p must be >= 1");
  const auto sq = f.hilbert_norm_sq();
  double sum = 0.0;
  for (double s : sq) sum += std::pow(s, 0.5 * p);
  return std::pow(sum * f.spec().cell_volume() * f.spec().dt(), 1.0 / p);
}

double lp_norm(const ScalarField& g, double p) {
  require(p >= 1.0 && std::isfinite(p), "lp_norm: p must be >= 1");
  double sum = 0.0;
  for (double v : g.values()) sum += std::pow(std::abs(v), p);
  return std::pow(sum * g.spec().cell_volume(), 1.0 / p);
}

double sobolev_norm(const ScalarField& g, double s, double p) {
  require(s > 0.0, "sobolev_norm: s must be positive");
  require(p >= 1.0, "sobolev_norm: p must be >= 1");
  return lp_norm(bessel_potential(g, s), p);
}

}  // namespace fraclp
