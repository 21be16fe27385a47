#include "fraclp/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fraclp/diagnostics.hpp"
#include "fraclp/error.hpp"
#include "fraclp/fft.hpp"

namespace fraclp {
namespace {

constexpr double kPi = std::numbers::pi;

// (-1)^{k_1 + ... + k_d}: shifts the FFT origin from x_0 = -L to x = 0.
double origin_phase(const std::array<int, 3>& k) { return ((k[0] + k[1] + k[2]) & 1) ? -1.0 : 1.0; }

void check_resolution(const GridSpec& spec, double t, double alpha, FourierConvention conv) {
  const double effective = t * semigroup_rate(conv, alpha);
  if (effective < resolution_time(spec, alpha)) {
    std::ostringstream msg;
    msg << "semigroup time " << t << " is below the grid resolution time " << resolution_time(spec, alpha)
        << "; the symbol is close to 1 on the whole resolved band";
    warn(msg.str());
  }
}

}  // namespace

double semigroup_rate(FourierConvention conv, double alpha) {
  return conv == FourierConvention::Paper ? std::pow(2.0 * kPi, alpha) : 1.0;
}

double kernel_mass(FourierConvention conv, int dim) {
  return conv == FourierConvention::Paper ? std::pow(2.0 * kPi, dim) : 1.0;
}

double resolution_time(const GridSpec& spec, double alpha) { return std::pow(spec.dx() / kPi, alpha); }

Spectrum::Spectrum(GridSpec spec, std::vector<std::complex<double>> half) : spec_(spec), half_(std::move(half)) {
  spec_.validate();
  require(half_.size() == FftEngine::get(spec_.dim, spec_.nx)->half_size(), "spectrum: size does not match grid");
}

std::complex<double> Spectrum::at(const std::array<int, 3>& k) const {
  const int n = spec_.nx;
  const int d = spec_.dim;
  std::array<int, 3> kk = k;
  for (int a = 0; a < d; ++a) require(kk[a] >= -n / 2 && kk[a] < n / 2, "spectrum: wavenumber out of range");
  bool conj = false;
  int last = kk[d - 1];
  if (last < 0 && last != -n / 2) {
    for (int a = 0; a < d; ++a) kk[a] = -kk[a];
    conj = true;
  }
  // -n/2 on the halved axis is stored at index n/2 (same residue mod n).
  std::size_t flat = 0;
  for (int a = 0; a < d - 1; ++a) flat = flat * n + static_cast<std::size_t>((kk[a] % n + n) % n);
  const int stored_last = kk[d - 1] == -n / 2 ? n / 2 : kk[d - 1];
  flat = flat * (n / 2 + 1) + static_cast<std::size_t>(stored_last);
  const auto v = half_[flat];
  return conj ? std::conj(v) : v;
}

double Spectrum::xi_norm(std::size_t s) const {
  const auto& ksq = FftEngine::get(spec_.dim, spec_.nx)->half_k_sq();
  return kPi / spec_.half_width * std::sqrt(ksq[s]);
}

Spectrum dft_forward(const ScalarField& g) {
  const auto& spec = g.spec();
  auto engine = FftEngine::get(spec.dim, spec.nx);
  std::vector<std::complex<double>> half(engine->half_size());
  engine->forward(g.values().data(), half.data());
  const double scale = spec.cell_volume();
  for (std::size_t s = 0; s < half.size(); ++s) half[s] *= scale * origin_phase(engine->half_wavenumber(s));
  return Spectrum(spec, std::move(half));
}

ScalarField dft_inverse(const Spectrum& spectrum) {
  const auto& spec = spectrum.spec();
  auto engine = FftEngine::get(spec.dim, spec.nx);
  std::vector<std::complex<double>> half(spectrum.half().begin(), spectrum.half().end());
  for (std::size_t s = 0; s < half.size(); ++s) half[s] *= origin_phase(engine->half_wavenumber(s));
  std::vector<double> out(engine->real_size());
  engine->inverse(half.data(), out.data());
  const double scale = 1.0 / std::pow(2.0 * spec.half_width, spec.dim);
  for (double& v : out) v *= scale;
  return ScalarField(spec, std::move(out));
}

MultiplierSpec MultiplierSpec::frac_laplacian(double beta) {
  MultiplierSpec m;
  m.family = Family::FracLaplacian;
  m.beta = beta;
  return m;
}

MultiplierSpec MultiplierSpec::semigroup(double t, double alpha, FourierConvention conv) {
  MultiplierSpec m;
  m.family = Family::Semigroup;
  m.t = t;
  m.alpha = alpha;
  m.convention = conv;
  return m;
}

MultiplierSpec MultiplierSpec::deriv_semigroup(double t, double alpha, double beta, FourierConvention conv) {
  MultiplierSpec m;
  m.family = Family::DerivSemigroup;
  m.t = t;
  m.alpha = alpha;
  m.beta = beta;
  m.convention = conv;
  return m;
}

MultiplierSpec MultiplierSpec::bessel_potential(double s) {
  MultiplierSpec m;
  m.family = Family::BesselPotential;
  m.s = s;
  return m;
}

void MultiplierSpec::validate() const {
  switch (family) {
    case Family::FracLaplacian:
      require(beta >= 0.0 && std::isfinite(beta), "multiplier: beta must be >= 0");
      break;
    case Family::DerivSemigroup:
      require(beta >= 0.0 && std::isfinite(beta), "multiplier: beta must be >= 0");
      [[fallthrough]];
    case Family::Semigroup:
      require(t > 0.0 && std::isfinite(t), "multiplier: t must be > 0");
      require(alpha > 0.0 && alpha <= 2.0, "multiplier: alpha must lie in (0, 2]");
      break;
    case Family::BesselPotential:
      require(s > 0.0 && std::isfinite(s), "multiplier: s must be > 0");
      break;
  }
}

double MultiplierSpec::operator()(double xi, int dim) const {
  switch (family) {
    case Family::FracLaplacian:
      return std::pow(xi, beta);
    case Family::Semigroup:
      return kernel_mass(convention, dim) * std::exp(-semigroup_rate(convention, alpha) * t * std::pow(xi, alpha));
    case Family::DerivSemigroup:
      return kernel_mass(convention, dim) * std::pow(xi, beta) *
             std::exp(-semigroup_rate(convention, alpha) * t * std::pow(xi, alpha));
    case Family::BesselPotential:
      return std::pow(1.0 + xi * xi, 0.5 * s);
  }
  return 0.0;
}

ScalarField apply_radial_symbol(const ScalarField& g, const std::function<double(double)>& symbol) {
  const auto& spec = g.spec();
  auto engine = FftEngine::get(spec.dim, spec.nx);
  std::vector<std::complex<double>> half(engine->half_size());
  engine->forward(g.values().data(), half.data());
  const auto& ksq = engine->half_k_sq();
  const double unit = kPi / spec.half_width;
  for (std::size_t s = 0; s < half.size(); ++s) half[s] *= symbol(unit * std::sqrt(ksq[s]));
  std::vector<double> out(engine->real_size());
  engine->inverse(half.data(), out.data());
  const double scale = 1.0 / static_cast<double>(engine->real_size());
  for (double& v : out) v *= scale;
  return ScalarField(spec, std::move(out));
}

std::vector<std::complex<double>> apply_radial_symbol_complex(const GridSpec& spec,
                                                              std::span<const std::complex<double>> values,
                                                              const std::function<double(double)>& symbol) {
  auto engine = FftEngine::get(spec.dim, spec.nx);
  require(values.size() == engine->real_size(), "complex multiplier: shape mismatch");
  std::vector<std::complex<double>> spec_buf(values.size()), out(values.size());
  engine->forward_complex(values.data(), spec_buf.data());
  const double unit = kPi / spec.half_width;
  for (std::size_t s = 0; s < spec_buf.size(); ++s) {
    auto k = engine->full_wavenumber(s);
    const double ksq = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
    spec_buf[s] *= symbol(unit * std::sqrt(ksq));
  }
  engine->backward_complex(spec_buf.data(), out.data());
  const double scale = 1.0 / static_cast<double>(values.size());
  for (auto& v : out) v *= scale;
  return out;
}

ScalarField apply_multiplier(const ScalarField& g, const MultiplierSpec& m) {
  m.validate();
  if (m.family == MultiplierSpec::Family::Semigroup || m.family == MultiplierSpec::Family::DerivSemigroup)
    check_resolution(g.spec(), m.t, m.alpha, m.convention);
  const int dim = g.spec().dim;
  return apply_radial_symbol(g, [&](double xi) { return m(xi, dim); });
}

ScalarField frac_laplacian(const ScalarField& g, double beta) {
  return apply_multiplier(g, MultiplierSpec::frac_laplacian(beta));
}

ScalarField semigroup_apply(const ScalarField& g, double t, double alpha, FourierConvention conv) {
  return apply_multiplier(g, MultiplierSpec::semigroup(t, alpha, conv));
}

ScalarField frac_deriv_semigroup(const ScalarField& g, double t, double alpha, double beta,
                                 FourierConvention conv) {
  return apply_multiplier(g, MultiplierSpec::deriv_semigroup(t, alpha, beta, conv));
}

ScalarField bessel_potential(const ScalarField& g, double s) {
  return apply_multiplier(g, MultiplierSpec::bessel_potential(s));
}

ScalarField partial_derivative(const ScalarField& g, int axis) {
  const auto& spec = g.spec();
  require(axis >= 0 && axis < spec.dim, "partial_derivative: axis out of range");
  auto engine = FftEngine::get(spec.dim, spec.nx);
  std::vector<std::complex<double>> half(engine->half_size());
  engine->forward(g.values().data(), half.data());
  const double unit = kPi / spec.half_width;
  for (std::size_t s = 0; s < half.size(); ++s) {
    const int k = engine->half_wavenumber(s)[axis];
    // The Nyquist mode has no consistent odd symbol on real data; drop it.
    const double xi = (k == -spec.nx / 2) ? 0.0 : unit * k;
    half[s] *= std::complex<double>(0.0, xi);
  }
  std::vector<double> out(engine->real_size());
  engine->inverse(half.data(), out.data());
  const double scale = 1.0 / static_cast<double>(engine->real_size());
  for (double& v : out) v *= scale;
  return ScalarField(spec, std::move(out));
}

ScalarField kernel_on_grid(const GridSpec& spec, double t, double alpha, double beta, FourierConvention conv) {
  const auto m = MultiplierSpec::deriv_semigroup(t, alpha, beta, conv);
  m.validate();
  auto engine = FftEngine::get(spec.dim, spec.nx);
  std::vector<std::complex<double>> half(engine->half_size());
  const auto& ksq = engine->half_k_sq();
  const double unit = kPi / spec.half_width;
  for (std::size_t s = 0; s < half.size(); ++s)
    half[s] = m(unit * std::sqrt(ksq[s]), spec.dim) * origin_phase(engine->half_wavenumber(s));
  std::vector<double> out(engine->real_size());
  engine->inverse(half.data(), out.data());
  const double scale = 1.0 / std::pow(2.0 * spec.half_width, spec.dim);
  for (double& v : out) v *= scale;
  return ScalarField(spec, std::move(out));
}

}  // namespace fraclp
