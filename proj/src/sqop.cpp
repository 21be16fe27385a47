#include <cmath>
#include <complex>
#include <numbers>

#include "fraclp/error.hpp"
#include "fraclp/fft.hpp"
#include "fraclp/parallel.hpp"
#include "fraclp/sqop.hpp"

namespace fraclp {

namespace {

constexpr double kPi = std::numbers::pi;

// Index k with t_k = a, or an error.
int start_index(const GridSpec& spec, double a) {
  const double k = (a - spec.t_begin) / spec.dt();
  const double r = std::round(k);
  require(std::abs(k - r) <= 1e-9 * std::max(1.0, std::abs(k)) && r >= 0 && r < spec.nt,
          "square function: lower limit a must be a grid time inside [a, b)");
  return static_cast<int>(r);
}

// Shared driver: G(t_i, x)^2 = sum_{n < i} sum_{q in cell i-1-n} |IFFT(m_q * f^_n)|^2,
// where m_q already carries the quadrature weight and the 1/(t - s) factor.
using NodeSymbol = std::function<double(double xi, const LagNode& node)>;

SquareFunctionResult run_square_function(const SpaceTimeField& f, double a, const TimeQuadMesh& mesh,
                                         const NodeSymbol& node_symbol) {
  const auto& spec = f.spec();
  spec.validate();
  mesh.validate();
  require(std::abs(mesh.dt - spec.dt()) <= 1e-12 * spec.dt(), "square function: mesh step differs from grid step");
  require(mesh.cells.size() >= static_cast<std::size_t>(spec.nt), "square function: mesh too short for the grid");
  const int first = start_index(spec, a);
  const int nt = spec.nt, m = spec.channels;
  auto engine = FftEngine::get(spec.dim, spec.nx);
  const std::size_t half = engine->half_size(), npts = engine->real_size();

  // Source spectra, (time, channel) blocks.
  std::vector<std::complex<double>> fhat(static_cast<std::size_t>(nt) * m * half);
  std::vector<char> active(static_cast<std::size_t>(nt) * m, 0);
  parallel_for(static_cast<std::size_t>(nt) * m, [&](std::size_t b) {
    const int n = static_cast<int>(b / m), ch = static_cast<int>(b % m);
    if (n < first) return;
    std::vector<double> slice(npts);
    bool any = false;
    for (std::size_t j = 0; j < npts; ++j) {
      slice[j] = f.at(n, j, ch);
      any = any || slice[j] != 0.0;
    }
    if (!any) return;
    active[b] = 1;
    engine->forward(slice.data(), fhat.data() + b * half);
  });

  // Node multipliers with the FFT normalization folded in.
  const double unit = kPi / spec.half_width;
  const double norm = 1.0 / static_cast<double>(npts);
  const auto& ksq = engine->half_k_sq();
  std::vector<std::vector<std::vector<double>>> mult(static_cast<std::size_t>(nt));
  parallel_for(static_cast<std::size_t>(nt), [&](std::size_t l) {
    const auto& cell = mesh.cells[l];
    mult[l].assign(cell.size(), std::vector<double>(half));
    for (std::size_t q = 0; q < cell.size(); ++q)
      for (std::size_t s = 0; s < half; ++s) mult[l][q][s] = norm * node_symbol(unit * std::sqrt(ksq[s]), cell[q]);
  });

  SquareFunctionResult result{spec, std::vector<double>(static_cast<std::size_t>(nt) * npts, 0.0), mesh};
  parallel_for(static_cast<std::size_t>(nt), [&](std::size_t io) {
    const int i = static_cast<int>(io);
    if (i <= first) return;
    std::vector<std::complex<double>> buf(half);
    std::vector<double> out(npts);
    double* acc = result.values.data() + io * npts;
    for (int n = first; n < i; ++n) {
      const auto& cell_mult = mult[static_cast<std::size_t>(i - 1 - n)];
      for (int ch = 0; ch < m; ++ch) {
        const std::size_t b = static_cast<std::size_t>(n) * m + ch;
        if (!active[b]) continue;
        const auto* src = fhat.data() + b * half;
        for (const auto& mq : cell_mult) {
          for (std::size_t s = 0; s < half; ++s) buf[s] = src[s] * mq[s];
          engine->inverse(buf.data(), out.data());
          for (std::size_t j = 0; j < npts; ++j) acc[j] += out[j] * out[j];
        }
      }
    }
    for (std::size_t j = 0; j < npts; ++j) acc[j] = std::sqrt(acc[j]);
  });
  return result;
}

}  // namespace

double SquareFunctionResult::lp_norm(double p) const {
  require(p >= 1.0, "lp norm needs p >= 1");
  double sum = 0.0;
  for (double v : values) sum += std::pow(std::abs(v), p);
  return std::pow(sum * spec.cell_volume() * spec.dt(), 1.0 / p);
}

ScalarField psi_transform(const ScalarField& slice, double tau, const PsiSpec& psi) {
  psi.validate();
  require(tau > 0.0 && std::isfinite(tau), "psi transform needs tau > 0");
  return apply_radial_symbol(slice, [&](double xi) { return psi.scaled_symbol(xi, tau); });
}

SquareFunctionResult square_function(const SpaceTimeField& f, double a, const PsiSpec& psi,
                                     const TimeQuadMesh& mesh) {
  psi.validate();
  return run_square_function(f, a, mesh, [&](double xi, const LagNode& node) {
    return std::sqrt(node.weight / node.tau) * psi.scaled_symbol(xi, node.tau);
  });
}

SquareFunctionResult square_function(const SpaceTimeField& f, double a, const PsiSpec& psi) {
  psi.validate();
  return square_function(f, a, psi, TimeQuadMesh::build(f.spec(), psi.alpha, psi.rate()));
}

SquareFunctionResult square_function_via_derivative(const SpaceTimeField& f, double a, double alpha,
                                                    FourierConvention conv, const TimeQuadMesh& mesh) {
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0, 2)");
  const double rate = semigroup_rate(conv, alpha);
  return run_square_function(f, a, mesh, [&](double xi, const LagNode& node) {
    const double xa = std::pow(xi, alpha);
    return std::sqrt(node.weight) * std::sqrt(xa) * std::exp(-rate * node.tau * xa);
  });
}

SquareFunctionResult square_function_via_derivative(const SpaceTimeField& f, double a, double alpha,
                                                    FourierConvention conv) {
  return square_function_via_derivative(f, a, alpha, conv,
                                        TimeQuadMesh::build(f.spec(), alpha, semigroup_rate(conv, alpha)));
}

}  // namespace fraclp
