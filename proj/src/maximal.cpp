#include <algorithm>
#include <cmath>
#include <complex>

#include "fraclp/error.hpp"
#include "fraclp/fft.hpp"
#include "fraclp/parallel.hpp"
#include "fraclp/sqop.hpp"

namespace fraclp {

namespace {

// Ball average of |g| for one radius by periodic FFT convolution.
std::vector<double> ball_average(const GridSpec& spec,
                                 std::span<const std::complex<double>> g_hat, double radius) {
  auto engine = FftEngine::get(spec.dim, spec.nx);
  const std::size_t npts = engine->real_size();
  std::vector<double> ball(npts, 0.0);
  const double h = spec.dx();
  const double r_cells_sq = std::pow(radius / h, 2) * (1.0 + 1e-12);
  double count = 0.0;
  for (std::size_t flat = 0; flat < npts; ++flat) {
    const auto idx = spec.unflatten(flat);
    double d2 = 0.0;
    for (int a = 0; a < spec.dim; ++a) {
      const double o = signed_wavenumber(idx[a], spec.nx);
      d2 += o * o;
    }
    if (d2 <= r_cells_sq) {
      ball[flat] = 1.0;
      count += 1.0;
    }
  }
  std::vector<std::complex<double>> ball_hat(engine->half_size());
  engine->forward(ball.data(), ball_hat.data());
  for (std::size_t s = 0; s < ball_hat.size(); ++s) ball_hat[s] *= g_hat[s];
  std::vector<double> out(npts);
  engine->inverse(ball_hat.data(), out.data());
  const double scale = 1.0 / (count * static_cast<double>(npts));
  for (std::size_t j = 0; j < npts; ++j) out[j] = std::max(0.0, out[j] * scale);
  return out;
}

}  // namespace

std::vector<double> dyadic_radii(const GridSpec& spec) {
  std::vector<double> radii{0.0};
  for (double r = spec.dx(); r <= spec.half_width * (1.0 + 1e-12); r *= 2.0) radii.push_back(r);
  return radii;
}

ScalarField maximal_x(const ScalarField& g, std::span<const double> radii) {
  require(!radii.empty(), "maximal_x needs at least one radius");
  const auto& spec = g.spec();
  std::vector<double> abs_g(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) abs_g[j] = std::abs(g[j]);
  std::vector<double> best(g.size(), 0.0);
  auto engine = FftEngine::get(spec.dim, spec.nx);
  std::vector<std::complex<double>> g_hat(engine->half_size());
  bool have_hat = false;
  for (double r : radii) {
    require(r >= 0.0 && r <= spec.half_width * (1.0 + 1e-12), "maximal_x radii must lie in [0, L]");
    if (r < spec.dx()) {
      for (std::size_t j = 0; j < best.size(); ++j) best[j] = std::max(best[j], abs_g[j]);
      continue;
    }
    if (!have_hat) {
      engine->forward(abs_g.data(), g_hat.data());
      have_hat = true;
    }
    const auto avg = ball_average(spec, g_hat, r);
    for (std::size_t j = 0; j < best.size(); ++j) best[j] = std::max(best[j], avg[j]);
  }
  return ScalarField(spec, std::move(best));
}

std::vector<int> dyadic_half_widths(int n) {
  std::vector<int> w{0};
  for (int r = 1; r < n; r *= 2) w.push_back(r);
  return w;
}

std::vector<double> maximal_t(std::span<const double> series, std::span<const int> half_widths) {
  require(!half_widths.empty(), "maximal_t needs at least one window");
  const int n = static_cast<int>(series.size());
  std::vector<double> prefix(series.size() + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + std::abs(series[i]);
  std::vector<double> out(series.size(), 0.0);
  for (int r : half_widths) {
    require(r >= 0, "maximal_t half-widths must be >= 0");
    for (int i = 0; i < n; ++i) {
      const int lo = std::max(0, i - r), hi = std::min(n, i + r + 1);
      out[i] = std::max(out[i], (prefix[hi] - prefix[lo]) / (2.0 * r + 1.0));
    }
  }
  return out;
}

std::vector<double> maximal_tx_of_norm_sq(const SpaceTimeField& f) {
  const auto& spec = f.spec();
  const std::size_t npts = spec.points();
  const auto norm_sq = f.hilbert_norm_sq();
  const auto radii = dyadic_radii(spec);
  std::vector<double> mx(norm_sq.size());
  parallel_for(static_cast<std::size_t>(spec.nt), [&](std::size_t i) {
    std::vector<double> slice(norm_sq.begin() + i * npts, norm_sq.begin() + (i + 1) * npts);
    const auto m = maximal_x(ScalarField(spec, std::move(slice)), radii);
    std::copy(m.values().begin(), m.values().end(), mx.begin() + i * npts);
  });
  const auto widths = dyadic_half_widths(spec.nt);
  std::vector<double> out(norm_sq.size());
  parallel_for(npts, [&](std::size_t j) {
    std::vector<double> series(static_cast<std::size_t>(spec.nt));
    for (int i = 0; i < spec.nt; ++i) series[i] = mx[i * npts + j];
    const auto m = maximal_t(series, widths);
    for (int i = 0; i < spec.nt; ++i) out[i * npts + j] = m[i];
  });
  return out;
}

std::vector<double> dyadic_scales(const GridSpec& spec, double alpha) {
  std::vector<double> scales;
  const double window = spec.t_end - spec.t_begin;
  for (double c = 2.0 * spec.dx(); c <= spec.half_width * (1.0 + 1e-12); c *= 2.0) {
    if (std::pow(c, alpha) > window) break;
    scales.push_back(c);
  }
  return scales;
}

std::vector<double> sharp_function(const GridSpec& spec, std::span<const double> g, double alpha,
                                   std::span<const double> scales) {
  spec.validate();
  require(!scales.empty(), "sharp function needs at least one scale");
  require(alpha > 0.0 && alpha <= 2.0, "sharp function: alpha must lie in (0, 2]");
  const std::size_t npts = spec.points();
  require(g.size() == npts * static_cast<std::size_t>(spec.nt), "sharp function: field shape mismatch");
  for (double v : g) require(std::isfinite(v), "sharp function: non-finite input");
  const int d = spec.dim, nx = spec.nx, nt = spec.nt;
  std::vector<double> out(g.size(), 0.0);

  for (double c : scales) {
    require(c > 0.0, "sharp function scales must be > 0");
    const int wx = std::max(1, static_cast<int>(std::lround(c / spec.dx())));
    const int wt = std::max(1, static_cast<int>(std::lround(std::pow(c, alpha) / spec.dt())));
    require(wx <= nx && wt <= nt, "sharp function: box larger than the grid");
    const int sx = std::max(1, wx / 4), st = std::max(1, wt / 4);
    std::vector<int> t_anchor;
    for (int a = 0; a + wt <= nt; a += st) t_anchor.push_back(a);
    if (t_anchor.back() + wt < nt) t_anchor.push_back(nt - wt);
    const int nxa = (nx + sx - 1) / sx;
    int space_boxes = 1;
    for (int k = 0; k < d; ++k) space_boxes *= nxa;
    int cells_per_box_x = 1;
    for (int k = 0; k < d; ++k) cells_per_box_x *= wx;

    const std::size_t n_boxes = t_anchor.size() * static_cast<std::size_t>(space_boxes);
    std::vector<double> mad(n_boxes);
    auto cell_index = [&](int box_space, int offset, std::array<int, 3>& idx) {
      int b = box_space, o = offset;
      for (int k = d - 1; k >= 0; --k) {
        const int corner = (b % nxa) * sx;
        idx[k] = (corner + o % wx) % nx;
        b /= nxa;
        o /= wx;
      }
      for (int k = d; k < 3; ++k) idx[k] = 0;
    };
    parallel_for(n_boxes, [&](std::size_t b) {
      const int ta = t_anchor[b / space_boxes];
      const int bs = static_cast<int>(b % space_boxes);
      std::array<int, 3> idx{};
      double sum = 0.0;
      for (int it = 0; it < wt; ++it)
        for (int o = 0; o < cells_per_box_x; ++o) {
          cell_index(bs, o, idx);
          sum += g[(ta + it) * npts + spec.flatten(idx)];
        }
      const double count = static_cast<double>(wt) * cells_per_box_x;
      const double mean = sum / count;
      double dev = 0.0;
      for (int it = 0; it < wt; ++it)
        for (int o = 0; o < cells_per_box_x; ++o) {
          cell_index(bs, o, idx);
          dev += std::abs(g[(ta + it) * npts + spec.flatten(idx)] - mean);
        }
      mad[b] = dev / count;
    });
    // Spread each box value over its cells (fixed box order, max is order independent).
    for (std::size_t b = 0; b < n_boxes; ++b) {
      const int ta = t_anchor[b / space_boxes];
      const int bs = static_cast<int>(b % space_boxes);
      std::array<int, 3> idx{};
      for (int it = 0; it < wt; ++it)
        for (int o = 0; o < cells_per_box_x; ++o) {
          cell_index(bs, o, idx);
          double& slot = out[(ta + it) * npts + spec.flatten(idx)];
          slot = std::max(slot, mad[b]);
        }
    }
  }
  return out;
}

}  // namespace fraclp
