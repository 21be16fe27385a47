#include "fraclp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclp/error.hpp"
#include "fraclp/quadrature.hpp"

namespace fraclp {

namespace {

double sum_pow(std::span<const double> v, double p) {
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), p);
  return s;
}

double sum_norm_pow(const SpaceTimeField& f, double p) {
  double s = 0.0;
  for (double n2 : f.hilbert_norm_sq()) s += std::pow(n2, 0.5 * p);
  return s;
}

void check_ladder(std::span<const std::pair<int, int>> ladder, std::size_t min_rungs) {
  require(ladder.size() >= min_rungs, "grid ladder has too few rungs");
  for (std::size_t r = 1; r < ladder.size(); ++r)
    require(ladder[r].first >= ladder[r - 1].first && ladder[r].second >= ladder[r - 1].second &&
                (ladder[r].first > ladder[r - 1].first || ladder[r].second > ladder[r - 1].second),
            "grid ladder must be strictly refining");
}

double relative_change(double from, double to) { return from > 0.0 ? (to - from) / from : 0.0; }

}  // namespace

double l2_limit_constant(double alpha, FourierConvention conv) { return 0.5 / semigroup_rate(conv, alpha); }

double quantile(std::vector<double> data, double q) {
  require(!data.empty(), "quantile of empty data");
  require(q >= 0.0 && q <= 1.0, "quantile level must lie in [0, 1]");
  std::sort(data.begin(), data.end());
  const double pos = q * (data.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, data.size() - 1);
  return data[lo] + (pos - lo) * (data[hi] - data[lo]);
}

L2IdentityReport l2_identity_check(double alpha, const TestField& f, const GridSpec& base,
                                   std::span<const double> window_ends, double tolerance, FourierConvention conv) {
  require(!window_ends.empty(), "l2 check needs a window schedule");
  const auto psi = PsiSpec::phi_half(alpha, conv);
  L2IdentityReport rep;
  rep.alpha = alpha;
  rep.limit = l2_limit_constant(alpha, conv);
  const double dt = base.dt();
  for (double b : window_ends) {
    require(b >= f.spec().support_end && base.t_begin <= f.spec().support_begin,
            "l2 check: the field must be supported inside every window");
    GridSpec g = base;
    g.t_end = b;
    g.nt = static_cast<int>(std::lround((b - base.t_begin) / dt));
    g.t_end = base.t_begin + g.nt * dt;
    const auto field = f.sample(g);
    const double denom = sum_norm_pow(field, 2.0);
    require(denom > 0.0, "l2 check: zero field");
    const auto G = square_function(field, g.t_begin, psi);
    rep.rungs.push_back({g.t_end, g.nt, sum_pow(G.values, 2.0) / denom});
  }
  for (std::size_t r = 0; r < rep.rungs.size(); ++r) {
    if (r > 0 && rep.rungs[r].ratio < rep.rungs[r - 1].ratio * (1.0 - 1e-12)) rep.increasing = false;
    if (rep.rungs[r].ratio > rep.limit * (1.0 + 1e-10)) rep.below_limit = false;
  }
  rep.final_relative_gap = std::abs(rep.rungs.back().ratio - rep.limit) / rep.limit;
  rep.pass = rep.increasing && rep.below_limit && rep.final_relative_gap <= tolerance;
  return rep;
}

std::vector<ConstantEstimate> lp_ratio_estimate(double alpha, std::span<const double> ps, const FamilySpec& family,
                                                int n_samples, std::span<const std::pair<int, int>> ladder,
                                                bool allow_outside_range) {
  require(!ps.empty(), "ratio campaign needs at least one p");
  require(n_samples >= 30, "ratio campaign needs at least 30 samples");
  check_ladder(ladder, 2);
  for (double p : ps) {
    require(p >= 1.0, "p must be >= 1");
    require(p >= 2.0 || allow_outside_range, "p < 2 lies outside the proven range; set outside_range=true");
  }
  const auto psi = PsiSpec::phi_half(alpha);
  std::vector<ConstantEstimate> est(ps.size());
  for (std::size_t k = 0; k < ps.size(); ++k) {
    est[k].alpha = alpha;
    est[k].p = ps[k];
    est[k].psi_tag = psi.tag();
    est[k].seed = family.seed;
    est[k].samples = n_samples;
    est[k].outside_proven_range = ps[k] < 2.0;
  }
  for (const auto& [nx, nt] : ladder) {
    const GridSpec grid = family_grid(family, nx, nt);
    std::vector<std::vector<double>> ratios(ps.size(), std::vector<double>(n_samples));
    for (int s = 0; s < n_samples; ++s) {
      const auto field = TestField(family, s).sample(grid);
      const auto G = square_function(field, grid.t_begin, psi);
      for (std::size_t k = 0; k < ps.size(); ++k) {
        const double denom = sum_norm_pow(field, ps[k]);
        require(denom > 0.0, "ratio campaign: zero field sample");
        ratios[k][s] = sum_pow(G.values, ps[k]) / denom;
      }
    }
    for (std::size_t k = 0; k < ps.size(); ++k) {
      RungStats st;
      st.nx = nx;
      st.nt = nt;
      st.max = *std::max_element(ratios[k].begin(), ratios[k].end());
      st.median = quantile(ratios[k], 0.5);
      st.q95 = quantile(ratios[k], 0.95);
      st.ratios = std::move(ratios[k]);
      est[k].rungs.push_back(std::move(st));
    }
  }
  for (auto& e : est) {
    const auto n = e.rungs.size();
    e.top_increase = relative_change(e.rungs[n - 2].max, e.rungs[n - 1].max);
    e.stable = std::isfinite(e.rungs.back().max) && e.top_increase < 0.10;
    if (e.p == 2.0) {
      e.l2_limit = l2_limit_constant(alpha);
      for (const auto& r : e.rungs)
        if (r.max > e.l2_limit * 1.02) e.below_l2_limit = false;
    }
    e.pass = e.stable && e.below_l2_limit;
  }
  return est;
}

std::vector<double> elliptic_inner_integral(double alpha, const ScalarField& g, double horizon,
                                            bool gaussian_gradient) {
  require(horizon > 0.0 && std::isfinite(horizon), "elliptic check: horizon must be > 0");
  if (gaussian_gradient)
    require(alpha == 2.0, "gradient mode is the alpha = 2 heat case");
  else
    require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0, 2)");
  const auto& spec = g.spec();
  const double rate = gaussian_gradient ? 1.0 : semigroup_rate(FourierConvention::Paper, alpha);
  const double xi_max = std::sqrt(static_cast<double>(spec.dim)) * spec.nyquist();
  const double floor = std::min(horizon, 0.25 / (rate * std::pow(xi_max, alpha)));

  std::vector<std::pair<double, double>> nodes;  // (s, weight)
  auto panel = [&](double lo, double hi, int order) {
    const auto& rule = quad::gauss_legendre(order);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      nodes.emplace_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[q], 0.5 * (hi - lo) * rule.weights[q]);
  };
  panel(0.0, floor, 4);
  for (double lo = floor; lo < horizon; lo *= 2.0) panel(lo, std::min(2.0 * lo, horizon), 8);

  std::vector<double> acc(g.size(), 0.0);
  for (const auto& [s, w] : nodes) {
    if (gaussian_gradient) {
      const auto smoothed = apply_radial_symbol(g, [&](double xi) { return std::exp(-s * xi * xi); });
      for (int a = 0; a < spec.dim; ++a) {
        const auto d = partial_derivative(smoothed, a);
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += w * d[j] * d[j];
      }
    } else {
      const auto v = apply_radial_symbol(g, [&](double xi) {
        const double xa = std::pow(xi, alpha);
        return std::sqrt(xa) * std::exp(-rate * s * xa);
      });
      for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += w * v[j] * v[j];
    }
  }
  return acc;
}

EllipticReport elliptic_lp_check(double alpha, double p, const ScalarField& g, std::span<const double> horizons,
                                 bool gaussian_gradient) {
  require(p >= 1.0, "p must be >= 1");
  require(!horizons.empty(), "elliptic check needs horizons");
  const double denom = sum_pow(g.values(), p);
  require(denom > 0.0, "elliptic check: zero input");
  EllipticReport rep;
  rep.alpha = alpha;
  rep.p = p;
  rep.gaussian_gradient = gaussian_gradient;
  rep.l2_limit = gaussian_gradient ? 0.5 : l2_limit_constant(alpha);
  for (double T : horizons) {
    const auto inner = elliptic_inner_integral(alpha, g, T, gaussian_gradient);
    double s = 0.0;
    for (double v : inner) s += std::pow(v, 0.5 * p);
    rep.horizons.push_back(T);
    rep.ratios.push_back(s / denom);
  }
  const auto n = rep.ratios.size();
  rep.saturation_change = n >= 2 ? std::abs(relative_change(rep.ratios[n - 2], rep.ratios[n - 1])) : 1.0;
  rep.saturated = n >= 2 && rep.saturation_change < 0.01;
  return rep;
}

double pointwise_sharp_ratio(const SpaceTimeField& f, double alpha, std::span<const double> scales) {
  const auto& spec = f.spec();
  const auto G = square_function(f, spec.t_begin, PsiSpec::phi_half(alpha));
  const auto sharp = sharp_function(spec, G.values, alpha, scales);
  auto denom = maximal_tx_of_norm_sq(f);
  double top = 0.0;
  for (double& v : denom) {
    v = std::sqrt(v);
    top = std::max(top, v);
  }
  require(top > 0.0, "pointwise sharp check: all-zero denominator");
  const double eps = 1e-10 * top;
  double sup = 0.0;
  for (std::size_t k = 0; k < denom.size(); ++k)
    if (denom[k] > eps) sup = std::max(sup, sharp[k] / denom[k]);
  return sup;
}

namespace {

SupStability sup_campaign(const FamilySpec& family, int n_samples, std::span<const std::pair<int, int>> ladder,
                          double threshold, const std::function<double(const SpaceTimeField&)>& statistic) {
  require(n_samples >= 2, "stability campaign needs at least 2 samples");
  check_ladder(ladder, 2);
  SupStability rep;
  for (const auto& [nx, nt] : ladder) {
    const GridSpec grid = family_grid(family, nx, nt);
    std::vector<double> vals(n_samples);
    for (int s = 0; s < n_samples; ++s) vals[s] = statistic(TestField(family, s).sample(grid));
    rep.sup.push_back(*std::max_element(vals.begin(), vals.end()));
    rep.per_sample.push_back(std::move(vals));
  }
  const auto& last = rep.per_sample.back();
  const double half_sup = *std::max_element(last.begin(), last.begin() + (n_samples + 1) / 2);
  rep.sample_drift = std::abs(relative_change(half_sup, rep.sup.back()));
  const auto n = rep.sup.size();
  rep.refine_drift = std::abs(relative_change(rep.sup[n - 2], rep.sup[n - 1]));
  rep.pass = std::isfinite(rep.sup.back()) && rep.sample_drift < threshold && rep.refine_drift < threshold;
  return rep;
}

}  // namespace

SupStability pointwise_sharp_check(double alpha, const FamilySpec& family, int n_samples,
                                   std::span<const std::pair<int, int>> ladder, double threshold) {
  require(!ladder.empty(), "empty ladder");
  const auto scales = dyadic_scales(family_grid(family, ladder[0].first, ladder[0].second), alpha);
  return sup_campaign(family, n_samples, ladder, threshold,
                      [&](const SpaceTimeField& f) { return pointwise_sharp_ratio(f, alpha, scales); });
}

double fefferman_stein_single(const GridSpec& spec, std::vector<double> h, double alpha, double q,
                              std::span<const double> scales) {
  require(q > 1.0 && std::isfinite(q), "Fefferman-Stein ratio needs q in (1, inf)");
  double mean = 0.0;
  for (double v : h) mean += v;
  mean /= static_cast<double>(h.size());
  for (double& v : h) v -= mean;
  const auto sharp = sharp_function(spec, h, alpha, scales);
  const double num = sum_pow(h, q), den = sum_pow(sharp, q);
  require(den > 0.0, "Fefferman-Stein ratio: sharp function vanishes (constant input)");
  return std::pow(num / den, 1.0 / q);
}

SupStability fefferman_stein_ratio(double q, double alpha, const FamilySpec& family, int n_samples,
                                   std::span<const std::pair<int, int>> ladder, double threshold) {
  require(q > 1.0, "Fefferman-Stein ratio needs q > 1");
  require(!ladder.empty(), "empty ladder");
  const auto scales = dyadic_scales(family_grid(family, ladder[0].first, ladder[0].second), alpha);
  return sup_campaign(family, n_samples, ladder, threshold, [&](const SpaceTimeField& f) {
    const auto& spec = f.spec();
    std::vector<double> h(static_cast<std::size_t>(spec.nt) * spec.points());
    for (int i = 0; i < spec.nt; ++i)
      for (std::size_t j = 0; j < spec.points(); ++j) h[i * spec.points() + j] = f.at(i, j, 0);
    return fefferman_stein_single(spec, std::move(h), alpha, q, scales);
  });
}

ScalingReport scaling_check(double alpha, double c, const TestField& f, const GridSpec& base) {
  require(c > 0.0 && std::isfinite(c), "scaling factor must be positive");
  ScalingReport rep;
  rep.alpha = alpha;
  rep.c = c;
  const double ca = std::pow(c, alpha);
  GridSpec dil = base;
  dil.half_width = base.half_width / c;
  dil.t_begin = base.t_begin / ca;
  dil.t_end = base.t_end / ca;
  require(std::abs(dil.half_width * c - f.spec().period_half_width) <= 1e-12 * f.spec().period_half_width,
          "scaling check: dilation exceeds grid coverage");
  const auto psi = PsiSpec::phi_half(alpha);
  const auto G = square_function(f.sample(base), base.t_begin, psi);
  const auto Gc = square_function(f.sample(dil, c, ca), dil.t_begin, psi);
  for (std::size_t k = 0; k < G.values.size(); ++k) {
    rep.max_abs_discrepancy = std::max(rep.max_abs_discrepancy, std::abs(G.values[k] - Gc.values[k]));
    rep.max_value = std::max(rep.max_value, std::abs(G.values[k]));
  }
  rep.relative_discrepancy = rep.max_value > 0.0 ? rep.max_abs_discrepancy / rep.max_value : rep.max_abs_discrepancy;
  rep.pass = rep.relative_discrepancy < 1e-5;
  return rep;
}

}  // namespace fraclp
