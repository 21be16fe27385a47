#include "fraclp/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "fraclp/error.hpp"

namespace fraclp::quad {
namespace {

GaussRule build_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  require(n >= 1 && n <= 512, "gauss_legendre: order out of range");
  static std::mutex m;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(build_rule(n));
  return *slot;
}

}  // namespace fraclp::quad
