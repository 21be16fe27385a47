#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fraclp/error.hpp"
#include "fraclp/quadrature.hpp"
#include "fraclp/sqop.hpp"

namespace fraclp {

namespace {

constexpr double kPi = std::numbers::pi;

void add_panel(std::vector<LagNode>& cell, double lo, double hi, int order) {
  const auto& rule = quad::gauss_legendre(order);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) cell.push_back({mid + half * rule.nodes[q], half * rule.weights[q]});
}

int cell_order(std::size_t lag) {
  if (lag <= 2) return 8;
  if (lag <= 8) return 4;
  return 2;
}

}  // namespace

PsiSpec PsiSpec::phi_half(double alpha, FourierConvention conv) {
  PsiSpec p = phi_beta(alpha, 0.5 * alpha, conv);
  p.nu = p.delta = 0.5 * alpha;
  p.lambda = 1.0;
  return p;
}

PsiSpec PsiSpec::phi_beta(double alpha, double beta, FourierConvention conv) {
  PsiSpec p;
  p.kind = Kind::PhiBeta;
  p.alpha = alpha;
  p.beta = beta;
  p.convention = conv;
  p.nu = beta;
  p.delta = beta;
  p.lambda = 1.0;
  p.k_const = 1.0;
  return p;
}

PsiSpec PsiSpec::custom(double alpha, std::function<double(double)> symbol, double nu, double lambda, double delta,
                        double k_const) {
  PsiSpec p;
  p.kind = Kind::Custom;
  p.alpha = alpha;
  p.custom_symbol = std::move(symbol);
  p.nu = nu;
  p.lambda = lambda;
  p.delta = delta;
  p.k_const = k_const;
  return p;
}

void PsiSpec::validate() const {
  require(alpha > 0.0 && alpha < 2.0, "psi: alpha must lie in (0, 2)");
  require(nu > 0.0 && lambda > 0.0 && delta > 0.0 && k_const > 0.0,
          "psi: nu, lambda, delta and K must be positive");
  if (kind == Kind::PhiBeta) {
    require(beta > 0.0 && std::isfinite(beta), "psi: phi_beta needs beta > 0");
  } else {
    require(static_cast<bool>(custom_symbol), "psi: custom kind needs a symbol");
  }
}

double PsiSpec::rate() const { return semigroup_rate(convention, alpha); }

double PsiSpec::symbol(double rho) const {
  if (kind == Kind::Custom) return custom_symbol(rho);
  if (rho == 0.0) return 0.0;
  return std::pow(rho, beta) * std::exp(-rate() * std::pow(rho, alpha));
}

double PsiSpec::scaled_symbol(double xi, double tau) const {
  if (kind == Kind::Custom) return custom_symbol(xi * std::pow(tau, 1.0 / alpha));
  if (xi == 0.0) return 0.0;
  // |xi|^beta tau^{beta/alpha} e^{-rate tau |xi|^alpha}, without forming tau^{1/alpha}.
  const double xa = std::pow(xi, alpha);
  return std::pow(xa * tau, beta / alpha) * std::exp(-rate() * tau * xa);
}

std::string PsiSpec::tag() const {
  std::ostringstream os;
  if (kind == Kind::Custom)
    os << "custom";
  else
    os << "phi_beta(" << beta << ")";
  return os.str();
}

TimeQuadMesh TimeQuadMesh::build(const GridSpec& spec, double alpha, double rate) {
  spec.validate();
  require(alpha > 0.0 && alpha <= 2.0 && rate > 0.0, "time mesh: bad alpha or rate");
  TimeQuadMesh mesh;
  mesh.dt = spec.dt();
  // Below this lag e^{-rate tau |xi|^alpha} stays within 1/4 of 1 for every resolved mode.
  const double xi_max = std::sqrt(static_cast<double>(spec.dim)) * spec.nyquist();
  const double target = 0.25 / (rate * std::pow(xi_max, alpha));
  int halvings = 0;
  if (target < mesh.dt) halvings = static_cast<int>(std::ceil(std::log2(mesh.dt / target) - 1e-9));
  mesh.floor = std::ldexp(mesh.dt, -halvings);
  mesh.cells.resize(static_cast<std::size_t>(spec.nt));
  auto& first = mesh.cells[0];
  add_panel(first, 0.0, mesh.floor, 4);
  for (int j = halvings; j >= 1; --j) add_panel(first, std::ldexp(mesh.dt, -j), std::ldexp(mesh.dt, -j + 1), 6);
  for (std::size_t l = 1; l < mesh.cells.size(); ++l)
    add_panel(mesh.cells[l], l * mesh.dt, (l + 1) * mesh.dt, cell_order(l));
  return mesh;
}

void TimeQuadMesh::validate() const {
  require(dt > 0.0 && !cells.empty(), "time mesh is empty");
  for (std::size_t l = 0; l < cells.size(); ++l) {
    double prev = l * dt;
    for (const auto& node : cells[l]) {
      require(node.weight > 0.0, "time mesh weights must be positive");
      require(node.tau > prev && node.tau < (l + 1) * dt, "time mesh node outside its lag cell");
      prev = node.tau;
    }
  }
}

std::size_t TimeQuadMesh::node_count() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.size();
  return n;
}

double ParabolicBox::temporal_length() const { return std::pow(c, alpha); }

bool ParabolicBox::contains(double t, const std::array<double, 3>& x) const {
  if (!(t > s - temporal_length() && t < s)) return false;
  for (int i = 0; i < dim; ++i)
    if (!(x[i] > y[i] - 0.5 * c && x[i] < y[i] + 0.5 * c)) return false;
  return true;
}

double ParabolicBox::volume() const { return temporal_length() * std::pow(c, dim); }

}  // namespace fraclp
