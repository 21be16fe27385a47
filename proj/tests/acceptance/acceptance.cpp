// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned here.
// Usage: fraclp_acceptance <path to fraclp cli> [criterion ...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "fraclp/families.hpp"
#include "fraclp/kernel.hpp"
#include "fraclp/quadrature.hpp"
#include "fraclp/spde.hpp"
#include "fraclp/sqop.hpp"
#include "fraclp/verify.hpp"

using namespace fraclp;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "  FAILED: " << what << "\n";
    }
  }
};

std::vector<double> geo(double a, double b, int n) {
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = a * std::pow(b / a, i / (n - 1.0));
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::vector<double> kAlphas{0.5, 1.0, 1.5};

// 1. Exact p = 2 constant.
void c1(Outcome& o) {
  FamilySpec fam;
  const auto base = family_grid(fam, 256, 128);
  const std::vector<double> ends{base.t_end, base.t_end + 1.0, base.t_end + 3.0, base.t_end + 7.0};
  for (double a : kAlphas) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = l2_identity_check(a, TestField(fam, 0), base, ends, 0.02);
    const double secs = seconds_since(t0);
    o.detail << "  alpha=" << a << " limit " << rep.limit << " ratios";
    for (const auto& r : rep.rungs) o.detail << " " << r.ratio;
    o.detail << " gap " << rep.final_relative_gap << " (" << secs << " s)\n";
    o.require(rep.increasing, "ratios increase with the window");
    o.require(rep.below_limit, "ratios stay below the limit");
    o.require(rep.final_relative_gap <= 0.02, "final rung within 2%");
    o.require(secs < 60.0, "runtime below one minute");
  }
  o.require(std::abs(l2_limit_constant(1.0) - 0.0795775) < 5e-8, "alpha = 1 target 0.0795775");
}

// 2. Contour vs the Cauchy closed form.
void c2(Outcome& o) {
  double worst = 0.0;
  for (double x : geo(0.05, 50.0, 50)) {
    const double exact = 4.0 * pi / (4.0 * pi * pi + x * x);
    worst = std::max(worst, std::abs(kernel_contour_1d(1.0, 0.0, x).value - exact));
  }
  o.detail << "  max |contour - closed form| over 50 radii: " << worst << "\n";
  o.require(worst <= 1e-8, "agreement to 1e-8");
}

// 3. Cross-method agreement with the periodized grid kernel.
void c3(Outcome& o) {
  struct Case {
    int d;
    double a, b;
  };
  const std::vector<Case> cases{{1, 1.0, 0.0},  {1, 1.0, 0.5}, {1, 0.5, 0.0}, {1, 1.5, 0.0}, {1, 1.5, 0.75},
                                {2, 1.0, 0.0},  {2, 1.5, 0.0}, {3, 1.0, 0.0}, {3, 1.5, 0.0}};
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const double tol = c.d == 1 ? 1e-5 : 1e-4;
    const double spacing = c.d == 1 ? 0.05 : c.d == 2 ? 0.25 : 0.5;
    const auto grid = kernel_cross_check_grid(c.a, c.b, c.d, tol, spacing);
    const auto pts = kernel_cross_check(c.a, c.b, grid, 0.2, 5.0);
    double worst = 0.0;
    for (const auto& p : pts) worst = std::max(worst, std::abs(p.grid_value - p.pointwise_value));
    const double secs = seconds_since(t0);
    o.detail << "  d=" << c.d << " alpha=" << c.a << " beta=" << c.b << ": L=" << grid.half_width
             << " nx=" << grid.nx << " radii=" << pts.size() << " max diff " << worst << " (" << secs << " s)\n";
    o.require(pts.size() >= 8 && worst <= tol, "cross-method tolerance");
    if (c.d == 3) o.require(secs < 300.0, "d = 3 runtime below five minutes");
  }
}

// 4. Sharp decay exponent and the kernel-bound certificate.
void c4(Outcome& o) {
  const std::vector<std::pair<int, double>> cases{{1, 0.5}, {1, 1.0}, {1, 1.5}, {2, 1.0}};
  for (auto [d, a] : cases) {
    const double r0 = std::max(100.0, std::pow(10.0, 2.0 / a));
    const auto rs = geo(r0, r0 * std::pow(10.0, 1.5), 16);
    std::vector<double> vs;
    for (double r : rs) vs.push_back(kernel_value(a, 0.0, d, r));
    const auto fit = decay_fit(rs, vs);
    o.detail << "  d=" << d << " alpha=" << a << ": exponent " << fit.exponent << " (expected " << -(d + a) << ")\n";
    o.require(std::abs(fit.exponent + d + a) <= 0.05, "decay exponent within 0.05");
    std::vector<double> betas{0.25};
    if (a / 2.0 != 0.25) betas.push_back(a / 2.0);
    for (double b : betas) {
      const double r1 = std::pow(10.0, 1.5) * r0;
      const int n1 = static_cast<int>(8.0 * std::log10(r1)) + 1;
      const auto ra = geo(1.0, r1, n1), rb = geo(1.0, 10.0 * r1, n1 + 8);
      std::vector<double> va, vb;
      for (double r : ra) va.push_back(kernel_value(a, b, d, r));
      for (double r : rb) vb.push_back(kernel_value(a, b, d, r));
      const double s1 = weighted_sup(ra, va, d + b), s2 = weighted_sup(rb, vb, d + b);
      const double drift = std::abs(s2 - s1) / s1;
      o.detail << "    beta=" << b << ": sup on [1, " << r1 << "] " << s1 << ", extended " << s2 << ", drift "
               << drift << "\n";
      o.require(std::isfinite(s2) && drift < 0.05, "certificate drift below 5%");
    }
  }
}

// 5. Envelope branch agreement, domination and tail identity.
void c5(Outcome& o) {
  struct Case {
    int d;
    double a, b;
  };
  for (const auto& c : std::vector<Case>{{1, 1.0, 0.5}, {1, 0.5, 0.25}, {1, 1.5, 0.75}, {2, 1.0, 0.5}, {3, 1.0, 0.5}}) {
    auto sweep = geo(1e-3, 1e3, 40);
    sweep.insert(sweep.begin(), 0.0);
    auto maj = [&](double r) { return envelope_majorand(c.a, c.b, c.d, r); };
    const auto fit = envelope_fit(c.a, c.b, c.d, sweep, maj);
    const auto& e = fit.envelope;
    double worst = 0.0;
    for (double r : geo(1e-3, 1e3, 120)) worst = std::max(worst, maj(r) / e.value(r));
    const double vgap = std::abs(e.left_value_at_knot() - e.right_value_at_knot()) / e.right_value_at_knot();
    const double dgap =
        std::abs(e.left_derivative_at_knot() - e.right_derivative_at_knot()) / std::abs(e.right_derivative_at_knot());
    double tail_gap = 0.0;
    for (double r : {e.knot(), 1.0, 10.0}) {
      const auto q = quad::exp_sinh(
          [&](double u) { return std::abs(e.derivative(r + u)) * std::pow(r + u, c.d); }, 1e-14, 10);
      tail_gap = std::max(tail_gap, std::abs(q.value - e.tail_integral(r)) / e.tail_integral(r));
    }
    o.detail << "  d=" << c.d << " alpha=" << c.a << " beta=" << c.b << ": N=" << e.amplitude << " knot gaps "
             << vgap << " / " << dgap << ", dense worst ratio " << worst << ", tail gap " << tail_gap << "\n";
    o.require(vgap <= 1e-12 && dgap <= 1e-12, "branch value and derivative agree to 1e-12");
    o.require(worst <= 1.0 + 1e-9, "domination on the 3x denser sweep");
    o.require(tail_gap <= 1e-8, "tail integral identity to 1e-8");
  }
}

// 6. Derivative-form identity.
void c6(Outcome& o) {
  FamilySpec fam;
  fam.channels = 2;
  for (double a : kAlphas) {
    for (int s = 0; s < 3; ++s) {
      const auto f = TestField(fam, s).sample(family_grid(fam, 256, 128));
      const auto G1 = square_function(f, f.spec().t_begin, PsiSpec::phi_half(a));
      const auto G2 = square_function_via_derivative(f, f.spec().t_begin, a, FourierConvention::Paper);
      double worst = 0.0, scale = 0.0;
      for (std::size_t k = 0; k < G1.values.size(); ++k) {
        worst = std::max(worst, std::abs(G1.values[k] - G2.values[k]));
        scale = std::max(scale, G1.values[k]);
      }
      if (s == 0) o.detail << "  alpha=" << a << ": max |difference| / max G = " << worst / scale << "\n";
      o.require(worst <= 1e-10 * scale, "identity to 1e-10");
    }
  }
}

// 7. Dilation covariance.
void c7(Outcome& o) {
  FamilySpec fam;
  const auto base = family_grid(fam, 256, 128);
  for (double a : kAlphas)
    for (double c : {0.5, 2.0}) {
      const auto rep = scaling_check(a, c, TestField(fam, 0), base);
      o.detail << "  alpha=" << a << " c=" << c << ": relative discrepancy " << rep.relative_discrepancy << "\n";
      o.require(rep.relative_discrepancy < 1e-5, "discrepancy below 1e-5");
    }
}

// 8. Stability of the empirical L_p ratios.
void c8(Outcome& o) {
  FamilySpec fam;
  const std::vector<double> ps{2.0, 4.0, 8.0};
  const std::vector<std::pair<int, int>> ladder{{128, 64}, {256, 128}, {512, 256}};
  for (double a : kAlphas) {
    for (const auto& e : lp_ratio_estimate(a, ps, fam, 50, ladder)) {
      o.detail << "  alpha=" << a << " p=" << e.p << ": max ratios";
      for (const auto& r : e.rungs) o.detail << " " << r.max;
      o.detail << ", top increase " << 100.0 * e.top_increase << "%";
      if (e.p == 2.0) o.detail << ", limit " << e.l2_limit;
      o.detail << "\n";
      o.require(e.top_increase < 0.10, "top-rung increase below 10%");
      if (e.p == 2.0) o.require(e.rungs.back().max <= e.l2_limit * 1.02, "p = 2 max within 2% of the constant");
    }
  }
}

// 9. Pointwise sharp estimate and Fefferman-Stein ratio.
void c9(Outcome& o) {
  FamilySpec fam;
  const std::vector<std::pair<int, int>> ladder{{64, 32}, {128, 64}};
  for (double a : kAlphas) {
    const auto s = pointwise_sharp_check(a, fam, 30, ladder, 0.15);
    const auto f = fefferman_stein_ratio(2.0, a, fam, 30, ladder, 0.15);
    for (const auto& [name, r] : {std::pair<const char*, const SupStability*>{"sharp", &s}, {"fefferman-stein", &f}}) {
      o.detail << "  alpha=" << a << " " << name << ": sups " << r->sup.front() << " -> " << r->sup.back()
               << ", sample drift " << r->sample_drift << ", refinement drift " << r->refine_drift << "\n";
      const bool finite = std::all_of(r->sup.begin(), r->sup.end(), [](double v) { return std::isfinite(v); });
      o.require(finite && r->sample_drift < 0.15 && r->refine_drift < 0.15, std::string(name) + " stable within 15%");
    }
  }
}

// 10. SPDE isometry and energy inequality.
void c10(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  FamilySpec fam;
  fam.generator = FamilySpec::Generator::SmoothBump;
  fam.channels = 4;
  fam.support_begin = 0.0;
  fam.support_end = 1.0;
  GridSpec g;
  g.dim = 1;
  g.half_width = 8.0;
  g.nx = 128;
  g.nt = 64;
  g.t_begin = 0.0;
  g.t_end = 1.0;
  g.channels = 4;
  const auto f = TestField(fam, 0).sample(g);
  const NoiseSpec noise{4, 2024, g.dt()};
  for (double a : kAlphas) {
    const auto res = simulate_stochastic_convolution(f, a, noise, 2000);
    const auto ito = ito_isometry_check(res, f, a);
    o.detail << "  alpha=" << a << ": E||u(T)||^2 MC " << ito.mc.mean << " +- " << ito.mc.std_error << ", oracle "
             << ito.oracle << ", z " << ito.z_score << "; zero mode z " << ito.zero_mode_z << "\n";
    o.require(std::abs(ito.z_score) <= 3.0, "isometry within 3 standard errors");
    o.require(ito.pass, "zero-mode isometry within 3 standard errors");
    for (double p : {2.0, 4.0}) {
      const auto e = energy_inequality_check(res, f, a, p);
      o.detail << "    p=" << p << ": ratios";
      for (std::size_t k = 0; k < e.ratios.size(); ++k) o.detail << " " << e.ratios[k] << "@" << e.ensemble_sizes[k];
      o.detail << "\n";
      const bool finite = std::all_of(e.ratios.begin(), e.ratios.end(), [](double v) { return std::isfinite(v); });
      o.require(finite && e.stable, "energy ratio finite and stable under doubling");
    }
  }
  const double secs = seconds_since(t0);
  o.detail << "  runtime " << secs << " s\n";
  o.require(secs < 600.0, "runtime below ten minutes");
}

// 11. Byte-identical CSV on re-run, through the CLI.
std::string cli_path;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void c11(Outcome& o) {
  const fs::path root = fs::temp_directory_path() / ("fraclp-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"kernel", "alpha = 1\nbeta = 0, 0.5\nn_radii = 12\n"},
      {"verify-l2", "alpha = 1\nnx = 128\nnt = 64\n"},
      {"estimate-constant", "alpha = 1\np = 2, 4\nsamples = 30\nladder = 64x32, 128x64\n"},
      {"scaling", "alpha = 1\nnx = 64\nnt = 32\n"},
      {"sharp", "alpha = 1\nsamples = 10\nladder = 32x16, 64x32\n"},
      {"spde", "alpha = 1\npaths = 200\nnx = 64\nnt = 32\n"},
  };
  for (const auto& [cmd, text] : runs) {
    const fs::path cfg = root / (cmd + ".cfg");
    std::ofstream(cfg) << text << "seed = 7\n";
    bool same = true;
    std::size_t files = 0;
    std::vector<fs::path> outs;
    for (int rep = 0; rep < 2; ++rep) {
      // Different worker counts on the two runs: output must not depend on scheduling.
      const fs::path out = root / (cmd + "-" + std::to_string(rep));
      const std::string line = "\"" + cli_path + "\" " + cmd + " --config \"" + cfg.string() + "\" --out \"" +
                               out.string() + "\" --workers " + (rep == 0 ? "1" : "4") + " > /dev/null 2>&1";
      const int status = std::system(line.c_str());
      const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      if (code != 0 && code != 1) {
        o.require(false, cmd + " exited with code " + std::to_string(code));
        same = false;
      }
      outs.push_back(out);
    }
    if (!fs::exists(outs[0])) continue;
    for (const auto& entry : fs::directory_iterator(outs[0])) {
      if (entry.path().extension() != ".csv") continue;
      ++files;
      const auto other = outs[1] / entry.path().filename();
      if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
        same = false;
        o.detail << "  " << cmd << ": " << entry.path().filename().string() << " differs\n";
      }
    }
    o.detail << "  " << cmd << ": " << files << " CSV files " << (same ? "identical" : "DIFFER") << "\n";
    o.require(same && files > 0, cmd + " reproduces its CSV bytes");
  }
  fs::remove_all(root);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <fraclp cli> [criterion ...]\n", argv[0]);
    return 2;
  }
  cli_path = fs::absolute(argv[1]).string();
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"exact p=2 constant", c1},
      {"contour vs Cauchy closed form", c2},
      {"cross-method kernel agreement", c3},
      {"sharp decay and kernel-bound certificate", c4},
      {"envelope", c5},
      {"derivative-form identity", c6},
      {"scaling covariance", c7},
      {"L_p ratio stability", c8},
      {"pointwise sharp and Fefferman-Stein stability", c9},
      {"SPDE isometry and energy inequality", c10},
      {"determinism", c11},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(n)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %2d: %s (%.1f s)\n%s", o.pass ? "PASS" : "FAIL", n, criteria[i].first.c_str(),
                seconds_since(t0), o.detail.str().c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
