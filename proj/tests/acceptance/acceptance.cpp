// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "peup/extremal_search.hpp"
#include "peup/inequality_verifier.hpp"
#include "peup/judge_variance.hpp"
#include "peup/momentum_stats.hpp"
#include "peup/periodic_state.hpp"
#include "peup/reports.hpp"

using namespace peup;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

// AC1
Outcome uniform_angle_variance() {
  const PeriodicDomain d(2.0 * kPi, 64);
  const auto psi = make_state({MomentumEigenstate{0}, 1, 0}, d).front();
  const double exact = kPi * kPi / 3.0;
  const double got = fixed_branch_variance(psi);
  const double quadrature = oracle::uniform_angle_variance();
  const double err = std::abs(got - exact) / exact;
  const double qerr = std::abs(quadrature - exact) / exact;
  return {err <= 1e-10 && qerr <= 1e-10,
          fmt("variance %.16e vs pi^2/3, rel err %.2e (quadrature oracle %.2e)", got, err, qerr)};
}

std::vector<WaveFunction> random_ensemble(int count, int band_limit, std::uint64_t seed, const PeriodicDomain& d) {
  return make_state({BandLimitedRandom{band_limit}, count, seed}, d);
}

// AC2 and AC3 share one ensemble
struct EnsembleScan {
  double worst_average_error = 0.0;
  long long violations = 0;
  long long samples = 0;
};

EnsembleScan scan_ensemble() {
  const PeriodicDomain d(1.0, 256);
  EnsembleScan scan;
  const auto states = random_ensemble(1000, 32, 20240601, d);
  for (const auto& psi : states) {
    const auto profile = minimize_V(psi, 256);
    const auto s = check_structural_bounds(profile);
    scan.worst_average_error = std::max(scan.worst_average_error, s.period_average_rel_error);
    scan.violations += s.bound_violations;
    scan.samples += static_cast<long long>(profile.gamma.size());
  }
  return scan;
}

// AC4
Outcome pointwise_bound() {
  long long states = 0;
  long long violations = 0;
  double worst = INFINITY;
  const int band_limits[] = {1, 2, 3, 4, 6, 8, 12, 16, 32, 64};
  const double lengths[] = {1.0, 2.0 * kPi, 0.37, 5.0, 1.0, 12.5, 1.0, 2.0, 0.8, 1.0};
  const double hbars[] = {1.0, 1.0, 0.5, 2.0, 1.0, 1.0, 3.0, 1.0, 0.1, 1.0};
  for (int s = 0; s < 10; ++s) {
    const PeriodicDomain d(lengths[s], 256, hbars[s]);
    const auto ensemble = random_ensemble(1000, band_limits[s], 1000 + static_cast<std::uint64_t>(s), d);
    for (const auto& psi : ensemble) {
      const auto report = make_report(psi, 256);
      const double scaled = report.pointwise_min_margin / (0.25 * d.hbar() * d.hbar());
      worst = std::min(worst, scaled);
      if (!report.pointwise_ok()) ++violations;
      ++states;
    }
  }
  // a narrow-packet family close to saturating the bound
  const PeriodicDomain d(1.0, 256);
  for (int i = 0; i < 50; ++i) {
    const double sigma = 0.004 + 0.002 * i;
    const auto psi = make_state({WrappedGaussian{0.013 * i, sigma}, 1, 0}, d).front();
    const auto report = make_report(psi, 256);
    worst = std::min(worst, report.pointwise_min_margin / 0.25);
    if (!report.pointwise_ok()) ++violations;
    ++states;
  }
  return {violations == 0 && states >= 10000,
          fmt("%lld states over 10 seeds, %lld violations, worst margin %.3e (units of hbar^2/4)", states, violations,
              worst)};
}

// AC5
Outcome saturation() {
  const PeriodicDomain d(1.0, 256);
  const double twelfth = 1.0 / 12.0;
  double worst_dx = 0.0, worst_rhs = 0.0;
  bool ok = true;
  int count = 0;
  for (int n = -32; n <= 32; ++n) {
    const auto psi = make_state({MomentumEigenstate{n}, 1, 0}, d).front();
    const auto r = make_report(psi, 256);
    worst_dx = std::max(worst_dx, std::abs(r.delta_x_sq - twelfth));
    worst_rhs = std::max(worst_rhs, std::abs(r.eup_rhs(1.0)));
    ok = ok && r.delta_p == 0.0 && r.product == 0.0 && std::abs(r.delta_x_sq - twelfth) <= 1e-10 &&
         std::abs(r.eup_rhs(1.0)) <= 1e-10 && r.saturated;
    ++count;
  }
  return {ok, fmt("%d eigenstates |n| <= N/8: dp = 0, max |dx^2 - L^2/12| %.2e, max |rhs| %.2e", count, worst_dx,
                  worst_rhs)};
}

// AC6
Outcome translation_invariance() {
  oracle::Generator gen(606);
  const PeriodicDomain d(1.0, 256);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int m = gen.integer(1, 32);
    const auto psi = WaveFunction::from_modes(d, gen.coefficients(m), -m);
    const double a = gen.uniform(-2.0, 2.0);
    const double dx = std::sqrt(minimize_V(psi, 256).delta_x_sq);
    const double moved = std::sqrt(minimize_V(translate(psi, a), 256).delta_x_sq);
    worst = std::max(worst, std::abs(dx - moved));
  }
  return {worst <= 1e-10, fmt("100 (psi, a) pairs, max |d dx| = %.2e L", worst)};
}

// AC7
Outcome derivative_identities() {
  oracle::Generator gen(707);
  // gate: central differences at h = 1e-4 L on L = 2 pi, band limit 2
  const double L = 2.0 * kPi;
  const PeriodicDomain d(L, 256);
  const double h = 1e-4 * L;
  const double tolerance = std::max(1e-8, 10.0 * h * h);
  double worst_vp = 0.0, worst_vpp = 0.0;
  const auto states = random_ensemble(50, 2, 7070, d);
  for (const auto& psi : states) {
    for (int i = 0; i < 20; ++i) {
      const double g = gen.uniform(-0.5 * L, 0.5 * L);
      const double fd_vp = (eval_V(psi, g + h) - eval_V(psi, g - h)) / (2.0 * h);
      const double fd_vpp = (eval_Vp(psi, g + h) - eval_Vp(psi, g - h)) / (2.0 * h);
      worst_vp = std::max(worst_vp, std::abs(eval_Vp(psi, g) - fd_vp));
      worst_vpp = std::max(worst_vpp, std::abs(eval_Vpp(psi, g) - fd_vpp));
    }
  }
  // supplement: L = 1, band limit 8, Richardson-extrapolated differences against 1e-8
  const PeriodicDomain unit(1.0, 256);
  const double hu = 1e-4;
  double worst_rich = 0.0;
  const auto rough = random_ensemble(50, 8, 7071, unit);
  auto richardson = [&](const std::function<double(double)>& f, double g) {
    const double d1 = (f(g + hu) - f(g - hu)) / (2.0 * hu);
    const double d2 = (f(g + 2 * hu) - f(g - 2 * hu)) / (4.0 * hu);
    return (4.0 * d1 - d2) / 3.0;
  };
  for (const auto& psi : rough) {
    const auto spectrum = DensitySpectrum::from_wave_function(psi);
    for (int i = 0; i < 20; ++i) {
      const double g = gen.uniform(-0.5, 0.5);
      const double vp = richardson([&](double x) { return spectrum.V(x); }, g);
      const double vpp = richardson([&](double x) { return spectrum.Vp(x); }, g);
      worst_rich = std::max({worst_rich, std::abs(eval_Vp(psi, g) - vp), std::abs(eval_Vpp(psi, g) - vpp)});
    }
  }
  return {worst_vp <= tolerance && worst_vpp <= tolerance && worst_rich <= 1e-8,
          fmt("L=2pi n_max=2: max err V' %.2e, V'' %.2e (tol %.2e); L=1 n_max=8 Richardson %.2e (tol 1e-8)",
              worst_vp, worst_vpp, tolerance, worst_rich)};
}

// AC8
Outcome momentum_oracle() {
  const PeriodicDomain d(1.0, 512);
  double worst = 0.0;
  double worst_native = 0.0;
  int count = 0;
  for (int band : {8, 16, 32, 64}) {
    const auto states = random_ensemble(10, band, 8080 + static_cast<std::uint64_t>(band), d);
    for (const auto& psi : states) {
      const double spectral = momentum_stats(psi).delta_p_sq;
      worst = std::max(worst, std::abs(momentum_stats_fd(psi, 4).delta_p_sq - spectral) / spectral);
      worst_native = std::max(worst_native, std::abs(momentum_stats_fd(psi).delta_p_sq - spectral) / spectral);
      ++count;
    }
  }
  return {worst <= 1e-3, fmt("%d states n_max <= N/8, N=512: max rel err %.2e (refined stencil); native grid %.2e",
                             count, worst, worst_native)};
}

// AC9
Outcome sharp_constant() {
  reports::RunConfig config;
  config.length = 2.0 * kPi;
  config.grid_points = 256;
  config.band_limit = 8;
  config.restarts = 32;
  config.seed = 1;
  config.oracle_samples = 1000000;
  config.oracle_margin = 1e-3;
  const auto report = reports::run_extremal(config);
  const double reeval_err = std::abs(report.reevaluated_ratio - report.result.nu_star);
  const bool ok = report.result.success && report.result.trace.size() >= 32 && reeval_err <= 1e-8 &&
                  report.oracle && report.oracle->below_threshold == 0 && !report.comparison.statement.empty();
  std::printf("     %s\n", report.comparison.statement.c_str());
  return {ok, fmt("nu* = %.10f, re-evaluation err %.2e, oracle best %.10f over %lld samples, %lld below nu* - 1e-3",
                  report.result.nu_star, reeval_err, report.oracle ? report.oracle->best_ratio : NAN,
                  report.oracle_samples, report.oracle ? report.oracle->below_threshold : -1LL)};
}

// AC10
std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& cli) {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "peup_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "verify.json") << R"({"kind": "band_limited_random", "count": 200, "seed": 42})";
  std::ofstream(dir / "extremal.json") << R"({"band_limit": 8, "restarts": 8, "seed": 3, "oracle_samples": 10000})";
  bool ok = true;
  std::string detail;
  for (const std::string name : {"verify", "extremal"}) {
    for (const std::string run : {"a", "b"}) {
      const auto out = dir / (name + "_" + run + ".out");
      const std::string command = "\"" + cli + "\" " + name + " --config \"" + (dir / (name + ".json")).string() +
                                  "\" --out \"" + out.string() + "\"";
      if (std::system(command.c_str()) != 0) ok = false;
    }
    const auto a = slurp(dir / (name + "_a.out"));
    const auto b = slurp(dir / (name + "_b.out"));
    const bool same = !a.empty() && a == b;
    ok = ok && same;
    detail += name + (same ? " identical (" : " DIFFERENT (") + std::to_string(a.size()) + " bytes) ";
  }
  fs::remove_all(dir);
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "peup";
  int failures = 0;
  auto report = [&](int id, const char* title, const std::function<Outcome()>& run) {
    const auto start = std::chrono::steady_clock::now();
    const auto outcome = run();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::printf("AC%-2d %s  %s: %s [%.1fs]\n", id, outcome.pass ? "PASS" : "FAIL", title, outcome.detail.c_str(),
                seconds);
    std::fflush(stdout);
  };

  report(1, "uniform angular variance = pi^2/3", uniform_angle_variance);
  EnsembleScan scan;
  report(2, "period average of V = L^2/12", [&] {
    scan = scan_ensemble();
    return Outcome{scan.worst_average_error <= 1e-9,
                   fmt("1000 states N=256, worst rel err %.2e", scan.worst_average_error)};
  });
  report(3, "structural bounds on V, V', V''", [&] {
    return Outcome{scan.violations == 0, fmt("%lld samples, %lld violations", scan.samples, scan.violations)};
  });
  report(4, "exact pointwise bound", pointwise_bound);
  report(5, "eigenstate saturation", saturation);
  report(6, "translation invariance of dx", translation_invariance);
  report(7, "derivative identities", derivative_identities);
  report(8, "spectral vs finite-difference momentum", momentum_oracle);
  report(9, "sharp-constant estimate", sharp_constant);
  report(10, "byte-identical CLI output", [&] { return determinism(cli); });

  std::printf("%s: %d of 10 criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
