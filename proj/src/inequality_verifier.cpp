#include "peup/inequality_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace peup {

double eup_factor(double delta_x_sq, double length) { return 1.0 - 12.0 * delta_x_sq / (length * length); }

StructuralCheck check_structural_bounds(const VarianceProfile& profile) {
  const double length = profile.length;
  StructuralCheck check;
  for (std::size_t i = 0; i < profile.V.size(); ++i) {
    const double v = profile.V[i];
    if (v < -kStructuralSlack || v > 0.25 * length * length + kStructuralSlack) ++check.bound_violations;
    if (i < profile.Vp.size()) {
      const double vp = profile.Vp[i];
      if (vp < -length - kStructuralSlack || vp >= length + kStructuralSlack) ++check.bound_violations;
    }
    if (i < profile.Vpp.size() && profile.Vpp[i] > 2.0 + kStructuralSlack) ++check.bound_violations;
  }
  const double expected = length * length / 12.0;
  check.period_average_rel_error = std::abs(profile.period_average() - expected) / expected;
  return check;
}

double verify_pointwise_bound(const WaveFunction& psi, const VarianceProfile& profile, const MomentumStats& momentum) {
  const double length = psi.domain().length();
  const double hbar = psi.domain().hbar();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < profile.gamma.size(); ++i) {
    const double boundary = 1.0 - length * density_at(psi, 0.5 * length + profile.gamma[i]);
    const double margin = momentum.delta_p_sq * profile.V[i] - 0.25 * hbar * hbar * boundary * boundary;
    worst = std::min(worst, margin);
  }
  return worst;
}

double verify_pointwise_bound(const WaveFunction& psi, const VarianceProfile& profile) {
  return verify_pointwise_bound(psi, profile, momentum_stats(psi));
}

EupCheck verify_eup(const WaveFunction& psi, const VarianceProfile& profile, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  const auto momentum = momentum_stats(psi);
  const double hbar = psi.domain().hbar();
  const double product = std::sqrt(momentum.delta_p_sq) * std::sqrt(profile.delta_x_sq);
  EupCheck check;
  check.margin = product - 0.5 * nu * hbar * eup_factor(profile.delta_x_sq, psi.domain().length());
  check.heisenberg_margin = product - 0.5 * hbar;
  check.heisenberg_violated = check.heisenberg_margin < -kHeisenbergSlack * 0.5 * hbar;
  return check;
}

UncertaintyReport make_report(const WaveFunction& psi, const VarianceProfile& profile) {
  const auto momentum = momentum_stats(psi);
  UncertaintyReport report;
  report.length = psi.domain().length();
  report.hbar = psi.domain().hbar();
  report.delta_x_sq = profile.delta_x_sq;
  report.delta_x = std::sqrt(profile.delta_x_sq);
  report.gamma_star = profile.gamma_star;
  report.mean_p = momentum.mean_p;
  report.delta_p_sq = momentum.delta_p_sq;
  report.delta_p = std::sqrt(momentum.delta_p_sq);
  report.product = report.delta_p * report.delta_x;
  report.heisenberg_rhs = 0.5 * report.hbar;
  report.eup_factor = eup_factor(profile.delta_x_sq, report.length);
  if (report.eup_factor >= kRatioDenominatorGuard) {
    report.ratio = report.product / (0.5 * report.hbar * report.eup_factor);
  }
  report.pointwise_min_margin = verify_pointwise_bound(psi, profile, momentum);
  report.structural = check_structural_bounds(profile);
  report.minimum_converged = profile.converged;
  report.aliasing_warning = momentum.aliasing_warning;
  report.heisenberg_violated = report.product < (1.0 - kHeisenbergSlack) * report.heisenberg_rhs;
  const double momentum_quantum = 2.0 * std::numbers::pi * report.hbar / report.length;
  report.saturated = report.delta_p <= 1e-10 * momentum_quantum &&
                     std::abs(report.eup_factor) < kRatioDenominatorGuard;
  return report;
}

UncertaintyReport make_report(const WaveFunction& psi, int profile_resolution) {
  return make_report(psi, minimize_V(psi, profile_resolution));
}

AngularReport angular_case_report(const WaveFunction& psi, double eta, int profile_resolution) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double length = psi.domain().length();
  if (std::abs(length - kTwoPi) > 1e-12 * kTwoPi) {
    throw std::invalid_argument("angular report needs a domain of length 2 pi");
  }
  const int resolution = profile_resolution > 0 ? profile_resolution : psi.domain().grid_points();
  AngularReport angular;
  angular.base = make_report(psi, resolution);
  angular.delta_phi = angular.base.delta_x;
  angular.delta_lz = angular.base.delta_p;
  angular.eta = eta;
  const double pi_sq = std::numbers::pi * std::numbers::pi;
  angular.judge_rhs = eta * angular.base.hbar * (1.0 - 3.0 * angular.base.delta_x_sq / pi_sq);
  angular.judge_margin = angular.delta_lz * angular.delta_phi - angular.judge_rhs;
  return angular;
}

}  // namespace peup
