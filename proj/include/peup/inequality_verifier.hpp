#pragma once

#include <optional>

#include "peup/judge_variance.hpp"
#include "peup/momentum_stats.hpp"
#include "peup/periodic_state.hpp"

namespace peup {

/// Judge's constant for the angle / angular-momentum relation.
inline constexpr double kJudgeEta = 0.15;

/// Below this value of 1 - 12 dx^2 / L^2 the EUP ratio is reported undefined.
inline constexpr double kRatioDenominatorGuard = 1e-8;

/// Slack for the exact bounds, relative to their natural scale.
inline constexpr double kPointwiseSlack = 1e-9;     // times hbar^2 / 4
inline constexpr double kStructuralSlack = 1e-10;   // absolute, for V, V', V''
inline constexpr double kPeriodAverageTolerance = 1e-9;  // relative
/// Relative rounding allowance before a product is flagged below hbar / 2.
inline constexpr double kHeisenbergSlack = 1e-12;

/// 1 - 12 dx^2 / L^2.
double eup_factor(double delta_x_sq, double length);

struct StructuralCheck {
  int bound_violations = 0;             // samples outside V in [0, L^2/4], V' in [-L, L), V'' <= 2
  double period_average_rel_error = 0;  // |mean V - L^2/12| / (L^2/12)
  bool ok() const { return bound_violations == 0 && period_average_rel_error <= kPeriodAverageTolerance; }
};

StructuralCheck check_structural_bounds(const VarianceProfile& profile);

/// min over the profile's gamma grid of
///   dp^2 V(gamma) - (hbar^2/4) (1 - L f(L/2 + gamma))^2.
double verify_pointwise_bound(const WaveFunction& psi, const VarianceProfile& profile);
double verify_pointwise_bound(const WaveFunction& psi, const VarianceProfile& profile, const MomentumStats& momentum);

struct EupCheck {
  double margin = 0.0;             // dp dx - (nu hbar / 2)(1 - 12 dx^2 / L^2)
  double heisenberg_margin = 0.0;  // dp dx - hbar / 2
  bool heisenberg_violated = false;  // informational: allowed on a periodic domain
};

EupCheck verify_eup(const WaveFunction& psi, const VarianceProfile& profile, double nu);

struct UncertaintyReport {
  double length = 0.0;
  double hbar = 0.0;
  double delta_x = 0.0;
  double delta_x_sq = 0.0;
  double gamma_star = 0.0;
  double mean_p = 0.0;
  double delta_p = 0.0;
  double delta_p_sq = 0.0;
  double product = 0.0;
  double heisenberg_rhs = 0.0;
  double eup_factor = 0.0;
  std::optional<double> ratio;  // product / ((hbar/2) eup_factor); empty when guarded
  double pointwise_min_margin = 0.0;
  StructuralCheck structural;
  bool minimum_converged = true;
  bool aliasing_warning = false;
  bool heisenberg_violated = false;
  bool saturated = false;  // dp = 0 and 1 - 12 dx^2/L^2 = 0: both sides of the EUP vanish

  double eup_rhs(double nu) const { return 0.5 * nu * hbar * eup_factor; }
  double eup_margin(double nu) const { return product - eup_rhs(nu); }
  bool pointwise_ok() const { return pointwise_min_margin >= -kPointwiseSlack * 0.25 * hbar * hbar; }
  /// No exact-bound violation (pointwise bound, structural bounds, period average).
  bool exact_bounds_ok() const { return pointwise_ok() && structural.ok(); }
};

UncertaintyReport make_report(const WaveFunction& psi, const VarianceProfile& profile);
UncertaintyReport make_report(const WaveFunction& psi, int profile_resolution);

/// Same computation read as angle phi and angular momentum L_z on L = 2 pi.
struct AngularReport {
  UncertaintyReport base;
  double delta_phi = 0.0;
  double delta_lz = 0.0;
  double eta = kJudgeEta;
  double judge_rhs = 0.0;     // eta hbar (1 - 3 dphi^2 / pi^2)
  double judge_margin = 0.0;  // dLz dphi - judge_rhs
};

/// Throws std::invalid_argument unless the domain length is 2 pi.
AngularReport angular_case_report(const WaveFunction& psi, double eta = kJudgeEta, int profile_resolution = 0);

}  // namespace peup
