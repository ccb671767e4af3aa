#pragma once

#include <span>
#include <vector>

#include "peup/periodic_state.hpp"

namespace peup {

/// Fourier coefficients of the density f = |psi|^2 on the window,
///
///   f(x) = (1/L) sum_k F_k exp(2 pi i k x / L),   F_0 = 1,  F_{-k} = conj(F_k).
///
/// V(gamma) and its derivatives are finite trigonometric sums over F_k with
/// the exact Fourier weights of x^2 (and x) on the fixed window
/// [-L/2, L/2], so every integral below is exact for band-limited states.
class DensitySpectrum {
 public:
  /// Zero-padded FFT route: |psi|^2 sampled on 2N nodes, which holds every
  /// density mode |k| <= N - 1 without aliasing.
  static DensitySpectrum from_wave_function(const WaveFunction& psi);

  /// Direct autocorrelation F_k = sum_n c_n conj(c_{n-k}) of coefficients
  /// c_n, n = n_min .., normalized so that F_0 = 1.
  static DensitySpectrum from_coefficients(std::span<const Complex> coefficients, int n_min, double length);

  double length() const { return length_; }
  int max_mode() const { return static_cast<int>(positive_.size()) - 1; }
  /// F_k for any integer k (zero beyond max_mode()).
  Complex coefficient(int k) const;

  double V(double gamma) const;
  double Vp(double gamma) const;
  double Vpp(double gamma) const;
  double density(double x) const;

  struct Samples {
    std::vector<double> gamma, V, Vp, Vpp;
  };
  /// V, V', V'' on gamma_j = -L/2 + j L / resolution.
  Samples sample(int resolution, bool with_curvature = true) const;

 private:
  DensitySpectrum(double length, std::vector<Complex> positive) : length_(length), positive_(std::move(positive)) {}

  double length_;
  std::vector<Complex> positive_;  // F_0 .. F_K
};

struct VarianceMinimum {
  double gamma_star = 0.0;
  double delta_x_sq = 0.0;
  double vp_at_star = 0.0;
  bool converged = false;
  int refinement_steps = 0;
};

struct VarianceProfile {
  double length = 0.0;
  std::vector<double> gamma;
  std::vector<double> V;
  std::vector<double> Vp;
  std::vector<double> Vpp;
  double gamma_star = 0.0;   // minimizer, the mean position offset
  double delta_x_sq = 0.0;   // min V
  double vp_at_star = 0.0;
  bool converged = false;    // false marks a degenerate-minimum diagnostic
  int refinement_steps = 0;

  /// (1/M) sum_j V(gamma_j); exact period average of V for M above the
  /// density bandwidth.
  double period_average() const;
};

/// Global minimum of V: scan at `resolution` points, then safeguarded
/// Newton on V' inside every sign-change bracket whose sampled V lies within
/// h^2 of the best sample (V'' <= 2 bounds how far the true minimum can sit
/// below its nearest sample). Equal minima resolve to the smallest |gamma|,
/// then the smallest gamma.
VarianceMinimum minimize_variance(const DensitySpectrum& density, int resolution);

/// Full profile; throws std::invalid_argument when resolution < N.
VarianceProfile minimize_V(const WaveFunction& psi, int profile_resolution);

/// int_{-L/2}^{L/2} f(x + gamma) x^2 dx, via spectral translation of psi.
double eval_V(const WaveFunction& psi, double gamma);

/// -2 int_{-L/2}^{L/2} f(x + gamma) x dx.
double eval_Vp(const WaveFunction& psi, double gamma);

/// 2 (1 - L f(L/2 + gamma)).
double eval_Vpp(const WaveFunction& psi, double gamma);

/// <x^2> - <x>^2 with x restricted to the fixed window [-L/2, L/2).
double fixed_branch_variance(const WaveFunction& psi);

}  // namespace peup
