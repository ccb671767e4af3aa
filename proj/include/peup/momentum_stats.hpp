#pragma once

#include <span>

#include "peup/periodic_state.hpp"

namespace peup {

struct MomentumStats {
  double mean_p = 0.0;
  double mean_p_sq = 0.0;
  double delta_p_sq = 0.0;
  double total_weight = 0.0;      // sum_n |c_n|^2
  bool aliasing_warning = false;  // weight above 1e-6 in the Nyquist mode n = -N/2
};

/// Spectral statistics of p = -i hbar d/dx with eigenvalues 2 pi hbar n / L,
/// n in [-N/2, N/2).
MomentumStats momentum_stats(const WaveFunction& psi);

/// Same statistics for band-limited coefficients c_n, n = n_min ..
/// (normalized internally).
MomentumStats momentum_stats_from_coefficients(std::span<const Complex> coefficients, int n_min, double length,
                                               double hbar);

/// Cross-check oracle: fourth-order centered differences with periodic wrap.
/// `refinement` > 1 first resamples the band-limited state on a grid
/// `refinement` times finer, by direct evaluation of its Fourier series.
MomentumStats momentum_stats_fd(const WaveFunction& psi, int refinement = 1);

}  // namespace peup
