#include "peup/momentum_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace peup {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNyquistWeightLimit = 1e-6;

// Spectral moments over (momentum, weight) pairs. The spread is accumulated
// around the mean, which keeps eigenstates at dp = 0 up to roundoff.
template <class Modes>
MomentumStats spectral_moments(const Modes& modes, std::size_t count) {
  double weight = 0.0;
  double first = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto [k, w] = modes(i);
    weight += w;
    first += k * w;
    second += k * k * w;
  }
  if (!(weight > 0.0)) throw std::invalid_argument("state is not normalizable");
  MomentumStats stats;
  stats.total_weight = weight;
  stats.mean_p = first / weight;
  stats.mean_p_sq = second / weight;
  double spread = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto [k, w] = modes(i);
    spread += (k - stats.mean_p) * (k - stats.mean_p) * w;
  }
  stats.delta_p_sq = spread / weight;
  return stats;
}

}  // namespace

MomentumStats momentum_stats(const WaveFunction& psi) {
  const auto& domain = psi.domain();
  const double quantum = kTwoPi * domain.hbar() / domain.length();
  const auto spectrum = psi.spectrum();
  const int n_min = psi.min_mode();
  auto stats = spectral_moments(
      [&](std::size_t i) {
        return std::pair{quantum * (n_min + static_cast<int>(i)), std::norm(spectrum[i])};
      },
      spectrum.size());
  stats.aliasing_warning = std::norm(psi.coefficient(n_min)) > kNyquistWeightLimit;
  return stats;
}

MomentumStats momentum_stats_from_coefficients(std::span<const Complex> coefficients, int n_min, double length,
                                               double hbar) {
  const double quantum = kTwoPi * hbar / length;
  return spectral_moments(
      [&](std::size_t i) {
        return std::pair{quantum * (n_min + static_cast<int>(i)), std::norm(coefficients[i])};
      },
      coefficients.size());
}

MomentumStats momentum_stats_fd(const WaveFunction& psi, int refinement) {
  if (refinement < 1) throw std::invalid_argument("refinement must be >= 1");
  const auto& domain = psi.domain();
  const int size = domain.grid_points() * refinement;
  const double step = domain.length() / size;

  std::vector<Complex> values;
  if (refinement == 1) {
    values.assign(psi.amplitudes().begin(), psi.amplitudes().end());
  } else {
    values.resize(static_cast<std::size_t>(size));
    for (int j = 0; j < size; ++j) {
      values[static_cast<std::size_t>(j)] = amplitude_at(psi, -0.5 * domain.length() + j * step);
    }
  }

  auto at = [&](int j) { return values[static_cast<std::size_t>(((j % size) + size) % size)]; };
  std::vector<Complex> p_psi(static_cast<std::size_t>(size));
  const double hbar = domain.hbar();
  for (int j = 0; j < size; ++j) {
    const Complex derivative = (-at(j + 2) + 8.0 * at(j + 1) - 8.0 * at(j - 1) + at(j - 2)) / (12.0 * step);
    p_psi[static_cast<std::size_t>(j)] = Complex(0.0, -hbar) * derivative;
  }

  double weight = 0.0;
  double first = 0.0;
  double second = 0.0;
  for (int j = 0; j < size; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    weight += std::norm(values[idx]);
    first += (std::conj(values[idx]) * p_psi[idx]).real();
    second += std::norm(p_psi[idx]);
  }
  MomentumStats stats;
  stats.total_weight = weight * step;
  stats.mean_p = first / weight;
  stats.mean_p_sq = second / weight;
  double spread = 0.0;
  for (int j = 0; j < size; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    spread += std::norm(p_psi[idx] - stats.mean_p * values[idx]);
  }
  stats.delta_p_sq = spread / weight;
  return stats;
}

}  // namespace peup
