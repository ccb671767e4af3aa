#include "peup/judge_variance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "peup/fft.hpp"

namespace peup {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxRefinementSteps = 100;

double alternating(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

// Fourier weights of the fixed-window moments:
//   x^2 = sum_k second_moment_weight(k) exp(2 pi i k x / L),
//   x   = sum_k first_moment_weight(k)  exp(2 pi i k x / L)   on [-L/2, L/2].
double second_moment_weight(int k, double length) {
  if (k == 0) return length * length / 12.0;
  return length * length * alternating(k) / (2.0 * kPi * kPi * static_cast<double>(k) * k);
}

Complex first_moment_weight(int k, double length) {
  if (k == 0) return {};
  return Complex(0.0, -length * alternating(k) / (kTwoPi * k));
}

// Per-mode factors of V, V', V'' relative to F_k exp(2 pi i k gamma / L).
Complex v_factor(int k, double length) { return second_moment_weight(k, length); }
Complex vp_factor(int k, double length) { return -2.0 * first_moment_weight(k, length); }
Complex vpp_factor(int k) { return -2.0 * alternating(k); }

// 2 Re sum_{k>=1} F_k factor(k) exp(i k theta).
template <class Factor>
double positive_series(std::span<const Complex> positive, double theta, Factor factor) {
  const Complex step = std::polar(1.0, theta);
  Complex rotor{};
  Complex sum{};
  for (int k = 1; k < static_cast<int>(positive.size()); ++k) {
    if ((k - 1) % 32 == 0) {
      rotor = std::polar(1.0, theta * k);
    } else {
      rotor *= step;
    }
    sum += positive[static_cast<std::size_t>(k)] * factor(k) * rotor;
  }
  return 2.0 * sum.real();
}

// 2 Re sum_{k>=1} F_k factor(k) exp(2 pi i k gamma_j / L) on gamma_j = -L/2 + j L / M.
template <class Factor>
std::vector<double> sampled_series(std::span<const Complex> positive, int resolution, Factor factor) {
  std::vector<Complex> folded(static_cast<std::size_t>(resolution));
  for (int k = 1; k < static_cast<int>(positive.size()); ++k) {
    folded[static_cast<std::size_t>(k % resolution)] +=
        alternating(k) * positive[static_cast<std::size_t>(k)] * factor(k);
  }
  const auto summed = fft::backward(folded);
  std::vector<double> out(summed.size());
  std::transform(summed.begin(), summed.end(), out.begin(), [](const Complex& z) { return 2.0 * z.real(); });
  return out;
}

double wrap_into(double x, double length) {
  double shifted = std::fmod(x + 0.5 * length, length);
  if (shifted < 0.0) shifted += length;
  double wrapped = shifted - 0.5 * length;
  if (wrapped >= 0.5 * length) wrapped -= length;
  return wrapped;
}

struct Candidate {
  double gamma;
  double value;
  double slope;
  bool converged;
  int steps;
};

// Safeguarded Newton on V' over [lo, hi] with V'(lo) < 0 < V'(hi).
Candidate refine(const DensitySpectrum& density, double lo, double hi, double slope_tolerance) {
  double x = 0.5 * (lo + hi);
  Candidate result{x, 0.0, 0.0, false, 0};
  for (int step = 1; step <= kMaxRefinementSteps; ++step) {
    const double slope = density.Vp(x);
    result.gamma = x;
    result.slope = slope;
    result.steps = step;
    if (std::abs(slope) < slope_tolerance) {
      result.converged = true;
      break;
    }
    if (slope < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double curvature = density.Vpp(x);
    const double newton = x - slope / curvature;
    if (curvature > 0.0 && newton > lo && newton < hi) {
      x = newton;
    } else {
      x = 0.5 * (lo + hi);
    }
  }
  result.value = density.V(result.gamma);
  return result;
}

bool better(const Candidate& a, const Candidate& b, double length, double tie_tolerance) {
  if (a.value < b.value - tie_tolerance) return true;
  if (a.value > b.value + tie_tolerance) return false;
  const double abs_a = std::abs(wrap_into(a.gamma, length));
  const double abs_b = std::abs(wrap_into(b.gamma, length));
  if (abs_a != abs_b) return abs_a < abs_b;
  return wrap_into(a.gamma, length) < wrap_into(b.gamma, length);
}

}  // namespace

DensitySpectrum DensitySpectrum::from_wave_function(const WaveFunction& psi) {
  const auto& domain = psi.domain();
  const int size = domain.grid_points();
  const int padded = 2 * size;
  std::vector<Complex> folded(static_cast<std::size_t>(padded));
  for (int n = psi.min_mode(); n <= psi.max_mode(); ++n) {
    folded[static_cast<std::size_t>((n + padded) % padded)] = alternating(n) * psi.coefficient(n);
  }
  auto fine = fft::backward(folded);
  for (auto& value : fine) value = std::norm(value) / domain.length();
  const auto transformed = fft::forward(fine);
  std::vector<Complex> positive(static_cast<std::size_t>(size));
  const double scale = domain.length() / padded;
  for (int k = 0; k < size; ++k) {
    positive[static_cast<std::size_t>(k)] = scale * alternating(k) * transformed[static_cast<std::size_t>(k)];
  }
  positive[0] = positive[0].real();
  return DensitySpectrum(domain.length(), std::move(positive));
}

DensitySpectrum DensitySpectrum::from_coefficients(std::span<const Complex> coefficients, int /*n_min*/,
                                                   double length) {
  // F_k depends only on index differences, so the absolute offset n_min drops out.
  if (coefficients.empty()) throw std::invalid_argument("empty coefficient vector");
  const int size = static_cast<int>(coefficients.size());
  std::vector<Complex> positive(static_cast<std::size_t>(size));
  for (int k = 0; k < size; ++k) {
    Complex sum{};
    for (int i = k; i < size; ++i) {
      sum += coefficients[static_cast<std::size_t>(i)] * std::conj(coefficients[static_cast<std::size_t>(i - k)]);
    }
    positive[static_cast<std::size_t>(k)] = sum;
  }
  const double weight = positive[0].real();
  if (!(weight > 0.0) || !std::isfinite(weight)) throw std::invalid_argument("coefficients are not normalizable");
  for (auto& value : positive) value /= weight;
  positive[0] = 1.0;
  return DensitySpectrum(length, std::move(positive));
}

Complex DensitySpectrum::coefficient(int k) const {
  if (std::abs(k) > max_mode()) return {};
  const auto& value = positive_[static_cast<std::size_t>(std::abs(k))];
  return k >= 0 ? value : std::conj(value);
}

double DensitySpectrum::V(double gamma) const {
  const double length = length_;
  return positive_[0].real() * second_moment_weight(0, length) +
         positive_series(positive_, kTwoPi * gamma / length, [length](int k) { return v_factor(k, length); });
}

double DensitySpectrum::Vp(double gamma) const {
  const double length = length_;
  return positive_series(positive_, kTwoPi * gamma / length, [length](int k) { return vp_factor(k, length); });
}

double DensitySpectrum::Vpp(double gamma) const {
  return positive_series(positive_, kTwoPi * gamma / length_, [](int k) { return vpp_factor(k); });
}

double DensitySpectrum::density(double x) const {
  return (positive_[0].real() + positive_series(positive_, kTwoPi * x / length_, [](int) { return Complex(1.0); })) /
         length_;
}

DensitySpectrum::Samples DensitySpectrum::sample(int resolution, bool with_curvature) const {
  if (resolution < 2) throw std::invalid_argument("profile resolution must be >= 2");
  const double length = length_;
  Samples samples;
  samples.gamma.resize(static_cast<std::size_t>(resolution));
  for (int j = 0; j < resolution; ++j) {
    samples.gamma[static_cast<std::size_t>(j)] = -0.5 * length + j * length / resolution;
  }
  samples.V = sampled_series(positive_, resolution, [length](int k) { return v_factor(k, length); });
  const double mean = positive_[0].real() * second_moment_weight(0, length);
  for (auto& v : samples.V) v += mean;
  samples.Vp = sampled_series(positive_, resolution, [length](int k) { return vp_factor(k, length); });
  if (with_curvature) samples.Vpp = sampled_series(positive_, resolution, [](int k) { return vpp_factor(k); });
  return samples;
}

VarianceMinimum minimize_variance(const DensitySpectrum& density, int resolution) {
  const auto samples = density.sample(resolution, false);
  const double length = density.length();
  const double step = length / resolution;
  const double slope_tolerance = 1e-10 * length;
  const double tie_tolerance = 1e-13 * length * length;
  const double best_sample = *std::min_element(samples.V.begin(), samples.V.end());
  const double window = best_sample + step * step + 1e-12 * length * length;

  std::vector<Candidate> candidates;
  for (int j = 0; j < resolution; ++j) {
    const auto here = static_cast<std::size_t>(j);
    const auto next = static_cast<std::size_t>((j + 1) % resolution);
    const double gamma = samples.gamma[here];
    if (std::abs(samples.Vp[here]) < slope_tolerance) {
      if (samples.V[here] <= window) candidates.push_back({gamma, samples.V[here], samples.Vp[here], true, 0});
      continue;
    }
    if (std::abs(samples.Vp[next]) < slope_tolerance) continue;
    if (samples.Vp[here] < 0.0 && samples.Vp[next] > 0.0 && std::min(samples.V[here], samples.V[next]) <= window) {
      candidates.push_back(refine(density, gamma, gamma + step, slope_tolerance));
    }
  }

  VarianceMinimum result;
  if (candidates.empty()) {
    // No usable bracket: report the best scan point as a degenerate minimum.
    const auto best = static_cast<std::size_t>(
        std::distance(samples.V.begin(), std::min_element(samples.V.begin(), samples.V.end())));
    result.gamma_star = samples.gamma[best];
    result.delta_x_sq = samples.V[best];
    result.vp_at_star = samples.Vp[best];
    result.converged = false;
    result.refinement_steps = kMaxRefinementSteps;
    return result;
  }

  Candidate best = candidates.front();
  int steps = 0;
  bool all_converged = true;
  for (const auto& candidate : candidates) {
    steps = std::max(steps, candidate.steps);
    if (better(candidate, best, length, tie_tolerance)) best = candidate;
  }
  all_converged = best.converged;
  result.gamma_star = wrap_into(best.gamma, length);
  result.delta_x_sq = std::max(0.0, best.value);
  result.vp_at_star = best.slope;
  result.converged = all_converged;
  result.refinement_steps = steps;
  return result;
}

double VarianceProfile::period_average() const {
  if (V.empty()) return 0.0;
  return std::accumulate(V.begin(), V.end(), 0.0) / static_cast<double>(V.size());
}

VarianceProfile minimize_V(const WaveFunction& psi, int profile_resolution) {
  if (profile_resolution < psi.domain().grid_points()) {
    throw std::invalid_argument("profile resolution must be >= grid_points");
  }
  const auto density = DensitySpectrum::from_wave_function(psi);
  auto samples = density.sample(profile_resolution);
  const auto minimum = minimize_variance(density, profile_resolution);
  VarianceProfile profile;
  profile.length = density.length();
  profile.gamma = std::move(samples.gamma);
  profile.V = std::move(samples.V);
  profile.Vp = std::move(samples.Vp);
  profile.Vpp = std::move(samples.Vpp);
  profile.gamma_star = minimum.gamma_star;
  profile.delta_x_sq = minimum.delta_x_sq;
  profile.vp_at_star = minimum.vp_at_star;
  profile.converged = minimum.converged;
  profile.refinement_steps = minimum.refinement_steps;
  return profile;
}

double eval_V(const WaveFunction& psi, double gamma) {
  const auto shifted = DensitySpectrum::from_wave_function(translate(psi, gamma));
  const double length = shifted.length();
  double sum = shifted.coefficient(0).real() * second_moment_weight(0, length);
  for (int k = 1; k <= shifted.max_mode(); ++k) {
    sum += 2.0 * (shifted.coefficient(k) * second_moment_weight(k, length)).real();
  }
  return sum;
}

double eval_Vp(const WaveFunction& psi, double gamma) {
  const auto shifted = DensitySpectrum::from_wave_function(translate(psi, gamma));
  const double length = shifted.length();
  double sum = 0.0;
  for (int k = 1; k <= shifted.max_mode(); ++k) {
    sum += 2.0 * (shifted.coefficient(k) * first_moment_weight(k, length)).real();
  }
  return -2.0 * sum;
}

double eval_Vpp(const WaveFunction& psi, double gamma) {
  const double length = psi.domain().length();
  return 2.0 * (1.0 - length * density_at(psi, 0.5 * length + gamma));
}

double fixed_branch_variance(const WaveFunction& psi) {
  const auto density = DensitySpectrum::from_wave_function(psi);
  const double mean = -0.5 * density.Vp(0.0);
  return density.V(0.0) - mean * mean;
}

}  // namespace peup
