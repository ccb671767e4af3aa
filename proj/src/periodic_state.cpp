#include "peup/periodic_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "peup/fft.hpp"

namespace peup {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sign_of_mode(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

std::size_t fft_index(int n, int size) { return static_cast<std::size_t>(((n % size) + size) % size); }

std::vector<Complex> spectrum_from_amplitudes(const PeriodicDomain& domain, std::span<const Complex> amps) {
  const int size = domain.grid_points();
  const auto transformed = fft::forward(amps);
  const double scale = std::sqrt(domain.length()) / size;
  std::vector<Complex> spectrum(static_cast<std::size_t>(size));
  for (int n = -size / 2; n < size / 2; ++n) {
    spectrum[static_cast<std::size_t>(n + size / 2)] = scale * sign_of_mode(n) * transformed[fft_index(n, size)];
  }
  return spectrum;
}

std::vector<Complex> amplitudes_from_spectrum(const PeriodicDomain& domain, std::span<const Complex> spectrum) {
  const int size = domain.grid_points();
  std::vector<Complex> folded(static_cast<std::size_t>(size));
  for (int n = -size / 2; n < size / 2; ++n) {
    folded[fft_index(n, size)] = sign_of_mode(n) * spectrum[static_cast<std::size_t>(n + size / 2)];
  }
  auto amps = fft::backward(folded);
  const double scale = 1.0 / std::sqrt(domain.length());
  for (auto& a : amps) a *= scale;
  return amps;
}

double squared_norm(std::span<const Complex> values) {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return sum;
}

void check_band_limit(int band_limit, const PeriodicDomain& domain) {
  if (band_limit < 0 || band_limit > domain.grid_points() / 4) {
    throw std::invalid_argument("band limit " + std::to_string(band_limit) + " outside [0, N/4] for N = " +
                                std::to_string(domain.grid_points()));
  }
}

WaveFunction momentum_eigenstate(const PeriodicDomain& domain, int n) {
  check_band_limit(std::abs(n), domain);
  // set in the spectrum so that no transform leakage reaches other modes
  std::vector<Complex> spectrum(static_cast<std::size_t>(domain.grid_points()));
  spectrum[static_cast<std::size_t>(n + domain.grid_points() / 2)] = 1.0;
  return WaveFunction::from_spectrum(domain, std::move(spectrum));
}

// Periodic sum of amplitude Gaussians exp(-(x - c - mL)^2 / (4 sigma^2)).
// Narrow packets sum the images directly; wide ones use the Poisson-dual
// cosine series. Both stop once the added term drops below 1e-16 of the
// running peak.
WaveFunction wrapped_gaussian(const PeriodicDomain& domain, double center, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(center)) {
    throw std::invalid_argument("wrapped_gaussian: sigma must be positive and finite");
  }
  constexpr double kCutoff = 1e-16;
  const double length = domain.length();
  std::vector<Complex> amps(static_cast<std::size_t>(domain.grid_points()));
  double peak = 0.0;
  const bool direct = sigma <= 0.25 * length;
  for (int j = 0; j < domain.grid_points(); ++j) {
    const double d = domain.wrap(domain.node(j) - center);
    double sum = 0.0;
    if (direct) {
      sum = std::exp(-d * d / (4.0 * sigma * sigma));
      peak = std::max(peak, sum);
      for (int m = 1;; ++m) {
        const double lo = d + m * length;
        const double hi = d - m * length;
        const double term = std::exp(-lo * lo / (4.0 * sigma * sigma)) + std::exp(-hi * hi / (4.0 * sigma * sigma));
        sum += term;
        peak = std::max(peak, sum);
        if (term <= kCutoff * peak) break;
      }
    } else {
      sum = 1.0;
      peak = std::max(peak, sum);
      for (int k = 1;; ++k) {
        const double wave = kTwoPi * k / length;
        const double weight = std::exp(-sigma * sigma * wave * wave);
        sum += 2.0 * weight * std::cos(wave * d);
        peak = std::max(peak, sum);
        if (2.0 * weight < kCutoff * peak) break;
      }
    }
    amps[static_cast<std::size_t>(j)] = sum;
  }
  return WaveFunction::from_amplitudes(domain, std::move(amps));
}

}  // namespace

PeriodicDomain::PeriodicDomain(double length, int grid_points, double hbar)
    : length_(length), grid_points_(grid_points), hbar_(hbar) {
  if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("domain length must be positive");
  if (grid_points < 8 || grid_points % 2 != 0) {
    throw std::invalid_argument("grid_points must be even and >= 8, got " + std::to_string(grid_points));
  }
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw std::invalid_argument("hbar must be positive");
}

double PeriodicDomain::wrap(double x) const {
  double shifted = std::fmod(x + 0.5 * length_, length_);
  if (shifted < 0.0) shifted += length_;
  double wrapped = shifted - 0.5 * length_;
  if (wrapped >= 0.5 * length_) wrapped -= length_;
  return wrapped;
}

WaveFunction WaveFunction::from_amplitudes(const PeriodicDomain& domain, std::vector<Complex> amplitudes) {
  if (amplitudes.size() != static_cast<std::size_t>(domain.grid_points())) {
    throw std::invalid_argument("amplitude count does not match grid_points");
  }
  auto spectrum = spectrum_from_amplitudes(domain, amplitudes);
  const double weight = squared_norm(spectrum);
  if (!(weight > 0.0) || !std::isfinite(weight)) throw std::invalid_argument("state is not normalizable");
  const double scale = 1.0 / std::sqrt(weight);
  for (auto& a : amplitudes) a *= scale;
  for (auto& c : spectrum) c *= scale;
  return WaveFunction(domain, std::move(amplitudes), std::move(spectrum));
}

WaveFunction WaveFunction::from_spectrum(const PeriodicDomain& domain, std::vector<Complex> coefficients) {
  if (coefficients.size() != static_cast<std::size_t>(domain.grid_points())) {
    throw std::invalid_argument("coefficient count does not match grid_points");
  }
  const double weight = squared_norm(coefficients);
  if (!(weight > 0.0) || !std::isfinite(weight)) throw std::invalid_argument("state is not normalizable");
  const double scale = 1.0 / std::sqrt(weight);
  for (auto& c : coefficients) c *= scale;
  auto amps = amplitudes_from_spectrum(domain, coefficients);
  return WaveFunction(domain, std::move(amps), std::move(coefficients));
}

WaveFunction WaveFunction::from_modes(const PeriodicDomain& domain, std::span<const Complex> coefficients,
                                      int n_min) {
  const int size = domain.grid_points();
  const int n_max = n_min + static_cast<int>(coefficients.size()) - 1;
  if (coefficients.empty() || n_min < -size / 2 || n_max >= size / 2) {
    throw std::invalid_argument("modes outside the representable band [-N/2, N/2)");
  }
  std::vector<Complex> full(static_cast<std::size_t>(size));
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    full[static_cast<std::size_t>(n_min + static_cast<int>(i) + size / 2)] = coefficients[i];
  }
  return from_spectrum(domain, std::move(full));
}

Complex WaveFunction::coefficient(int n) const {
  if (n < min_mode() || n > max_mode()) return {};
  return spectrum_[static_cast<std::size_t>(n - min_mode())];
}

double WaveFunction::grid_norm() const { return domain_.spacing() * squared_norm(amplitudes_); }

std::uint64_t member_seed(std::uint64_t seed, std::uint64_t index) {
  // SplitMix64 finalizer over (seed, index).
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<Complex> random_band_limited_coefficients(int band_limit, std::uint64_t seed) {
  if (band_limit < 0) throw std::invalid_argument("band limit must be nonnegative");
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> coeffs(static_cast<std::size_t>(2 * band_limit + 1));
  for (auto& c : coeffs) {
    const double re = normal(engine);
    const double im = normal(engine);
    c = {re, im};
  }
  const double scale = 1.0 / std::sqrt(squared_norm(coeffs));
  for (auto& c : coeffs) c *= scale;
  return coeffs;
}

std::vector<WaveFunction> make_state(const EnsembleSpec& spec, const PeriodicDomain& domain) {
  if (spec.count < 1) throw std::invalid_argument("ensemble count must be >= 1");
  std::vector<WaveFunction> states;
  states.reserve(static_cast<std::size_t>(spec.count));
  std::visit(
      [&](const auto& kind) {
        using Kind = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<Kind, MomentumEigenstate>) {
          const auto state = momentum_eigenstate(domain, kind.n);
          for (int i = 0; i < spec.count; ++i) states.push_back(state);
        } else if constexpr (std::is_same_v<Kind, WrappedGaussian>) {
          const auto state = wrapped_gaussian(domain, kind.center, kind.sigma);
          for (int i = 0; i < spec.count; ++i) states.push_back(state);
        } else if constexpr (std::is_same_v<Kind, BandLimitedRandom>) {
          check_band_limit(kind.band_limit, domain);
          for (int i = 0; i < spec.count; ++i) {
            const auto coeffs = random_band_limited_coefficients(
                kind.band_limit, member_seed(spec.seed, static_cast<std::uint64_t>(i)));
            states.push_back(WaveFunction::from_modes(domain, coeffs, -kind.band_limit));
          }
        } else {
          if (kind.coefficients.empty() || kind.coefficients.size() % 2 == 0) {
            throw std::invalid_argument("fourier ansatz needs 2m + 1 coefficients");
          }
          const int m = static_cast<int>(kind.coefficients.size() / 2);
          check_band_limit(m, domain);
          const auto state = WaveFunction::from_modes(domain, kind.coefficients, -m);
          for (int i = 0; i < spec.count; ++i) states.push_back(state);
        }
      },
      spec.kind);
  return states;
}

WaveFunction translate(const WaveFunction& psi, double a) {
  const auto& domain = psi.domain();
  const double shift = domain.wrap(a);
  if (shift == 0.0) return psi;
  std::vector<Complex> spectrum(psi.spectrum().begin(), psi.spectrum().end());
  for (int n = psi.min_mode(); n <= psi.max_mode(); ++n) {
    spectrum[static_cast<std::size_t>(n - psi.min_mode())] *= std::polar(1.0, kTwoPi * n * shift / domain.length());
  }
  return WaveFunction::from_spectrum(domain, std::move(spectrum));
}

Complex amplitude_at(const WaveFunction& psi, double x) {
  const auto& domain = psi.domain();
  const double phase = kTwoPi * domain.wrap(x) / domain.length();
  const Complex step = std::polar(1.0, phase);
  const auto spectrum = psi.spectrum();
  Complex sum{};
  Complex rotor{};
  for (int n = psi.min_mode(); n <= psi.max_mode(); ++n) {
    // re-anchor the recurrence periodically to bound phase drift
    if ((n - psi.min_mode()) % 32 == 0) {
      rotor = std::polar(1.0, phase * n);
    } else {
      rotor *= step;
    }
    sum += spectrum[static_cast<std::size_t>(n - psi.min_mode())] * rotor;
  }
  return sum / std::sqrt(domain.length());
}

double density_at(const WaveFunction& psi, double x) { return std::norm(amplitude_at(psi, x)); }

}  // namespace peup
