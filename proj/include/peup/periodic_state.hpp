#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace peup {

using Complex = std::complex<double>;

/// Interval [-L/2, L/2) with N uniform nodes x_j = -L/2 + j L / N and the
/// point +L/2 identified with -L/2.
class PeriodicDomain {
 public:
  /// Throws std::invalid_argument unless length > 0, grid_points >= 8 and
  /// even, hbar > 0 (all finite).
  PeriodicDomain(double length, int grid_points, double hbar = 1.0);

  double length() const { return length_; }
  int grid_points() const { return grid_points_; }
  double hbar() const { return hbar_; }
  double spacing() const { return length_ / grid_points_; }
  double node(int j) const { return -0.5 * length_ + j * spacing(); }

  /// Maps x onto [-L/2, L/2).
  double wrap(double x) const;

  bool operator==(const PeriodicDomain&) const = default;

 private:
  double length_;
  int grid_points_;
  double hbar_;
};

/// Normalized state on a periodic grid. Amplitudes psi(x_j) and the Fourier
/// coefficients c_n, n in [-N/2, N/2), are stored together and satisfy
///
///   psi(x) = L^{-1/2} sum_n c_n exp(2 pi i n x / L),   sum_n |c_n|^2 = 1,
///
/// so that (L/N) sum_j |psi(x_j)|^2 = 1 as well.
class WaveFunction {
 public:
  /// Normalizes on the grid. Throws std::invalid_argument for a zero or
  /// non-finite input or a size mismatch.
  static WaveFunction from_amplitudes(const PeriodicDomain& domain, std::vector<Complex> amplitudes);

  /// `coefficients[i]` holds c_n for n = i - N/2.
  static WaveFunction from_spectrum(const PeriodicDomain& domain, std::vector<Complex> coefficients);

  /// Band-limited state from coefficients c_n, n = n_min .. n_min + size - 1.
  static WaveFunction from_modes(const PeriodicDomain& domain, std::span<const Complex> coefficients,
                                 int n_min);

  const PeriodicDomain& domain() const { return domain_; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  std::span<const Complex> spectrum() const { return spectrum_; }

  int min_mode() const { return -domain_.grid_points() / 2; }
  int max_mode() const { return domain_.grid_points() / 2 - 1; }

  /// c_n, zero outside [-N/2, N/2).
  Complex coefficient(int n) const;

  /// (L/N) sum_j |psi(x_j)|^2.
  double grid_norm() const;

 private:
  WaveFunction(PeriodicDomain domain, std::vector<Complex> amplitudes, std::vector<Complex> spectrum)
      : domain_(domain), amplitudes_(std::move(amplitudes)), spectrum_(std::move(spectrum)) {}

  PeriodicDomain domain_;
  std::vector<Complex> amplitudes_;
  std::vector<Complex> spectrum_;
};

struct MomentumEigenstate {
  int n = 0;
};

struct WrappedGaussian {
  double center = 0.0;
  double sigma = 0.0;  // standard deviation of the (unwrapped) density
};

struct BandLimitedRandom {
  int band_limit = 0;
};

struct FourierAnsatz {
  std::vector<Complex> coefficients;  // c_n for n = -m .. m, size 2m + 1
};

using StateKind = std::variant<MomentumEigenstate, WrappedGaussian, BandLimitedRandom, FourierAnsatz>;

struct EnsembleSpec {
  StateKind kind;
  int count = 1;
  std::uint64_t seed = 0;
};

/// Seed of ensemble member `index`, derived from the master seed so that
/// members can be generated independently and in any order.
std::uint64_t member_seed(std::uint64_t seed, std::uint64_t index);

/// Complex Gaussian coefficients for |n| <= band_limit, normalized.
std::vector<Complex> random_band_limited_coefficients(int band_limit, std::uint64_t seed);

/// Generates spec.count normalized states. Deterministic for a fixed seed.
/// Throws std::invalid_argument on a band limit above N/4, sigma <= 0, an
/// empty ansatz, or count < 1.
std::vector<WaveFunction> make_state(const EnsembleSpec& spec, const PeriodicDomain& domain);

/// x -> psi(x + a), exact through the Fourier shift theorem.
WaveFunction translate(const WaveFunction& psi, double a);

/// Spectral interpolant of psi(x), x wrapped periodically.
Complex amplitude_at(const WaveFunction& psi, double x);

/// |psi(x)|^2 of the spectral interpolant.
double density_at(const WaveFunction& psi, double x);

}  // namespace peup
