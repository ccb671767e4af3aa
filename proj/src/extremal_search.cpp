#include "peup/extremal_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "peup/inequality_verifier.hpp"
#include "peup/judge_variance.hpp"
#include "peup/momentum_stats.hpp"
#include "peup/nelder_mead.hpp"
#include "peup/parallel.hpp"

namespace peup {
namespace {

constexpr int kOracleShards = 64;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Complex> to_coefficients(std::span<const double> x) {
  std::vector<Complex> c(x.size() / 2);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = {x[2 * i], x[2 * i + 1]};
  return c;
}

std::vector<double> to_parameters(std::span<const Complex> c) {
  std::vector<double> x(2 * c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    x[2 * i] = c[i].real();
    x[2 * i + 1] = c[i].imag();
  }
  return x;
}

void normalize(std::vector<Complex>& c) {
  double weight = 0.0;
  for (const auto& v : c) weight += std::norm(v);
  const double scale = 1.0 / std::sqrt(weight);
  for (auto& v : c) v *= scale;
}

// Gaussian packet in mode space; `offset` translates the packet by offset * L.
std::vector<Complex> packet(int band_limit, double width, double offset) {
  std::vector<Complex> c(static_cast<std::size_t>(2 * band_limit + 1));
  for (int n = -band_limit; n <= band_limit; ++n) {
    c[static_cast<std::size_t>(n + band_limit)] =
        std::polar(std::exp(-0.25 * n * n / (width * width)), -2.0 * std::numbers::pi * n * offset);
  }
  return c;
}

// Structured and random starting states, cycling through narrow or wide
// packets, two-peak states, near-uniform states and the plain random ensemble.
std::vector<Complex> starting_state(int band_limit, std::uint64_t seed, int restart) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int m = band_limit;
  std::vector<Complex> c;
  switch (restart % 4) {
    case 0: {
      const double width = 0.3 + uniform(engine) * std::max(0.5, 0.5 * m);
      c = packet(m, width, uniform(engine) - 0.5);
      break;
    }
    case 1: {
      const double width = 0.8 + uniform(engine) * std::max(0.5, 0.5 * m);
      const double offset = uniform(engine) - 0.5;
      const double separation = 0.15 + 0.35 * uniform(engine);
      const double weight = 0.2 + 0.8 * uniform(engine);
      c = packet(m, width, offset);
      const auto second = packet(m, width, offset + separation);
      for (std::size_t i = 0; i < c.size(); ++i) c[i] += weight * second[i];
      break;
    }
    case 2: {
      c.assign(static_cast<std::size_t>(2 * m + 1), Complex{});
      c[static_cast<std::size_t>(m)] = 1.0;
      const double epsilon = 0.05 + 0.6 * uniform(engine);
      for (int n = 1; n <= std::min(m, 2); ++n) {
        c[static_cast<std::size_t>(m + n)] = epsilon / n * Complex(normal(engine), normal(engine));
        c[static_cast<std::size_t>(m - n)] = epsilon / n * Complex(normal(engine), normal(engine));
      }
      break;
    }
    default:
      c = random_band_limited_coefficients(m, seed);
      break;
  }
  // small random component so that no start sits on a symmetric manifold
  for (auto& v : c) v += 1e-3 * Complex(normal(engine), normal(engine));
  normalize(c);
  return c;
}

struct RestartOutcome {
  double best = kInf;
  std::vector<Complex> best_coefficients;
  double best_denominator = 0.0;
  double best_above_10x_floor = kInf;
  long long evaluations = 0;
  long long exclusions = 0;
};

RestartOutcome run_restart(const PeriodicDomain& domain, const SearchConfig& config, int restart) {
  RestartOutcome outcome;
  auto tracked = [&](std::span<const double> x) {
    const auto c = to_coefficients(x);
    double weight = 0.0;
    for (const auto& v : c) weight += std::norm(v);
    ++outcome.evaluations;
    if (!(weight > 0.0)) return 2.0 * kFloorPenalty;
    const auto eval = evaluate_ratio(c, domain, config);
    if (!eval.admissible) {
      ++outcome.exclusions;
      return kFloorPenalty + (config.denominator_floor - eval.denominator);
    }
    if (eval.ratio < outcome.best) {
      outcome.best = eval.ratio;
      outcome.best_coefficients = c;
      outcome.best_denominator = eval.denominator;
    }
    if (eval.denominator >= 10.0 * config.denominator_floor) {
      outcome.best_above_10x_floor = std::min(outcome.best_above_10x_floor, eval.ratio);
    }
    return eval.ratio;
  };

  auto coefficients = starting_state(config.band_limit, member_seed(config.seed, static_cast<std::uint64_t>(restart)),
                                     restart);
  double previous = kInf;
  double step = 0.1;
  while (outcome.evaluations < config.max_iterations) {
    NelderMeadOptions options;
    options.max_evaluations = static_cast<int>(config.max_iterations - outcome.evaluations);
    options.tolerance = config.tolerance;
    options.initial_step = step;
    const auto run = nelder_mead(tracked, to_parameters(coefficients), options);
    coefficients = to_coefficients(run.x);
    double weight = 0.0;
    for (const auto& v : coefficients) weight += std::norm(v);
    if (!(weight > 0.0)) break;
    normalize(coefficients);
    // fresh simplex around the current best until a cycle stops improving
    if (previous - run.value <= config.tolerance * (1.0 + std::abs(run.value))) break;
    previous = run.value;
    step = std::max(1e-3, 0.5 * step);
  }
  if (!outcome.best_coefficients.empty()) normalize(outcome.best_coefficients);
  return outcome;
}

}  // namespace

void SearchConfig::validate(const PeriodicDomain& domain) const {
  if (band_limit < 0 || band_limit > domain.grid_points() / 4) {
    throw std::invalid_argument("search band_limit must lie in [0, N/4]");
  }
  if (restarts < 1) throw std::invalid_argument("search restarts must be >= 1");
  if (max_iterations < 1) throw std::invalid_argument("search max_iterations must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("search tolerance must be positive");
  if (!(denominator_floor > 0.0) || !std::isfinite(denominator_floor)) {
    throw std::invalid_argument("denominator_floor must be positive");
  }
}

RatioEvaluation evaluate_ratio(std::span<const Complex> coefficients, const PeriodicDomain& domain,
                               const SearchConfig& config) {
  const bool nonzero = std::any_of(coefficients.begin(), coefficients.end(), [](const Complex& c) { return c != 0.0; });
  if (coefficients.empty() || !nonzero) throw std::invalid_argument("objective needs a nonzero coefficient vector");
  const int m = static_cast<int>(coefficients.size() / 2);
  const auto density = DensitySpectrum::from_coefficients(coefficients, -m, domain.length());
  const auto minimum = minimize_variance(density, domain.grid_points());
  const auto momentum = momentum_stats_from_coefficients(coefficients, -m, domain.length(), domain.hbar());

  RatioEvaluation eval;
  eval.delta_x_sq = minimum.delta_x_sq;
  eval.delta_p_sq = momentum.delta_p_sq;
  eval.denominator = eup_factor(minimum.delta_x_sq, domain.length());
  eval.admissible = eval.denominator >= config.denominator_floor;
  if (eval.admissible) {
    eval.ratio = std::sqrt(eval.delta_p_sq) * std::sqrt(eval.delta_x_sq) / (0.5 * domain.hbar() * eval.denominator);
  }
  return eval;
}

double objective(std::span<const Complex> coefficients, const PeriodicDomain& domain, const SearchConfig& config) {
  const auto eval = evaluate_ratio(coefficients, domain, config);
  if (!eval.admissible) return kFloorPenalty + (config.denominator_floor - eval.denominator);
  return eval.ratio;
}

SearchResult search(const PeriodicDomain& domain, const SearchConfig& config) {
  config.validate(domain);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
  parallel_for(outcomes.size(), [&](std::size_t i) { outcomes[i] = run_restart(domain, config, static_cast<int>(i)); });

  SearchResult result;
  result.nu_star = kInf;
  result.nu_above_10x_floor = kInf;
  for (const auto& outcome : outcomes) {
    result.trace.push_back(outcome.best);
    result.evaluations += outcome.evaluations;
    result.floor_exclusions += outcome.exclusions;
    result.nu_above_10x_floor = std::min(result.nu_above_10x_floor, outcome.best_above_10x_floor);
    if (outcome.best < result.nu_star) {
      result.nu_star = outcome.best;
      result.extremal_coefficients = outcome.best_coefficients;
      result.extremal_denominator = outcome.best_denominator;
    }
  }
  result.success = std::isfinite(result.nu_star);
  return result;
}

double reevaluate(const SearchResult& result, const PeriodicDomain& domain, const SearchConfig& config) {
  if (result.extremal_coefficients.empty()) throw std::invalid_argument("search result carries no extremal state");
  const int m = static_cast<int>(result.extremal_coefficients.size() / 2);
  const auto psi = WaveFunction::from_modes(domain, result.extremal_coefficients, -m);
  const auto report = make_report(psi, domain.grid_points());
  if (report.eup_factor < config.denominator_floor || !report.ratio) return kInf;
  return *report.ratio;
}

OracleResult random_search_oracle(const PeriodicDomain& domain, const SearchConfig& config, long long samples,
                                  std::uint64_t seed, double threshold) {
  config.validate(domain);
  const int m = config.band_limit;
  std::vector<OracleResult> shards(kOracleShards);
  parallel_for(shards.size(), [&](std::size_t shard) {
    auto& out = shards[shard];
    out.best_ratio = kInf;
    const long long begin = samples * static_cast<long long>(shard) / kOracleShards;
    const long long end = samples * static_cast<long long>(shard + 1) / kOracleShards;
    std::mt19937_64 engine(member_seed(seed, shard));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double log_lo = std::log(0.3);
    const double log_hi = std::log(2.0 * std::max(1, m));
    std::vector<Complex> c(static_cast<std::size_t>(2 * m + 1));
    for (long long s = begin; s < end; ++s) {
      const double width = std::exp(log_lo + (log_hi - log_lo) * uniform(engine));
      for (int n = -m; n <= m; ++n) {
        const double re = normal(engine);
        const double im = normal(engine);
        c[static_cast<std::size_t>(n + m)] = std::exp(-0.25 * n * n / (width * width)) * Complex(re, im);
      }
      const auto eval = evaluate_ratio(c, domain, config);
      if (!eval.admissible) {
        ++out.excluded;
        continue;
      }
      ++out.admissible;
      if (eval.ratio < threshold) ++out.below_threshold;
      if (eval.ratio < out.best_ratio) {
        out.best_ratio = eval.ratio;
        out.best_coefficients = c;
      }
    }
  });

  OracleResult merged;
  merged.best_ratio = kInf;
  for (const auto& shard : shards) {
    merged.admissible += shard.admissible;
    merged.excluded += shard.excluded;
    merged.below_threshold += shard.below_threshold;
    if (shard.best_ratio < merged.best_ratio) {
      merged.best_ratio = shard.best_ratio;
      merged.best_coefficients = shard.best_coefficients;
    }
  }
  if (!merged.best_coefficients.empty()) normalize(merged.best_coefficients);
  return merged;
}

ConstantComparison compare_with_reported_constants(double nu_star) {
  ConstantComparison comparison;
  const double judge_nu = 2.0 * kJudgeEta;
  comparison.consistent_with_order_unity = nu_star >= 0.5 && nu_star <= 2.0;
  comparison.consistent_with_judge_eta = std::abs(nu_star - judge_nu) <= 0.1 * judge_nu;
  std::ostringstream out;
  out.precision(6);
  out << "nu* = " << nu_star << "; ";
  if (comparison.consistent_with_order_unity && comparison.consistent_with_judge_eta) {
    out << "consistent with both an order-one constant and 2 x eta = 0.3";
  } else if (comparison.consistent_with_order_unity) {
    out << "consistent with an order-one constant, not with 2 x eta = 0.3";
  } else if (comparison.consistent_with_judge_eta) {
    out << "consistent with 2 x eta = 0.3, not with an order-one constant";
  } else {
    out << "consistent with neither an order-one constant nor 2 x eta = 0.3";
  }
  comparison.statement = out.str();
  return comparison;
}

}  // namespace peup
