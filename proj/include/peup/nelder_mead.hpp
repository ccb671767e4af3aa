#pragma once

#include <functional>
#include <span>
#include <vector>

namespace peup {

struct NelderMeadOptions {
  int max_evaluations = 10000;
  double tolerance = 1e-12;  // stop when f_worst - f_best <= tolerance * (1 + |f_best|)
  double initial_step = 0.1;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Downhill simplex with dimension-adaptive coefficients (Gao & Han), which
/// keeps the method from stalling in a few dozen dimensions.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options);

}  // namespace peup
