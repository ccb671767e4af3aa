#include "peup/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace peup {

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options) {
  const std::size_t dim = start.size();
  if (dim == 0) throw std::invalid_argument("nelder_mead: empty start point");
  const double n = static_cast<double>(dim);
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / n;
  const double contract = 0.75 - 1.0 / (2.0 * n);
  const double shrink = 1.0 - 1.0 / n;

  NelderMeadResult result;
  auto evaluate = [&](const std::vector<double>& x) {
    ++result.evaluations;
    return objective(x);
  };

  std::vector<std::vector<double>> simplex(dim + 1, start);
  for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += options.initial_step;
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) values[i] = evaluate(simplex[i]);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim);
  std::vector<double> trial(dim);
  auto point_along = [&](double t) {
    // centroid + t (centroid - worst)
    const auto& worst = simplex[order.back()];
    std::vector<double> p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = centroid[i] + t * (centroid[i] - worst[i]);
    return p;
  };

  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const double best = values[order.front()];
    const double worst = values[order.back()];
    if (worst - best <= options.tolerance * (1.0 + std::abs(best))) {
      result.converged = true;
      break;
    }
    if (result.evaluations >= options.max_evaluations) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[order[k]][i];
    }
    for (auto& c : centroid) c /= n;

    const double second_worst = values[order[dim - 1]];
    const auto reflected = point_along(reflect);
    const double f_reflected = evaluate(reflected);
    if (f_reflected < best) {
      const auto expanded = point_along(expand);
      const double f_expanded = evaluate(expanded);
      if (f_expanded < f_reflected) {
        simplex[order.back()] = expanded;
        values[order.back()] = f_expanded;
      } else {
        simplex[order.back()] = reflected;
        values[order.back()] = f_reflected;
      }
      continue;
    }
    if (f_reflected < second_worst) {
      simplex[order.back()] = reflected;
      values[order.back()] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < worst;
    const auto contracted = point_along(outside ? contract : -contract);
    const double f_contracted = evaluate(contracted);
    if (f_contracted < (outside ? f_reflected : worst)) {
      simplex[order.back()] = contracted;
      values[order.back()] = f_contracted;
      continue;
    }
    const auto& anchor = simplex[order.front()];
    for (std::size_t k = 1; k <= dim; ++k) {
      auto& vertex = simplex[order[k]];
      for (std::size_t i = 0; i < dim; ++i) vertex[i] = anchor[i] + shrink * (vertex[i] - anchor[i]);
      values[order[k]] = evaluate(vertex);
    }
  }

  const auto best = static_cast<std::size_t>(std::distance(values.begin(), std::min_element(values.begin(), values.end())));
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

}  // namespace peup
