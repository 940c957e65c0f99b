#include "moebius_lab/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace moebius_lab {

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double radical_inverse(std::uint64_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

std::vector<std::vector<double>> halton_box(const std::vector<double>& lo,
                                            const std::vector<double>& hi, std::size_t count,
                                            std::uint64_t seed, double margin) {
  static constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  const std::size_t dim = lo.size();
  if (hi.size() != dim || dim > std::size(kPrimes))
    throw std::invalid_argument("halton_box: unsupported dimension");
  Rng rng(seed);
  std::vector<double> shift(dim);
  for (double& s : shift) s = rng.uniform();
  std::vector<std::vector<double>> points(count, std::vector<double>(dim));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      double u = radical_inverse(i + 1, kPrimes[d]) + shift[d];
      u -= std::floor(u);
      const double w = hi[d] - lo[d];
      points[i][d] = lo[d] + margin * w + u * (1.0 - 2.0 * margin) * w;
    }
  }
  return points;
}

}  // namespace moebius_lab
