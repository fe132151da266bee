#include <algorithm>
#include <array>
#include <cmath>

#include "mtjrng/error.hpp"
#include "mtjrng/stattests.hpp"
#include "special.hpp"

namespace mtjrng::nist {

double proportion_threshold(double alpha, std::size_t n_blocks) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (n_blocks < 2) throw ConfigError("proportion threshold needs at least 2 blocks");
  const double p_hat = 1.0 - alpha;
  return p_hat - 3.0 * std::sqrt(p_hat * alpha / static_cast<double>(n_blocks));
}

double pvalue_uniformity(std::span<const double> pvalues) {
  if (pvalues.empty()) throw ConfigError("uniformity test needs at least one P-value");
  std::array<double, 10> bins{};
  for (const double p : pvalues) {
    const auto bin = static_cast<std::size_t>(std::clamp(std::floor(p * 10.0), 0.0, 9.0));
    bins[bin] += 1.0;
  }
  const double expected = static_cast<double>(pvalues.size()) / 10.0;
  double chi2 = 0.0;
  for (const double f : bins) chi2 += (f - expected) * (f - expected) / expected;
  return detail::igamc(4.5, chi2 / 2.0);
}

double floor4(double value) { return std::floor(value * 10000.0 + 1e-9) / 10000.0; }

}  // namespace mtjrng::nist
