#include <algorithm>
#include <array>
#include <bit>
#include <string>
#include <vector>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>

#include "mtjrng/entropy.hpp"
#include "mtjrng/error.hpp"

namespace mtjrng::entropy {
namespace {

void require_length(const BitString& bits, std::size_t min, const char* who) {
  if (bits.size() < min) {
    throw StageError(std::string(who) + " needs at least " + std::to_string(min) + " bits, got " +
                     std::to_string(bits.size()));
  }
}

}  // namespace

double mcv_estimate(const BitString& bits) {
  require_length(bits, 2, "mcv_estimate");
  const double n = static_cast<double>(bits.size());
  const double ones = static_cast<double>(bits.count_ones());
  const double p_hat = std::max(ones, n - ones) / n;
  const double p_upper = std::min(1.0, p_hat + 2.576 * std::sqrt(p_hat * (1.0 - p_hat) / (n - 1.0)));
  return std::clamp(-std::log2(p_upper), 0.0, 1.0);
}

double markov_estimate(const BitString& bits) {
  require_length(bits, 2, "markov_estimate");
  const std::size_t n = bits.size();
  std::array<std::array<double, 2>, 2> pair_counts{};
  for (std::size_t i = 0; i + 1 < n; ++i) pair_counts[bits[i]][bits[i + 1]] += 1.0;

  const double ones = static_cast<double>(bits.count_ones());
  const std::array<double, 2> initial{1.0 - ones / static_cast<double>(n),
                                      ones / static_cast<double>(n)};
  std::array<std::array<double, 2>, 2> trans{};
  for (int a = 0; a < 2; ++a) {
    const double row = pair_counts[a][0] + pair_counts[a][1];
    for (int b = 0; b < 2; ++b) trans[a][b] = row > 0.0 ? pair_counts[a][b] / row : 0.0;
  }

  // log2 probabilities of the candidate most likely 128-bit sequences
  const auto lg = [](double p) {
    return p > 0.0 ? std::log2(p) : -std::numeric_limits<double>::infinity();
  };
  const double p00 = lg(trans[0][0]), p01 = lg(trans[0][1]);
  const double p10 = lg(trans[1][0]), p11 = lg(trans[1][1]);
  const double i0 = lg(initial[0]), i1 = lg(initial[1]);
  const std::array<double, 6> candidates{
      i0 + 127 * p00,             // 000...0
      i0 + 64 * p01 + 63 * p10,   // 0101...0
      i0 + p01 + 126 * p11,       // 011...1
      i1 + p10 + 126 * p00,       // 100...0
      i1 + 64 * p10 + 63 * p01,   // 1010...1
      i1 + 127 * p11,             // 111...1
  };
  const double best = *std::max_element(candidates.begin(), candidates.end());
  return std::clamp(-best / 128.0, 0.0, 1.0);
}

ChiSquareResult chi_square_independence(const BitString& bits, std::size_t min_length) {
  require_length(bits, std::max<std::size_t>(min_length, 2), "chi_square_independence");
  ChiSquareResult result;
  const std::size_t n = bits.size();
  const double p1 = static_cast<double>(bits.count_ones()) / static_cast<double>(n);
  const double p0 = 1.0 - p1;
  const double p_min = std::min(p0, p1);
  if (p_min == 0.0) return result;  // zero-variance source

  unsigned m = 0;
  for (unsigned t = 1; t <= 11; ++t) {
    if (std::pow(p_min, t) * std::floor(static_cast<double>(n) / t) >= 5.0) m = t;
  }
  if (m < 2) return result;

  const std::size_t blocks = n / m;
  std::vector<double> observed(std::size_t{1} << m, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    std::size_t value = 0;
    for (unsigned j = 0; j < m; ++j) value = (value << 1) | bits[b * m + j];
    observed[value] += 1.0;
  }
  double statistic = 0.0;
  for (std::size_t value = 0; value < observed.size(); ++value) {
    const int weight = std::popcount(value);
    const double expected = std::pow(p1, weight) * std::pow(p0, static_cast<int>(m) - weight) *
                            static_cast<double>(blocks);
    const double diff = observed[value] - expected;
    statistic += diff * diff / expected;
  }
  result.tuple_length = m;
  result.statistic = statistic;
  result.degrees_of_freedom = (std::size_t{1} << m) - 2;
  const boost::math::chi_squared dist(static_cast<double>(result.degrees_of_freedom));
  result.critical_value = boost::math::quantile(boost::math::complement(dist, kChiSquareSignificance));
  result.pass = statistic <= result.critical_value;
  return result;
}

std::uint64_t extractable_bits(std::uint64_t n_bits, double h_per_bit) {
  if (!(h_per_bit >= 0.0 && h_per_bit <= 1.0)) {
    throw ConfigError("min-entropy per bit must lie in [0, 1]");
  }
  if (h_per_bit == 0.0) return 0;
  // h = mant * 2^exp exactly; mant < 2^53 and n < 2^64 so the product fits.
  int exp = 0;
  const double frac = std::frexp(h_per_bit, &exp);
  const auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  const int shift = 53 - exp;
  const unsigned __int128 product = static_cast<unsigned __int128>(n_bits) * mant;
  const auto k = shift >= 128 ? std::uint64_t{0} : static_cast<std::uint64_t>(product >> shift);
  return std::min(n_bits, k);
}

}  // namespace mtjrng::entropy
