#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <string>

#include "mtjrng/error.hpp"
#include "mtjrng/stattests.hpp"
#include "special.hpp"

namespace mtjrng::nist {
namespace {

using detail::igamc;
using detail::normal_cdf;

constexpr std::array<TestId, 8> kAll{TestId::frequency,  TestId::block_frequency,
                                     TestId::cumulative_sums, TestId::runs,
                                     TestId::longest_run, TestId::spectral,
                                     TestId::serial,     TestId::approximate_entropy};

double cusum_pvalue(long long n, long long z) {
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double zd = static_cast<double>(z);
  double sum1 = 0.0;
  for (long long k = (-n / z + 1) / 4; k <= (n / z - 1) / 4; ++k) {
    sum1 += normal_cdf((4.0 * k + 1.0) * zd / sqrt_n) - normal_cdf((4.0 * k - 1.0) * zd / sqrt_n);
  }
  double sum2 = 0.0;
  for (long long k = (-n / z - 3) / 4; k <= (n / z - 1) / 4; ++k) {
    sum2 += normal_cdf((4.0 * k + 3.0) * zd / sqrt_n) - normal_cdf((4.0 * k + 1.0) * zd / sqrt_n);
  }
  return std::clamp(1.0 - sum1 + sum2, 0.0, 1.0);
}

// Counts of every overlapping k-bit pattern, wrapping around the end.
std::vector<std::uint32_t> pattern_counts(const BitString& bits, unsigned k) {
  std::vector<std::uint32_t> counts(std::size_t{1} << k, 0);
  if (k == 0) {
    counts[0] = static_cast<std::uint32_t>(bits.size());
    return counts;
  }
  const std::size_t n = bits.size();
  const std::uint64_t mask = (std::uint64_t{1} << k) - 1;
  std::uint64_t v = 0;
  for (unsigned j = 0; j + 1 < k; ++j) v = (v << 1) | bits[j % n];
  for (std::size_t i = 0; i < n; ++i) {
    v = ((v << 1) | bits[(i + k - 1) % n]) & mask;
    ++counts[v];
  }
  return counts;
}

double psi_squared(const BitString& bits, unsigned k) {
  if (k == 0) return 0.0;
  const auto counts = pattern_counts(bits, k);
  const double n = static_cast<double>(bits.size());
  double sum = 0.0;
  for (const auto c : counts) sum += static_cast<double>(c) * static_cast<double>(c);
  return sum * std::ldexp(1.0, static_cast<int>(k)) / n - n;
}

double phi(const BitString& bits, unsigned k) {
  const auto counts = pattern_counts(bits, k);
  const double n = static_cast<double>(bits.size());
  double sum = 0.0;
  for (const auto c : counts) {
    if (c > 0) {
      const double p = static_cast<double>(c) / n;
      sum += p * std::log(p);
    }
  }
  return sum;
}

void require(bool ok, TestId id, std::size_t have, std::size_t need) {
  if (!ok) {
    throw StageError(std::string(test_name(id)) + " test needs at least " + std::to_string(need) +
                     " bits, block has " + std::to_string(have));
  }
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::string_view test_name(TestId id) {
  switch (id) {
    case TestId::frequency:
      return "frequency";
    case TestId::block_frequency:
      return "block_frequency";
    case TestId::cumulative_sums:
      return "cumulative_sums";
    case TestId::runs:
      return "runs";
    case TestId::longest_run:
      return "longest_run";
    case TestId::spectral:
      return "fft";
    case TestId::serial:
      return "serial";
    case TestId::approximate_entropy:
      return "approximate_entropy";
  }
  return "unknown";
}

std::optional<TestId> parse_test_id(std::string_view name) {
  for (const auto id : kAll) {
    if (test_name(id) == name) return id;
  }
  return std::nullopt;
}

const std::vector<TestId>& all_tests() {
  static const std::vector<TestId> tests(kAll.begin(), kAll.end());
  return tests;
}

double frequency_test(const BitString& bits) {
  const double n = static_cast<double>(bits.size());
  const double s = 2.0 * static_cast<double>(bits.count_ones()) - n;
  return std::erfc(std::abs(s) / std::sqrt(n) / std::sqrt(2.0));
}

double block_frequency_test(const BitString& bits, std::size_t block) {
  const std::size_t blocks = bits.size() / block;
  double chi2 = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const double ones = static_cast<double>(bits.slice(b * block, block).count_ones());
    const double pi = ones / static_cast<double>(block) - 0.5;
    chi2 += pi * pi;
  }
  chi2 *= 4.0 * static_cast<double>(block);
  return igamc(static_cast<double>(blocks) / 2.0, chi2 / 2.0);
}

std::vector<double> cumulative_sums_test(const BitString& bits) {
  const auto n = static_cast<long long>(bits.size());
  long long s = 0, z_forward = 0;
  long long sup = 0, inf = 0;
  for (long long i = 0; i < n; ++i) {
    s += bits[static_cast<std::size_t>(i)] ? 1 : -1;
    sup = std::max(sup, s);
    inf = std::min(inf, s);
    z_forward = std::max(z_forward, std::llabs(s));
  }
  // Backward partial sums S_n - S_k; their extreme is reached at either end of
  // the forward range.
  const long long z_backward = std::max(sup - s, s - inf);
  return {cusum_pvalue(n, std::max<long long>(z_forward, 1)),
          cusum_pvalue(n, std::max<long long>(z_backward, 1))};
}

double runs_test(const BitString& bits) {
  const std::size_t n_bits = bits.size();
  const double n = static_cast<double>(n_bits);
  const double pi = static_cast<double>(bits.count_ones()) / n;
  if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(n)) return 0.0;
  double v = 1.0;
  for (std::size_t i = 0; i + 1 < n_bits; ++i) v += bits[i] != bits[i + 1] ? 1.0 : 0.0;
  const double q = pi * (1.0 - pi);
  return std::erfc(std::abs(v - 2.0 * n * q) / (2.0 * std::sqrt(2.0 * n) * q));
}

double longest_run_test(const BitString& bits) {
  const std::size_t n = bits.size();
  std::size_t block = 0;
  unsigned first = 0;  // longest-run value of the lowest category
  std::vector<double> pi;
  if (n < 6272) {
    block = 8;
    first = 1;
    pi = {0.21484375, 0.3671875, 0.23046875, 0.1875};
  } else if (n < 750000) {
    block = 128;
    first = 4;
    pi = {0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847};
  } else {
    block = 10000;
    first = 10;
    pi = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
  }
  const std::size_t categories = pi.size();
  const std::size_t blocks = n / block;
  std::vector<double> nu(categories, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    unsigned run = 0, longest = 0;
    for (std::size_t i = b * block; i < (b + 1) * block; ++i) {
      run = bits[i] ? run + 1 : 0;
      longest = std::max(longest, run);
    }
    const auto cat = std::clamp<long>(static_cast<long>(longest) - static_cast<long>(first), 0,
                                      static_cast<long>(categories - 1));
    nu[static_cast<std::size_t>(cat)] += 1.0;
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < categories; ++i) {
    const double expected = static_cast<double>(blocks) * pi[i];
    chi2 += (nu[i] - expected) * (nu[i] - expected) / expected;
  }
  return igamc(static_cast<double>(categories - 1) / 2.0, chi2 / 2.0);
}

double spectral_test(const BitString& bits) {
  const std::size_t n = bits.size();
  const std::size_t bins = n / 2 + 1;
  std::unique_ptr<double, decltype(&fftw_free)> in(fftw_alloc_real(n), &fftw_free);
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> out(fftw_alloc_complex(bins), &fftw_free);
  for (std::size_t i = 0; i < n; ++i) in.get()[i] = bits[i] ? 1.0 : -1.0;
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  const double nd = static_cast<double>(n);
  const double threshold = std::sqrt(std::log(1.0 / 0.05) * nd);
  double below = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double re = out.get()[i][0];
    const double im = out.get()[i][1];
    if (std::sqrt(re * re + im * im) < threshold) below += 1.0;
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double expected = 0.95 * nd / 2.0;
  const double d = (below - expected) / std::sqrt(nd * 0.95 * 0.05 / 4.0);
  return std::erfc(std::abs(d) / std::sqrt(2.0));
}

std::vector<double> serial_test(const BitString& bits, unsigned m) {
  const double psi_m = psi_squared(bits, m);
  const double psi_m1 = psi_squared(bits, m - 1);
  const double psi_m2 = psi_squared(bits, m - 2);
  const double del1 = psi_m - psi_m1;
  const double del2 = psi_m - 2.0 * psi_m1 + psi_m2;
  return {igamc(std::ldexp(1.0, static_cast<int>(m) - 2), del1 / 2.0),
          igamc(std::ldexp(1.0, static_cast<int>(m) - 3), del2 / 2.0)};
}

double approximate_entropy_test(const BitString& bits, unsigned m) {
  const double n = static_cast<double>(bits.size());
  const double apen = phi(bits, m) - phi(bits, m + 1);
  const double chi2 = 2.0 * n * (std::log(2.0) - apen);
  return igamc(std::ldexp(1.0, static_cast<int>(m) - 1), chi2 / 2.0);
}

std::size_t minimum_length(TestId id, const TestParams& params) {
  switch (id) {
    case TestId::frequency:
    case TestId::cumulative_sums:
      return 1;
    case TestId::runs:
      return 2;
    case TestId::block_frequency:
      return params.block_frequency_m;
    case TestId::longest_run:
      return 128;
    case TestId::spectral:
      return 16;
    case TestId::serial:
      return std::size_t{1} << (params.serial_m + 3);  // m < log2(n) - 2
    case TestId::approximate_entropy:
      return std::size_t{1} << (params.apen_m + 6);  // m < log2(n) - 5
  }
  return 0;
}

std::vector<double> run_test(TestId id, const BitString& block, const TestParams& params) {
  const std::size_t need = minimum_length(id, params);
  require(block.size() >= need, id, block.size(), need);
  if (id == TestId::serial && params.serial_m < 3) throw ConfigError("serial m must be >= 3");
  if (id == TestId::approximate_entropy && params.apen_m < 1) {
    throw ConfigError("approximate entropy m must be >= 1");
  }
  switch (id) {
    case TestId::frequency:
      return {frequency_test(block)};
    case TestId::block_frequency:
      return {block_frequency_test(block, params.block_frequency_m)};
    case TestId::cumulative_sums:
      return cumulative_sums_test(block);
    case TestId::runs:
      return {runs_test(block)};
    case TestId::longest_run:
      return {longest_run_test(block)};
    case TestId::spectral:
      return {spectral_test(block)};
    case TestId::serial:
      return serial_test(block, params.serial_m);
    case TestId::approximate_entropy:
      return {approximate_entropy_test(block, params.apen_m)};
  }
  throw ConfigError("unknown test id");
}

}  // namespace mtjrng::nist
