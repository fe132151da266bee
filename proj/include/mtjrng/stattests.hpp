#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtjrng/bit_string.hpp"

// A subset of the SP 800-22 statistical tests with its two-level analysis:
// each test runs on every block, then the pass proportion and the uniformity
// of the per-block P-values decide the verdict.
namespace mtjrng::nist {

enum class TestId {
  frequency,
  block_frequency,
  cumulative_sums,
  runs,
  longest_run,
  spectral,
  serial,
  approximate_entropy,
};

std::string_view test_name(TestId id);
std::optional<TestId> parse_test_id(std::string_view name);
const std::vector<TestId>& all_tests();

struct TestParams {
  std::size_t block_frequency_m = 128;
  unsigned serial_m = 16;
  unsigned apen_m = 10;
};

// Single-sequence tests. Each returns P-values in [0, 1].
double frequency_test(const BitString& bits);
double block_frequency_test(const BitString& bits, std::size_t block = 128);
// {forward, backward}
std::vector<double> cumulative_sums_test(const BitString& bits);
// Returns 0 when the sequence fails the runs prerequisite |pi - 1/2| < 2/sqrt(n).
double runs_test(const BitString& bits);
double longest_run_test(const BitString& bits);
double spectral_test(const BitString& bits);
// {del psi^2, del^2 psi^2}
std::vector<double> serial_test(const BitString& bits, unsigned m = 16);
double approximate_entropy_test(const BitString& bits, unsigned m = 10);

// Smallest block the test accepts under `params`.
std::size_t minimum_length(TestId id, const TestParams& params = {});

// Dispatches to the test above; rejects blocks below minimum_length().
std::vector<double> run_test(TestId id, const BitString& block, const TestParams& params = {});

// Lower edge of the pass-proportion confidence interval,
// (1 - alpha) - 3 sqrt(alpha (1 - alpha) / n_blocks).
double proportion_threshold(double alpha, std::size_t n_blocks);

// Chi-square over ten equal-width bins of [0, 1] with nine degrees of freedom.
double pvalue_uniformity(std::span<const double> pvalues);

inline constexpr double kUniformityThreshold = 0.0001;

// Truncation to four decimals, used for display.
double floor4(double value);

struct VariantResult {
  std::string label;
  std::vector<double> pvalues;  // one per block
  double proportion = 0.0;
  double pvalue_t = 0.0;
  bool pass = false;
};

struct TestResult {
  TestId id;
  std::vector<VariantResult> variants;
  // Minimum across variants.
  double proportion = 0.0;
  double pvalue_t = 0.0;
  // Not run because its prerequisite test failed; counts as a failure.
  bool skipped = false;
  bool pass = false;
};

struct SuiteReport {
  std::size_t block_length = 0;
  std::size_t n_blocks = 0;
  std::size_t discarded_bits = 0;
  double alpha = 0.01;
  double threshold = 0.0;
  std::vector<TestResult> results;
  bool overall_pass = false;
  std::vector<std::string> warnings;

  const TestResult& result(TestId id) const;
};

SuiteReport run_suite(const BitString& bits, std::size_t block_length, double alpha = 0.01,
                      const TestParams& params = {});

// Aligned table: test, P-value, proportion, result.
std::string render_table(const SuiteReport& report);
// key=value lines with full precision.
std::string render_machine(const SuiteReport& report);

}  // namespace mtjrng::nist
