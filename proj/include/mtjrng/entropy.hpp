#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mtjrng/bit_string.hpp"

// Min-entropy lower bounds and IID checks for binary sources, following the
// SP 800-90B estimators: most-common-value, Markov, the chi-square
// independence test and the shuffle-based permutation test.
namespace mtjrng::entropy {

// Most-common-value estimate with the 99% upper confidence bound on the
// most likely symbol. Requires at least 2 bits.
double mcv_estimate(const BitString& bits);

// First-order Markov estimate: -log2 of the most probable 128-bit path under
// the empirical initial and transition probabilities, divided by 128 and
// capped at 1. Requires at least 2 bits.
double markov_estimate(const BitString& bits);

struct ChiSquareResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  std::size_t degrees_of_freedom = 0;
  unsigned tuple_length = 0;  // 0 when the data cannot support any tuple length
  bool pass = false;
};

inline constexpr double kChiSquareSignificance = 0.001;
inline constexpr std::size_t kChiSquareMinBits = 10'000;

// Frequencies of non-overlapping m-bit tuples against the product of the bit
// marginals. A source with a missing symbol fails outright.
ChiSquareResult chi_square_independence(const BitString& bits,
                                        std::size_t min_length = kChiSquareMinBits);

enum class StatisticKind {
  excursion,
  directional_runs,
  longest_directional_run,
  increases_decreases,
  median_runs,
  longest_median_run,
  average_collision,
  max_collision,
  periodicity,
  covariance,
};

struct Statistic {
  StatisticKind kind;
  std::size_t lag = 0;  // periodicity and covariance only

  std::string name() const;
  friend bool operator==(const Statistic&, const Statistic&) = default;
};

// Every statistic implemented here, with lags 1, 2, 8, 16 and 32.
std::vector<Statistic> all_statistics();
// The four statistics required at minimum.
std::vector<Statistic> core_statistics();

struct PermutationOptions {
  std::size_t n_shuffles = 10'000;
  std::uint64_t seed = 0;
  std::vector<Statistic> statistics = all_statistics();
  // Only this many leading bits enter the test.
  std::size_t max_bits = 1'000'000;
};

struct StatisticRank {
  Statistic statistic;
  double original = 0.0;
  std::size_t greater = 0;  // shuffles with a larger value (C0)
  std::size_t equal = 0;    // shuffles with the same value (C1)
  bool pass = true;
};

struct PermutationResult {
  std::vector<StatisticRank> ranks;
  std::size_t n_shuffles = 0;
  std::size_t bits_used = 0;
  bool degenerate = false;  // constant input; reported as a failure
  bool pass = false;
};

// Value of one statistic on 0/1 samples (one byte per bit).
double compute_statistic(const Statistic& statistic, std::span<const std::uint8_t> samples);

// Shuffle i draws from a generator seeded with (seed, i), so the result does
// not depend on evaluation order.
PermutationResult permutation_test(const BitString& bits, const PermutationOptions& options);

enum class Verdict { iid, non_iid };

struct EntropyReport {
  std::size_t n_bits = 0;
  double h_min_per_bit = 0.0;
  std::uint64_t k_extractable = 0;
  Verdict iid_verdict = Verdict::non_iid;
  std::vector<std::pair<std::string, double>> estimator_details;
  ChiSquareResult chi_square;
  PermutationResult permutation;
  std::vector<std::string> warnings;
};

// floor(n_bits * h_per_bit), computed exactly on the binary value of the
// double, so it never rounds up across an integer.
std::uint64_t extractable_bits(std::uint64_t n_bits, double h_per_bit);

struct AssessOptions {
  PermutationOptions permutation;
  std::size_t recommended_bits = 1'000'000;
};

EntropyReport assess(const BitString& bits, const AssessOptions& options = {});

// "key: value" lines.
std::string render_report(const EntropyReport& report);
// Reads back the fields needed downstream (n_bits, h_min_per_bit,
// k_extractable, iid_verdict); unknown keys are ignored.
EntropyReport parse_report(std::string_view text);

}  // namespace mtjrng::entropy
