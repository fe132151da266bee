#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mtjrng/error.hpp"
#include "mtjrng/mtj_sim.hpp"
#include "mtjrng/stattests.hpp"
#include "oracles.hpp"

namespace nist = mtjrng::nist;
using mtjrng::BitString;

namespace {

const char* kPi100 =
    "11001001000011111101101010100010001000010110100011"
    "00001000110100110001001100011001100010100010111000";

BitString random_bits(std::size_t n, std::uint64_t seed, double p = 0.5) {
  std::mt19937_64 rng(seed);
  const auto v = oracle::random_bits(n, rng, p);
  BitString out(n);
  for (std::size_t i = 0; i < n; ++i) out.set(i, v[i]);
  return out;
}

nist::TestParams small_params() {
  nist::TestParams p;
  p.serial_m = 8;
  p.apen_m = 6;
  return p;
}

}  // namespace

TEST(Names, RoundTrip) {
  ASSERT_EQ(nist::all_tests().size(), 8u);
  for (auto id : nist::all_tests()) EXPECT_EQ(nist::parse_test_id(nist::test_name(id)), id);
  EXPECT_FALSE(nist::parse_test_id("rank").has_value());
}

TEST(Frequency, WorkedExamples) {
  EXPECT_NEAR(nist::frequency_test(BitString::from_string("1011010101")), 0.527089, 1e-6);
  EXPECT_NEAR(nist::frequency_test(BitString::from_string(kPi100)), 0.109599, 1e-6);
  EXPECT_DOUBLE_EQ(nist::frequency_test(BitString::from_string("1100")), 1.0);
  EXPECT_LT(nist::frequency_test(BitString::ones(1'000'000)), 1e-100);
}

TEST(Frequency, MatchesOracle) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto v = oracle::random_bits(1000 + t * 37, rng, 0.52);
    BitString b(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) b.set(i, v[i]);
    EXPECT_NEAR(nist::frequency_test(b), oracle::monobit(v), 1e-12);
  }
}

TEST(BlockFrequency, WorkedExamples) {
  EXPECT_NEAR(nist::block_frequency_test(BitString::from_string("0110011010"), 3), 0.801252, 1e-6);
  EXPECT_NEAR(nist::block_frequency_test(BitString::from_string(kPi100), 10), 0.706438, 1e-6);
}

TEST(CumulativeSums, WorkedExamples) {
  const auto a = nist::cumulative_sums_test(BitString::from_string("1011010111"));
  EXPECT_NEAR(a[0], 0.4116588, 1e-6);
  const auto b = nist::cumulative_sums_test(BitString::from_string(kPi100));
  EXPECT_NEAR(b[0], 0.219194, 1e-6);
  EXPECT_NEAR(b[1], 0.114866, 1e-6);
}

TEST(Runs, WorkedExamples) {
  EXPECT_NEAR(nist::runs_test(BitString::from_string("1001101011")), 0.147232, 1e-6);
  EXPECT_NEAR(nist::runs_test(BitString::from_string(kPi100)), 0.500798, 1e-6);
}

TEST(Runs, PrerequisiteGivesZero) {
  EXPECT_EQ(nist::runs_test(random_bits(100'000, 1, 0.6)), 0.0);
}

TEST(LongestRun, WorkedExample) {
  const auto b = BitString::from_string(
      "11001100000101010110110001001100111000000000001001001101010100010001001111010110100000001"
      "101011111001100111001101101100010110010");
  EXPECT_NEAR(nist::longest_run_test(b), 0.180609, 1e-6);
}

TEST(Spectral, WorkedExamples) {
  // All five moduli fall under the threshold here: N1 = 5, d = 0.7254763.
  EXPECT_NEAR(nist::spectral_test(BitString::from_string("1001010011")), 0.46815990985, 1e-9);
  EXPECT_NEAR(nist::spectral_test(BitString::from_string(kPi100)), 0.6463551955, 1e-9);
}

TEST(Serial, WorkedExample) {
  const auto p = nist::serial_test(BitString::from_string("0011011101"), 3);
  EXPECT_NEAR(p[0], 0.808792, 1e-6);
  EXPECT_NEAR(p[1], 0.670320, 1e-6);
}

TEST(ApproximateEntropy, WorkedExamples) {
  EXPECT_NEAR(nist::approximate_entropy_test(BitString::from_string("0100110101"), 3), 0.261961, 1e-6);
  EXPECT_NEAR(nist::approximate_entropy_test(BitString::from_string(kPi100), 2), 0.235301, 1e-6);
}

TEST(RunTest, RangeAndErrors) {
  const auto b = random_bits(1'000'000, 7);
  for (auto id : nist::all_tests()) {
    for (double p : nist::run_test(id, b)) {
      EXPECT_GE(p, 0.0) << nist::test_name(id);
      EXPECT_LE(p, 1.0) << nist::test_name(id);
    }
  }
  EXPECT_THROW(nist::run_test(nist::TestId::serial, random_bits(1000, 1)), mtjrng::StageError);
  EXPECT_EQ(nist::run_test(nist::TestId::cumulative_sums, b).size(), 2u);
  EXPECT_EQ(nist::run_test(nist::TestId::serial, b).size(), 2u);
}

TEST(ProportionThreshold, Values) {
  EXPECT_DOUBLE_EQ(nist::floor4(nist::proportion_threshold(0.01, 169)), 0.9670);
  EXPECT_DOUBLE_EQ(nist::floor4(nist::proportion_threshold(0.01, 217)), 0.9697);
  EXPECT_NEAR(nist::proportion_threshold(1e-12, 100), 1.0, 1e-5);
  EXPECT_THROW(nist::proportion_threshold(0.0, 100), mtjrng::ConfigError);
  EXPECT_THROW(nist::proportion_threshold(1.0, 100), mtjrng::ConfigError);
  EXPECT_THROW(nist::proportion_threshold(0.01, 1), mtjrng::ConfigError);
}

TEST(Floor4, Truncates) {
  EXPECT_DOUBLE_EQ(nist::floor4(0.96709), 0.9670);
  EXPECT_DOUBLE_EQ(nist::floor4(0.9697), 0.9697);
  EXPECT_DOUBLE_EQ(nist::floor4(1.0), 1.0);
  EXPECT_DOUBLE_EQ(nist::floor4(0.0), 0.0);
}

TEST(Uniformity, Examples) {
  std::vector<double> one_per_bin;
  for (int i = 0; i < 10; ++i) one_per_bin.push_back(0.05 + 0.1 * i);
  EXPECT_EQ(nist::pvalue_uniformity(one_per_bin), 1.0);
  EXPECT_LT(nist::pvalue_uniformity(std::vector<double>(100, 0.5)), 1e-10);
  EXPECT_THROW(nist::pvalue_uniformity({}), mtjrng::ConfigError);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> draws(1000);
  for (auto& d : draws) d = u(rng);
  EXPECT_GE(nist::pvalue_uniformity(draws), nist::kUniformityThreshold);
}

TEST(Uniformity, EdgeBins) {
  // 1.0 belongs to the last bin, 0.0 to the first.
  std::vector<double> v{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 1.0};
  EXPECT_EQ(nist::pvalue_uniformity(v), 1.0);
}

TEST(Suite, UniformSyntheticCalibrated) {
  // Single 100-block verdicts on ideal data fail ~15% of the time across ten
  // variants, so check per-block rejection rates on 1000 blocks instead.
  constexpr std::size_t kBlocks = 1000;
  const auto b = random_bits(kBlocks * 20'000, 2024);
  const auto r = nist::run_suite(b, 20'000, 0.01, small_params());
  EXPECT_EQ(r.n_blocks, kBlocks);
  const double mean = 0.01 * kBlocks;
  const double bound = mean + 5.0 * std::sqrt(mean * 0.99);
  for (const auto& t : r.results) {
    EXPECT_FALSE(t.skipped) << nist::test_name(t.id);
    EXPECT_GE(t.proportion, 0.0);
    EXPECT_LE(t.proportion, 1.0);
    for (const auto& v : t.variants) {
      ASSERT_EQ(v.pvalues.size(), kBlocks);
      std::size_t rejected = 0;
      for (double p : v.pvalues) {
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
        rejected += p < 0.01;
      }
      EXPECT_LE(static_cast<double>(rejected), bound) << nist::test_name(t.id) << " " << v.label;
    }
  }
}

TEST(Suite, BiasedFailsFrequencyAndSkipsRuns) {
  const auto b = random_bits(10 * 20'000, 5, 0.55);
  const auto r = nist::run_suite(b, 20'000, 0.01, small_params());
  EXPECT_FALSE(r.result(nist::TestId::frequency).pass);
  EXPECT_TRUE(r.result(nist::TestId::runs).skipped);
  EXPECT_FALSE(r.result(nist::TestId::runs).pass);
  EXPECT_FALSE(r.overall_pass);
  EXPECT_NE(nist::render_table(r).find("Skipped (prerequisite failed)"), std::string::npos);
}

TEST(Suite, SimulatedRawFailsFrequencyAndSerial) {
  const auto p = mtjrng::mtj::calibrate({}, {}, 0.55);
  mtjrng::mtj::NoiseModel n;
  n.markov_flip = 0.2;
  const auto bits = mtjrng::mtj::generate_raw(3'000'000, {}, p, n, 99);
  const auto r = nist::run_suite(bits, 1'000'000);
  EXPECT_FALSE(r.result(nist::TestId::frequency).pass);
  EXPECT_FALSE(r.result(nist::TestId::serial).pass);
  EXPECT_TRUE(r.result(nist::TestId::approximate_entropy).skipped);
}

TEST(Suite, PartitionAndRemainder) {
  const auto b = random_bits(5 * 20'000 + 1234, 6);
  const auto r = nist::run_suite(b, 20'000, 0.01, small_params());
  EXPECT_EQ(r.n_blocks, 5u);
  EXPECT_EQ(r.discarded_bits, 1234u);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_DOUBLE_EQ(r.threshold, nist::proportion_threshold(0.01, 5));
}

TEST(Suite, Errors) {
  const auto b = random_bits(100'000, 8);
  EXPECT_THROW(nist::run_suite(b, 0), mtjrng::ConfigError);
  EXPECT_THROW(nist::run_suite(b, 60'000, 0.01, small_params()), mtjrng::StageError);
  EXPECT_THROW(nist::run_suite(b, 20'000, 1.5, small_params()), mtjrng::ConfigError);
  EXPECT_THROW(nist::run_suite(b, 20'000), mtjrng::ConfigError);  // serial m=16 needs 2^19
}

TEST(Suite, Deterministic) {
  const auto b = random_bits(4 * 20'000, 9);
  EXPECT_EQ(nist::render_machine(nist::run_suite(b, 20'000, 0.01, small_params())),
            nist::render_machine(nist::run_suite(b, 20'000, 0.01, small_params())));
}

TEST(Suite, MinimumAcrossVariants) {
  const auto r = nist::run_suite(random_bits(6 * 20'000, 10), 20'000, 0.01, small_params());
  for (auto id : {nist::TestId::cumulative_sums, nist::TestId::serial}) {
    const auto& t = r.result(id);
    ASSERT_EQ(t.variants.size(), 2u);
    EXPECT_EQ(t.proportion, std::min(t.variants[0].proportion, t.variants[1].proportion));
    EXPECT_EQ(t.pvalue_t, std::min(t.variants[0].pvalue_t, t.variants[1].pvalue_t));
  }
}
