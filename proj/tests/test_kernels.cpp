#include <bit>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mtjrng/kernels/kernels.hpp"
#include "mtjrng/kernels/montgomery.hpp"
#include "mtjrng/ntt.hpp"

namespace k = mtjrng::kernels;
namespace modp = mtjrng::modp;

namespace {

std::vector<const k::KernelTable*> tables() {
  std::vector<const k::KernelTable*> out;
  for (auto isa : k::available_isas()) out.push_back(k::table_for(isa));
  return out;
}

std::vector<std::uint64_t> random_words(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::uint64_t> w(n);
  for (auto& v : w) v = rng();
  return w;
}

std::vector<std::uint32_t> random_residues(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::uint32_t> w(n);
  for (auto& v : w) v = static_cast<std::uint32_t>(rng() % modp::kPrime);
  return w;
}

// Plain O(L^2) cyclic convolution mod p.
std::vector<std::uint32_t> slow_cyclic(const std::vector<std::uint32_t>& a,
                                       const std::vector<std::uint32_t>& b) {
  const std::size_t n = a.size();
  std::vector<std::uint32_t> out(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto prod = static_cast<unsigned __int128>(a[i]) * b[j] % modp::kPrime;
      out[(i + j) % n] = static_cast<std::uint32_t>((out[(i + j) % n] + prod) % modp::kPrime);
    }
  return out;
}

}  // namespace

TEST(Kernels, ScalarAlwaysAvailable) {
  ASSERT_NE(k::table_for(k::Isa::scalar), nullptr);
  EXPECT_EQ(k::scalar_table().isa, k::Isa::scalar);
  EXPECT_FALSE(k::isa_name(k::kernels().isa).empty());
}

TEST(Montgomery, AgreesWithWideArithmetic) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100000; ++i) {
    const std::uint32_t a = rng() % modp::kPrime, b = rng() % modp::kPrime;
    const auto expect = static_cast<std::uint32_t>(static_cast<unsigned __int128>(a) * b % modp::kPrime);
    EXPECT_EQ(modp::mul(a, b), expect);
    EXPECT_EQ(modp::from_mont(modp::to_mont(a)), a);
  }
  EXPECT_EQ(modp::pow(modp::kGenerator, modp::kPrime - 1), 1u);
  EXPECT_NE(modp::pow(modp::kGenerator, (modp::kPrime - 1) / 2), 1u);
  EXPECT_NE(modp::pow(modp::kGenerator, (modp::kPrime - 1) / 3), 1u);
  EXPECT_EQ(modp::mul(modp::inverse(12345), 12345), 1u);
}

TEST(Kernels, BitKernelsMatchScalar) {
  const auto& ref = k::scalar_table();
  std::mt19937_64 rng(2);
  for (const auto* t : tables()) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 16u, 33u, 1000u, 4099u}) {
      const auto a = random_words(n, rng), b = random_words(n, rng);
      std::vector<std::uint64_t> x1(n), x2(n);
      ref.xor_words(a, b, x1);
      t->xor_words(a, b, x2);
      EXPECT_EQ(x1, x2) << k::isa_name(t->isa) << " n=" << n;
      EXPECT_EQ(ref.popcount_words(a), t->popcount_words(a));
      EXPECT_EQ(ref.and_popcount(a, b), t->and_popcount(a, b));
      std::uint64_t naive = 0;
      for (std::size_t i = 0; i < n; ++i) naive += std::popcount(a[i] & b[i]);
      EXPECT_EQ(ref.and_popcount(a, b), naive);
    }
  }
}

TEST(Kernels, NttStagesMatchScalar) {
  const auto& ref = k::scalar_table();
  std::mt19937_64 rng(3);
  for (const auto* t : tables()) {
    for (std::size_t half = 1; half <= 512; half *= 2) {
      const std::size_t len = 4 * half;
      const auto tw = random_residues(half, rng);
      const auto data = random_residues(len, rng);
      auto d1 = data, d2 = data;
      ref.ntt_dif_stage(d1, tw, half);
      t->ntt_dif_stage(d2, tw, half);
      EXPECT_EQ(d1, d2) << "dif half=" << half;
      d1 = data;
      d2 = data;
      ref.ntt_dit_stage(d1, tw, half);
      t->ntt_dit_stage(d2, tw, half);
      EXPECT_EQ(d1, d2) << "dit half=" << half;
    }
    for (std::size_t n : {1u, 5u, 8u, 13u, 1024u}) {
      const auto a = random_residues(n, rng), b = random_residues(n, rng);
      const std::uint32_t scale = rng() % modp::kPrime;
      auto r1 = a, r2 = a;
      ref.pointwise_mul(r1, b, scale);
      t->pointwise_mul(r2, b, scale);
      EXPECT_EQ(r1, r2);
    }
  }
}

TEST(Kernels, ExtremeResidues) {
  const auto& ref = k::scalar_table();
  std::vector<std::uint32_t> edge{0, 1, 2, modp::kPrime - 1, modp::kPrime - 2,
                                  static_cast<std::uint32_t>(modp::kPrime / 2), 0x7fffffff, 0x80000000};
  for (const auto* t : tables()) {
    std::vector<std::uint32_t> a(64), b(64);
    for (std::size_t i = 0; i < 64; ++i) {
      a[i] = edge[i % edge.size()];
      b[i] = edge[(i / edge.size()) % edge.size()];
    }
    auto r1 = a, r2 = a;
    ref.pointwise_mul(r1, b, modp::kR2);
    t->pointwise_mul(r2, b, modp::kR2);
    EXPECT_EQ(r1, r2);
    for (std::size_t i = 0; i < 64; ++i)
      EXPECT_EQ(r1[i], static_cast<std::uint32_t>(static_cast<unsigned __int128>(a[i]) * b[i] % modp::kPrime));
    std::vector<std::uint32_t> tw(16, modp::kPrime - 1);
    auto d1 = a, d2 = a;
    ref.ntt_dif_stage(d1, tw, 16);
    t->ntt_dif_stage(d2, tw, 16);
    EXPECT_EQ(d1, d2);
    for (auto v : d1) EXPECT_LT(v, modp::kPrime);
  }
}

TEST(Ntt, ConvolutionMatchesQuadratic) {
  std::mt19937_64 rng(4);
  for (const auto* t : tables()) {
    for (std::size_t len : {2u, 4u, 8u, 32u, 64u, 256u}) {
      const auto a = random_residues(len, rng), b = random_residues(len, rng);
      auto x = a, y = b;
      mtjrng::ntt::Plan(len).convolve(x, y, *t);
      EXPECT_EQ(x, slow_cyclic(a, b)) << k::isa_name(t->isa) << " L=" << len;
    }
  }
}

TEST(Ntt, LargeTransformIsaAgreement) {
  // Above the cache block size so the blocked stage schedule is exercised.
  const std::size_t len = std::size_t{1} << 16;
  std::mt19937_64 rng(5);
  const auto a = random_residues(len, rng), b = random_residues(len, rng);
  std::vector<std::vector<std::uint32_t>> results;
  for (const auto* t : tables()) {
    auto x = a, y = b;
    mtjrng::ntt::Plan(len).convolve(x, y, *t);
    results.push_back(x);
  }
  for (const auto& r : results) EXPECT_EQ(r, results.front());
  // Spot-check a few coefficients against the definition.
  for (std::size_t c : {0u, 1u, 777u, 65535u}) {
    unsigned __int128 acc = 0;
    for (std::size_t i = 0; i < len; ++i) acc = (acc + static_cast<unsigned __int128>(a[i]) * b[(c + len - i) % len]) % modp::kPrime;
    EXPECT_EQ(results.front()[c], static_cast<std::uint32_t>(acc));
  }
}

TEST(Ntt, TransformLength) {
  EXPECT_EQ(mtjrng::ntt::transform_length(1), 2u);
  EXPECT_EQ(mtjrng::ntt::transform_length(5), 8u);
  EXPECT_EQ(mtjrng::ntt::transform_length(1024), 1024u);
  EXPECT_THROW(mtjrng::ntt::Plan(3), std::exception);
}
